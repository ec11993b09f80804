#pragma once

// Property batteries and the acceptance matrix.  The CLI subcommands and the acceptance binary
// share these drivers.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dagger/frobenius_zeta.hpp"

namespace dagger {

struct PropertyTally {
    std::string name;
    int checked = 0;
    int failed = 0;
    std::string first_failure;
    bool pass() const { return failed == 0; }
    void record(bool ok, const std::string& what = {});
};

struct BatteryResult {
    std::vector<PropertyTally> properties;
    std::vector<std::string> notes;
    bool pass() const;
    PropertyTally& tally(const std::string& name);
    void merge(const BatteryResult& o);
    std::string summary() const;
};

// Random automorphisms theta(a), a_i = p * (random polynomial of degree <= deg).  n = 0 is the
// trivial group and passes vacuously.
BatteryResult group_battery(std::uint64_t p, int s, int n, int count, std::uint64_t seed, int deg = 2);
// Symbol round trip, composition vs action, transpose identities, echelon rewrite for h = 0, 1, 2.
BatteryResult operator_battery(std::uint64_t p, int s, int pairs, std::uint64_t seed);

struct LocalSetup {
    int n = 2;
    std::vector<TruncSeries> z;
    std::vector<std::vector<TruncSeries>> z_prime;
    int A = 3;
};
// Annihilators, coordinate changes and purity for one configuration.
BatteryResult localcoh_battery(const LocalSetup& setup, const PrecisionPolicy& pol);
// Both annihilator families for several (n, q), >= 10 random unipotent changes, purity windows.
BatteryResult localcoh_suite(std::uint64_t seed);
// Howell form vs brute-force span, val_factorial vs direct counting.
BatteryResult kernel_battery(int matrices, std::uint64_t seed);

struct CriterionResult {
    int id = 0;
    std::string name;
    bool correct = false;
    double seconds = 0;
    double limit = 0;
    std::string detail;
    bool pass() const { return correct && seconds <= limit; }
};

// The varieties of the zeta criterion, with display names.
std::vector<std::pair<std::string, VarietyPresentation>> acceptance_varieties();

CriterionResult criterion_zeta();
CriterionResult criterion_homotopy();
CriterionResult criterion_gysin();
CriterionResult criterion_operators(std::uint64_t seed);
CriterionResult criterion_group(std::uint64_t seed);
CriterionResult criterion_localcoh(std::uint64_t seed);
CriterionResult criterion_kernels(std::uint64_t seed);

// progress(r) is called after each criterion.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                            const std::function<void(const CriterionResult&)>& progress = {});
std::string format_criterion(const CriterionResult& r);

}  // namespace dagger
