#pragma once

// Frobenius lifts, the matrices of Frobenius on H^i, and zeta functions of presented varieties.
//
// The lift is x -> x^p on every coordinate and, on a cover t^e = g,
//   t^k -> t^{pk} (1 + h t^{-ep})^{k/e},   h = g(x^p) - g(x)^p,
// expanded as a binomial series.  h is divisible by p, so term j has valuation >= j.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dagger/mw_cohomology.hpp"

namespace dagger {

using BigInt = boost::multiprecision::cpp_int;
using PMatrix = std::vector<std::vector<PadicNumber>>;

class FrobeniusLift {
public:
    // terms: number of binomial-series terms kept on every cover factor (0 picks a default for N).
    FrobeniusLift(const VarietyPresentation& pres, std::uint64_t p, int N, int terms = 0);

    const VarietyPresentation& presentation() const { return pres_; }
    std::uint64_t p() const { return p_; }
    int precision() const { return N_; }
    int series_terms() const { return J_; }
    // True when no cover needs a series (g a monomial): the images are then exact integers.
    bool exact() const { return exact_; }

    // sigma(m dx_S) = sigma(m) * prod_{f in S} p x_f^{p-1} dx_f, in normal form, mod p^N.
    const Form& image(const FormKey& k) const;
    KForm image(const KForm& w) const;
    // sigma of a function monomial (S = 0) as a series in the presentation's normal form.
    TruncSeries image_series(const Exp& e) const;

    // sigma(t)^e - g(sigma(x)) vanishes mod p^N on every cover; sigma(t^k) == t^{pk} mod p.
    bool check_relations() const;
    bool check_mod_p() const;

private:
    using FactorImage = std::map<std::pair<int, int>, std::uint64_t>;
    const FactorImage& factor_image(int f, int i, int k, bool with_dx) const;

    VarietyPresentation pres_;
    std::uint64_t p_;
    int N_;
    int J_;
    bool exact_ = true;
    Zmod R_;
    mutable std::map<std::tuple<int, int, int, bool>, FactorImage> fcache_;
    mutable std::map<FormKey, Form> cache_;
};

// Characteristic polynomial det(u I - A), coefficients low to high (Berkowitz, division free).
std::vector<PadicNumber> charpoly(const PMatrix& A, std::uint64_t p);
// Inverse by Gauss-Jordan with minimal-valuation pivots; throws PrecisionError when singular at precision.
PMatrix inverse(const PMatrix& A, std::uint64_t p);
PMatrix matmul(const PMatrix& A, const PMatrix& B);
PadicNumber trace(const PMatrix& A, std::uint64_t p);

// Newton's identities: power sums s_1..s_M of the reciprocal roots of P(t) = 1 + c_1 t + ...
std::vector<BigInt> power_sums(const std::vector<std::int64_t>& P, int M);

// Weil-type bound on |coefficient of t^k| in P_i for dim H^i = h on a variety of dimension n.
BigInt coefficient_bound(std::uint64_t p, int n, int i, int h, int k);
// Bound on |Tr((q^n F^-1)^m)| on H^i.
BigInt trace_bound(std::uint64_t p, int n, int i, int h, int m);
// Digits d with p^d > 2B for every coefficient and trace bound B used by zeta() at depth M.
int required_precision(std::uint64_t p, int n, const std::vector<int>& dims, int M);

struct FrobeniusMatrix {
    int degree = 0;
    PMatrix F;      // columns: coordinates of sigma(basis_j)
    int loss = 0;   // working precision minus the smallest absolute precision of an entry
};

struct ZetaReport {
    std::string variety;
    std::uint64_t p = 0;
    int precision = 0;          // working precision used
    int required_precision = 0; // digits needed for certified rounding
    bool auto_sized = false;
    int attempts = 0;
    int D = 0, E = 0;
    int depth = 0;
    int series_terms = 0;
    std::vector<int> dims;
    std::vector<FrobeniusMatrix> frobenius;
    std::vector<std::vector<PadicNumber>> P_padic;  // P_i coefficients before rounding
    std::vector<std::vector<std::int64_t>> P;       // certified integer coefficients
    std::vector<std::int64_t> numerator, denominator;  // Z = numerator / denominator
    std::vector<BigInt> recovered;   // N_1..N_M from the zeta function
    std::vector<BigInt> base_change; // sum (-1)^i Tr((q^n F^-1)^m), rounded
    std::vector<BigInt> oracle;      // brute-force counts
    PadicNumber lefschetz;
    std::optional<std::int64_t> lefschetz_rounded;
    std::optional<bool> weil_check;  // hyperelliptic only: the curve factor of P_1 has t^2 coefficient q
    bool pass = false;
};

struct ZetaOptions {
    int depth = 0;            // M; 0 picks 4, or 3 when p^8 > 1e8
    std::optional<int> precision;  // fixed s; refused with PrecisionError when below the requirement
    int D = 4, E = 2;
    bool oracle = true;
};

int default_depth(std::uint64_t p);

// Frobenius matrix on H^degree.  The lift is known mod p^N (N = lift.precision()); in top degree the
// effect of that error is bounded by reducing every window monomial exactly.
FrobeniusMatrix frobenius_matrix(const FrobeniusLift& lift, const CohomologySpace& H);

ZetaReport zeta(const VarietyPresentation& pres, std::uint64_t p, const ZetaOptions& opt = {});

// L(X) = sum (-1)^i Tr(q^n (F^i)^-1).
PadicNumber lefschetz(const VarietyPresentation& pres, std::uint64_t p, const ZetaOptions& opt = {});

}  // namespace dagger
