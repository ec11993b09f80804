#pragma once

// Finite fields F_{p^m} (q <= 2^24) via log/exp tables, and point counting on presentations.

#include <cstdint>
#include <vector>

#include "dagger/presentation.hpp"

namespace dagger {

class FiniteField {
public:
    // The defining polynomial is the first irreducible among seeded random monic candidates.
    FiniteField(std::uint64_t p, int m, std::uint64_t seed = 0x5eed);

    std::uint64_t p() const { return p_; }
    int degree() const { return m_; }
    std::uint32_t q() const { return q_; }
    // Monic modulus, low coefficient first (size m+1).
    const std::vector<std::uint64_t>& modulus() const { return modulus_; }
    std::uint32_t generator() const { return exp_[1]; }

    // Elements are integers sum c_j p^j encoding sum c_j X^j.
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t neg(std::uint32_t a) const;
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
    std::uint32_t from_int(std::int64_t c) const;
    // Discrete log with respect to generator(); a must be nonzero.
    std::uint32_t log(std::uint32_t a) const { return log_[a]; }
    std::uint32_t exp(std::uint64_t k) const { return exp_[k % (q_ - 1)]; }
    std::uint32_t eval(const std::vector<std::int64_t>& coeffs, std::uint32_t x) const;

    // Rabin irreducibility test over F_p.
    static bool is_irreducible(const std::vector<std::uint64_t>& monic, std::uint64_t p);

private:
    std::uint64_t p_;
    int m_;
    std::uint32_t q_;
    std::vector<std::uint64_t> modulus_;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> log_;
};

// Guard: q^dim must not exceed this many tuples.
constexpr std::uint64_t kPointCountGuard = 100000000ull;

// #X(F_{p^m}).  The parallel version distributes the tuple enumeration with OpenMP.
std::uint64_t count_points(const VarietyPresentation& pres, std::uint64_t p, int m);
std::uint64_t count_points_serial(const VarietyPresentation& pres, std::uint64_t p, int m);
// Independent oracle: enumerates every (x, t) coordinate tuple and tests the relations directly.
std::uint64_t count_points_naive(const VarietyPresentation& pres, std::uint64_t p, int m);

}  // namespace dagger
