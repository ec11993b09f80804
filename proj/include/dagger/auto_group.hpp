#pragma once

// Automorphisms x -> x + a of Z/p^s[x_1..x_n] with a = 0 mod p.
//
// Arithmetic is exact: a^alpha vanishes mod p^s once |alpha| >= s, so every element, product,
// inverse and operator form is a polynomial.  The policy's D only sizes the monomial windows
// used by the checks.

#include <cstdint>
#include <vector>

#include "dagger/diff_ops.hpp"

namespace dagger {

class GroupElement {
public:
    GroupElement() = default;
    // DomainError unless every coefficient of every a_i is divisible by p.
    GroupElement(const PrecisionPolicy& policy, std::vector<TruncSeries> a);

    static GroupElement identity(const PrecisionPolicy& policy, int n);

    const PrecisionPolicy& policy() const { return policy_; }
    int nvars() const { return static_cast<int>(a_.size()); }
    const std::vector<TruncSeries>& a() const { return a_; }

    // f(x + a), in f's policy.
    TruncSeries act(const TruncSeries& f) const;
    // sum_{|alpha| < s} a^alpha Delta^alpha.
    DiffOperator operator_form() const;

    bool operator==(const GroupElement& o) const;
    bool operator!=(const GroupElement& o) const { return !(*this == o); }

private:
    PrecisionPolicy policy_;
    std::vector<TruncSeries> a_;  // unbounded policy
};

GroupElement theta(const PrecisionPolicy& policy, const std::vector<TruncSeries>& a);
std::vector<TruncSeries> delta(const GroupElement& g);
// Reads a_i from the Delta_i coefficients; DomainError unless the symbol is exactly a^alpha.
GroupElement theta_from_operator(const DiffOperator& P);

// (g1 g2)(f) = g1(g2(f)):  delta(g1 g2) = delta(g1) + g1(delta(g2)).
GroupElement group_mul(const GroupElement& g1, const GroupElement& g2);
GroupElement group_inv(const GroupElement& g);

// Operator form against substitution on every monomial of degree <= D.
bool homomorphism_check(const GroupElement& g, int D);

// The iterated commutator [..[[g, a_1], a_2].., a_k] kills every monomial of degree <= D mod p^k.
bool order_bound_check(const GroupElement& g, int s_prime, const std::vector<TruncSeries>& tests, int D);

struct JacobianSides {
    TruncSeries left;   // transpose of the inverse's operator form, applied to 1
    TruncSeries right;  // det(Delta_j g(x_i))
    bool equal = false;
};
JacobianSides jacobian_identity(const GroupElement& g);

struct CocycleValue {
    TruncSeries value;  // reduced mod p^precision
    int precision = 0;
};
// log(1 + u) for a polynomial u = 0 mod p, as sum (-1)^(m+1) u^m / m.
CocycleValue series_log1p(const TruncSeries& u);
CocycleValue log_cocycle(const GroupElement& g);
// c(g1 g2) == c(g1) + g1(c(g2)) at the common precision.
bool cocycle_law_check(const GroupElement& g1, const GroupElement& g2);

// Factors g_1..g_n with delta_j(g_i) = 0 for j != i and g = g_n ... g_1.
std::vector<GroupElement> axis_factorization(const GroupElement& g);
GroupElement product(const std::vector<GroupElement>& factors_low_first);

}  // namespace dagger
