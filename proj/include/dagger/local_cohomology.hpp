#pragma once

// Local cohomology H^q_Y of affine n-space along Y = V(z_1..z_q), Cech model.
//
// Each z_i must be adapted to the coordinate x_i: z_i = c_i x_i + eps_i with c_i a unit and every
// term of eps_i divisible by p or of degree >= 2.  Then 1/z_i expands as a Laurent series with poles
// along x_i only, and the (q-1)-spots of the Cech complex are the spans of monomials with some
// x_i-exponent >= 0 (i < q).  A class is stored through its principal part (all x_1..x_q exponents
// negative).
//
// Truncation uses the weight w(p^v x^e) = (e_1 + ... + e_n) + 2v.  Products add weights, Delta^alpha
// lowers them by |alpha| and the correction terms of 1/z_i all have weight >= 1, so a series known
// modulo weight > W is exact: the coefficient of x^e is known mod p^ceil((W + 1 - |e|) / 2).

#include <cstdint>
#include <vector>

#include "dagger/diff_ops.hpp"

namespace dagger {

struct CechClass {
    PrecisionPolicy policy;  // D, E: the displayed window (positive degree <= D, pole orders <= E)
    int n = 0;
    int q = 0;
    std::vector<TruncSeries> z;
    int W = 0;               // rep is exact modulo weight > W
    bool top = true;         // false: an element of A[1/(z_1..z_q)] itself, not its class
    TruncSeries rep;

    // Terms in the displayed window; mod p^s whenever W >= D + 2s - 1.
    TruncSeries window() const;
    bool is_zero() const { return window().is_zero(); }
    bool equals(const CechClass& o) const;
};

// Residue class of f modulo weight > W.
TruncSeries weight_reduce(const TruncSeries& f, int W);
// The weight needed for the displayed window to be exact mod p^s.
int window_weight(const PrecisionPolicy& pol);

// DomainError when z_i is not adapted to x_i.
void check_adapted(const std::vector<TruncSeries>& z);
// Rank-q Jacobian at every F_p-point of V(z mod p) (all points when p^n <= 4096, else the first 4096).
bool smooth_complete_intersection(const std::vector<TruncSeries>& z);
// 1/z_i modulo weight > W.
TruncSeries laurent_inverse(const TruncSeries& zi, int i, int W);

// [1/(z_1...z_q)]; slack = how much operator order the class can absorb before the window is exhausted.
CechClass class_one_over_z(const std::vector<TruncSeries>& z, const PrecisionPolicy& pol, int slack = 8);
// 1/(z_1...z_q) in the localization (no quotient).
CechClass meromorphic_one_over_z(const std::vector<TruncSeries>& z, const PrecisionPolicy& pol, int slack = 8);
// g * c for a polynomial g, as a class with the same window.
CechClass multiply(const TruncSeries& g, const CechClass& c);

// Acts on the representative and projects to the principal part (for top classes).  Lowers W by the
// operator's order; InstabilityError once W drops below window_weight (pole/window overflow).
CechClass op_action(const DiffOperator& P, const CechClass& c);

struct AnnihilatorReport {
    bool meromorphic = false;  // Delta_i^a o z_i kill 1/(z_1..z_q) in the localization
    bool top = false;          // z_i and Delta_j^a (j >= q) kill [1/z] in H^q
    int generators = 0;
    bool pass() const { return meromorphic && top; }
};
// Generator exponents 1..A.  z must be the coordinates x_1..x_q.
AnnihilatorReport annihilator_check(const std::vector<TruncSeries>& z, const PrecisionPolicy& pol, int A);
// The generator lists themselves (as operators with order bound A + 1).
std::vector<DiffOperator> meromorphic_annihilators(int n, int q, const PrecisionPolicy& pol, int A);
std::vector<DiffOperator> top_annihilators(int n, int q, const PrecisionPolicy& pol, int A);

// z' lies in (z) and z in (z') modulo degree > D.
bool same_ideal(const std::vector<TruncSeries>& z, const std::vector<TruncSeries>& zp, int D);
// det(dz_i/dx_j), i, j < q.
TruncSeries jacobian_det(const std::vector<TruncSeries>& z);

struct CoordinateChange {
    bool ideal_match = false;
    TruncSeries det;  // det(d_{z'} z) modulo weight > W
    CechClass lhs;    // [1/z']
    CechClass rhs;    // det * [1/z]
    bool equal = false;
};
// DomainError when the ideals differ.
CoordinateChange change_of_coordinates(const std::vector<TruncSeries>& z, const std::vector<TruncSeries>& zp,
                                       const PrecisionPolicy& pol);

struct PurityReport {
    std::vector<int> lengths;  // log_p |H^k| on the window, k = 0..q
    std::vector<int> dims;     // lengths / s
    bool concentrated = false; // only H^q nonzero
};
// Cohomology of the truncated Cech complex 0 -> A -> (+) A[1/x_i] -> ... -> A[1/x_1..x_q] on the window.
PurityReport pure_dims(const std::vector<TruncSeries>& z, const PrecisionPolicy& pol);

}  // namespace dagger
