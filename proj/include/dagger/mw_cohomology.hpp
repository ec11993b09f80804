#pragma once

// De Rham cohomology of presented smooth affine varieties at finite precision.
//
// Forms are sums of monomial forms  m * dx_S  where m is a normal-form monomial of the
// presentation and S a set of factors (dx_S the wedge of their dx in increasing order).
// H^i at bounds (D, E) is  (closed forms in the window) / (exact forms in the window),
// where exactness is tested against d of a larger window of (i-1)-forms.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dagger/linalg.hpp"
#include "dagger/presentation.hpp"

namespace dagger {

struct FormKey {
    Exp e{};
    std::uint32_t S = 0;
    auto operator<=>(const FormKey&) const = default;
};

using Form = std::map<FormKey, std::uint64_t>;  // coefficients mod p^N
using KForm = std::map<FormKey, PadicNumber>;

class DeRhamComplex {
public:
    DeRhamComplex(const VarietyPresentation& pres, std::uint64_t p, int N);

    const VarietyPresentation& presentation() const { return pres_; }
    std::uint64_t p() const { return p_; }
    int precision() const { return N_; }
    const Zmod& ring() const { return R_; }
    PrecisionPolicy policy() const { return pol_; }

    // Monomial i-forms with, per factor, x-degree + positive t-degree <= D and t-pole <= E.
    std::vector<FormKey> window(int degree, int D, int E) const;
    bool in_window(const FormKey& k, int D, int E) const;
    // Per-factor maxima of the degree and pole measures used by window().
    static std::pair<int, int> extent(const VarietyPresentation& pres, const FormKey& k);

    Form d(const FormKey& k) const;
    Form d(const Form& f) const;
    KForm d(const KForm& f) const;
    // d with exact p-adic coefficients (d has coefficients in Z[1/e]).
    KForm d_exact(const FormKey& k) const;
    // Wedge by dx_f: sign (-1)^{#{g in S : g < f}}, or 0 if f is already in S.
    static int wedge_sign(std::uint32_t S, int f);

    std::string format(const FormKey& k) const;
    std::string format(const KForm& f) const;

private:
    Form d_mod(const FormKey& k, const PrecisionPolicy& pol, const Zmod& R) const;

    VarietyPresentation pres_;
    std::uint64_t p_;
    int N_;
    Zmod R_;
    PrecisionPolicy pol_;
    Zmod Rcap_;
    PrecisionPolicy polcap_;
    std::int64_t denom_ = 1;
};

struct DeRhamSlice {
    int degree = 0;
    std::vector<FormKey> basis;   // admissible monomial forms at (D, E)
    std::vector<Form> d_images;   // d of each basis element, in degree+1 forms
};

std::vector<DeRhamSlice> build_complex(const VarietyPresentation& pres, const PrecisionPolicy& pol);

class CohomologySpace {
public:
    // extra_cover: keys that later reductions must be able to handle (enlarges the
    // primitive window).  margin: how far the primitive window extends past (D, E).
    CohomologySpace(const DeRhamComplex& C, int degree, int D, int E, const std::vector<FormKey>& extra_cover = {},
                    int margin = 3);

    int degree() const { return degree_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<KForm>& basis() const { return basis_; }
    const std::vector<FormKey>& standard_monomials() const { return standard_; }
    int max_pivot_valuation() const { return E_.max_pivot_valuation(); }
    std::pair<int, int> primitive_window() const { return {Dw_, Ew_}; }
    const DeRhamComplex& complex() const { return *C_; }

    struct Reduction {
        std::vector<PadicNumber> coords;  // in basis()
        KForm primitive;                  // eta with  form = d(eta) + sum coords_j basis_j
    };
    // Throws InstabilityError if the form leaves the window, DomainError if it is not closed.
    Reduction reduce(const KForm& closed) const;

private:
    SparseVec to_sparse(const KForm& f, bool& overflow) const;

    const DeRhamComplex* C_;
    int degree_, D_, E_bound_, Dw_, Ew_;
    std::vector<FormKey> inside_;
    std::vector<FormKey> funcs_;
    std::map<FormKey, int> col_;
    std::vector<FormKey> col_keys_;
    int first_inside_ = 0;
    PadicEchelon E_;
    PadicEchelon H_;
    std::vector<KForm> basis_;
    std::vector<FormKey> standard_;
};

// dims of H^0..H^dim at (D, E).
std::vector<int> betti_numbers(const VarietyPresentation& pres, const PrecisionPolicy& pol);

struct StabilityReport {
    std::vector<int> dims;
    std::vector<int> dims_enlarged;
    int D = 0, E = 0, D2 = 0, E2 = 0;
    bool stable = false;
};
// Recomputes at (D + dD, E + dE); throws InstabilityError when dims differ and throw_on_change is set.
StabilityReport stable_betti(const VarietyPresentation& pres, const PrecisionPolicy& pol, int dD = 4, int dE = 2,
                             bool throw_on_change = true);

struct HomotopyReport {
    std::vector<int> dims_X;
    std::vector<int> dims_XA1;
    bool pass = false;
};
HomotopyReport homotopy_check(const VarietyPresentation& X, const PrecisionPolicy& pol);

struct GysinReport {
    std::string description;
    int codim = 1;
    std::vector<int> dims_X, dims_U, dims_Y;
    std::vector<int> rank_restriction;  // H^i(X) -> H^i(U)
    std::vector<int> rank_residue;      // H^i(U) -> H^{i-1}(Y)
    std::vector<int> rank_gysin;        // H^{i-2c}(Y) -> H^i(X), from exactness at H^i(X)
    bool exact = false;
    bool residue_after_restriction_zero = false;
    long alternating_sum = 0;
    bool pass = false;
};
// X = A^1, Y = the listed points (empty list allowed), U = complement.
GysinReport gysin_points(const std::vector<std::int64_t>& points, const PrecisionPolicy& pol);
// X = A^2, Y = {x = 0}, U = G_m x A^1.
GysinReport gysin_axis(const PrecisionPolicy& pol);

}  // namespace dagger
