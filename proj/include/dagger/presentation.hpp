#pragma once

// Smooth affine varieties presented as products of curve factors.
//
// Each factor is either the affine line (coordinate x) or a cyclic cover
//     t^e = g(x),  t inverted,
// which covers G_m (e = 1, g = x), the line minus the roots of g (e = 1, g = prod (x - a_i))
// and the hyperelliptic patch y^2 = f(x) with y inverted (e = 2, g = f).

#include <cstdint>
#include <string>
#include <vector>

#include "dagger/series.hpp"

namespace dagger {

struct CurveFactor {
    enum class Kind { Line, Cover };
    Kind kind = Kind::Line;
    int e = 1;
    std::vector<std::int64_t> g;  // integer coefficients, low degree first
    std::string family;           // affine_space / torus_factor / punctured_line / hyperelliptic_patch

    int deg() const { return static_cast<int>(g.size()) - 1; }
    bool is_cover() const { return kind == Kind::Cover; }
};

class VarietyPresentation {
public:
    VarietyPresentation() = default;

    static VarietyPresentation affine_space(int n);
    static VarietyPresentation torus(int n);
    static VarietyPresentation punctured_line(const std::vector<std::int64_t>& punctures);
    static VarietyPresentation hyperelliptic_patch(const std::vector<std::int64_t>& f);
    static VarietyPresentation product(const VarietyPresentation& a, const VarietyPresentation& b);

    const std::string& name() const { return name_; }
    const std::vector<CurveFactor>& factors() const { return factors_; }
    int dim() const { return static_cast<int>(factors_.size()); }
    int nvars() const;
    int x_var(int factor) const;
    // -1 for affine-line factors.
    int t_var(int factor) const;
    std::uint32_t inverted_mask() const;
    std::vector<std::string> coordinates() const;
    // Human-readable derivation rules, one per coordinate.
    std::vector<std::string> derivation_rules() const;

    // Smoothness witness modulo p: g squarefree with unit leading coefficient,
    // punctures pairwise distinct.  Throws DomainError otherwise.
    void check_smooth(std::uint64_t p) const;

    // t^e - g(x) for every cover factor.
    std::vector<TruncSeries> relations(const PrecisionPolicy& pol) const;
    // g(x_f) as a series.
    TruncSeries g_series(const PrecisionPolicy& pol, int factor) const;

    // Rewrites f in the normal form: for each cover factor, t-exponents k with k >= e are
    // eliminated via t^e = g, and for k < 0 the x-degree is brought below deg g.  The result
    // is re-truncated to the policy of f.
    TruncSeries normal_form(const TruncSeries& f) const;
    // Normal form of a product computed without intermediate truncation.
    TruncSeries multiply(const TruncSeries& a, const TruncSeries& b) const;
    // Partial derivative along x of the given factor (other coordinates held fixed).
    TruncSeries derive(const TruncSeries& f, int factor) const;

    // True iff every exponent is in normal form.
    bool is_normal(const TruncSeries& f) const;

private:
    std::string name_;
    std::vector<CurveFactor> factors_;
};

}  // namespace dagger
