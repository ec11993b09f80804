#include "dagger/presentation.hpp"

#include <algorithm>
#include <set>

namespace dagger {

namespace {

using Poly = std::vector<std::uint64_t>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// gcd over F_p (p prime), monic result.
Poly gcd_fp(Poly a, Poly b, const Zmod& F) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        std::uint64_t inv = F.inv(b.back());
        while (a.size() >= b.size()) {
            std::uint64_t c = F.mul(a.back(), inv);
            std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] = F.sub(a[i + shift], F.mul(c, b[i]));
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a;
}

}  // namespace

VarietyPresentation VarietyPresentation::affine_space(int n) {
    if (n < 0 || n > kMaxVars) throw DomainError("affine_space: unsupported dimension");
    VarietyPresentation v;
    v.name_ = "affine_space";
    for (int i = 0; i < n; ++i) v.factors_.push_back(CurveFactor{CurveFactor::Kind::Line, 1, {}, "affine_space"});
    return v;
}

VarietyPresentation VarietyPresentation::torus(int n) {
    if (n < 1 || 2 * n > kMaxVars) throw DomainError("torus: unsupported dimension");
    VarietyPresentation v;
    v.name_ = "torus_factor";
    for (int i = 0; i < n; ++i) v.factors_.push_back(CurveFactor{CurveFactor::Kind::Cover, 1, {0, 1}, "torus_factor"});
    return v;
}

VarietyPresentation VarietyPresentation::punctured_line(const std::vector<std::int64_t>& a) {
    if (a.empty()) throw DomainError("punctured_line needs at least one puncture");
    std::vector<std::int64_t> g{1};
    for (std::int64_t ai : a) {
        // multiply by (x - ai)
        std::vector<std::int64_t> h(g.size() + 1, 0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            h[i + 1] += g[i];
            h[i] -= ai * g[i];
        }
        g = h;
    }
    VarietyPresentation v;
    v.name_ = "punctured_line";
    v.factors_.push_back(CurveFactor{CurveFactor::Kind::Cover, 1, g, "punctured_line"});
    return v;
}

VarietyPresentation VarietyPresentation::hyperelliptic_patch(const std::vector<std::int64_t>& f) {
    std::vector<std::int64_t> g = f;
    while (!g.empty() && g.back() == 0) g.pop_back();
    if (g.size() < 2) throw DomainError("hyperelliptic_patch: f must have positive degree");
    VarietyPresentation v;
    v.name_ = "hyperelliptic_patch";
    v.factors_.push_back(CurveFactor{CurveFactor::Kind::Cover, 2, g, "hyperelliptic_patch"});
    return v;
}

VarietyPresentation VarietyPresentation::product(const VarietyPresentation& a, const VarietyPresentation& b) {
    VarietyPresentation v;
    v.name_ = "product";
    v.factors_ = a.factors_;
    v.factors_.insert(v.factors_.end(), b.factors_.begin(), b.factors_.end());
    if (v.nvars() > kMaxVars) throw DomainError("product: too many coordinates");
    return v;
}

int VarietyPresentation::nvars() const {
    int n = 0;
    for (const auto& f : factors_) n += f.is_cover() ? 2 : 1;
    return n;
}

int VarietyPresentation::x_var(int factor) const {
    int n = 0;
    for (int i = 0; i < factor; ++i) n += factors_[i].is_cover() ? 2 : 1;
    return n;
}

int VarietyPresentation::t_var(int factor) const {
    return factors_[factor].is_cover() ? x_var(factor) + 1 : -1;
}

std::uint32_t VarietyPresentation::inverted_mask() const {
    std::uint32_t m = 0;
    for (int f = 0; f < dim(); ++f)
        if (factors_[f].is_cover()) m |= 1u << t_var(f);
    return m;
}

std::vector<std::string> VarietyPresentation::coordinates() const {
    std::vector<std::string> names;
    for (int f = 0; f < dim(); ++f) {
        std::string suffix = dim() > 1 ? std::to_string(f + 1) : "";
        names.push_back("x" + suffix);
        if (factors_[f].is_cover()) names.push_back((factors_[f].e == 2 ? "y" : "t") + suffix);
    }
    return names;
}

std::vector<std::string> VarietyPresentation::derivation_rules() const {
    std::vector<std::string> rules;
    auto names = coordinates();
    for (int f = 0; f < dim(); ++f) {
        const auto& F = factors_[f];
        std::string x = names[x_var(f)];
        rules.push_back("d/d" + x + "(" + x + ") = 1");
        if (F.is_cover()) {
            std::string t = names[t_var(f)];
            rules.push_back("d/d" + x + "(" + t + ") = g'(" + x + ") * " + t + "^(1-" + std::to_string(F.e) + ") / " +
                            std::to_string(F.e));
        }
    }
    return rules;
}

void VarietyPresentation::check_smooth(std::uint64_t p) const {
    Zmod F(p, 1);
    for (const auto& fac : factors_) {
        if (!fac.is_cover()) continue;
        Poly g;
        for (auto c : fac.g) g.push_back(F.reduce(c));
        if (g.back() == 0) throw DomainError("leading coefficient of g must be a unit mod p");
        Poly dg;
        for (std::size_t i = 1; i < g.size(); ++i) dg.push_back(F.mul(F.reduce(static_cast<std::int64_t>(i)), g[i]));
        trim(dg);
        if (fac.deg() >= 1 && dg.empty()) throw DomainError("g is inseparable mod p");
        Poly d = gcd_fp(g, dg, F);
        if (d.size() > 1)
            throw DomainError(fac.family == "punctured_line" ? "punctures are not distinct mod p"
                                                               : "g has a repeated root mod p (not smooth)");
    }
}

TruncSeries VarietyPresentation::g_series(const PrecisionPolicy& pol, int factor) const {
    const auto& F = factors_[factor];
    TruncSeries r(pol, nvars(), inverted_mask());
    for (std::size_t i = 0; i < F.g.size(); ++i) {
        Exp e = zero_exp();
        e[x_var(factor)] = static_cast<int>(i);
        r.add_term(e, r.ring().reduce(F.g[i]));
    }
    return r;
}

std::vector<TruncSeries> VarietyPresentation::relations(const PrecisionPolicy& pol) const {
    std::vector<TruncSeries> rels;
    for (int f = 0; f < dim(); ++f) {
        if (!factors_[f].is_cover()) continue;
        Exp e = zero_exp();
        e[t_var(f)] = factors_[f].e;
        TruncSeries r = TruncSeries::monomial(pol, nvars(), e, 1, inverted_mask());
        rels.push_back(r - g_series(pol, f));
    }
    return rels;
}

bool VarietyPresentation::is_normal(const TruncSeries& f) const {
    for (const auto& [e, c] : f.terms()) {
        for (int k = 0; k < dim(); ++k) {
            if (!factors_[k].is_cover()) continue;
            int te = e[t_var(k)];
            if (te >= factors_[k].e) return false;
            if (te < 0 && e[x_var(k)] >= factors_[k].deg()) return false;
        }
    }
    return true;
}

TruncSeries VarietyPresentation::normal_form(const TruncSeries& f) const {
    const Zmod R = f.ring();
    PrecisionPolicy big = unbounded(f.policy());
    TruncSeries cur = f.rebound(big.D, big.E);
    for (int k = 0; k < dim(); ++k) {
        const auto& F = factors_[k];
        if (!F.is_cover()) continue;
        const int xv = x_var(k), tv = t_var(k), e = F.e, dg = F.deg();
        Poly g;
        for (auto c : F.g) g.push_back(R.reduce(c));
        const std::uint64_t lead_inv = R.inv(g.back());

        // rest-exponent -> (t-exponent -> poly in x)
        std::map<Exp, std::map<int, Poly>> groups;
        for (const auto& [ex, c] : cur.terms()) {
            Exp rest = ex;
            rest[xv] = 0;
            rest[tv] = 0;
            Poly& poly = groups[rest][ex[tv]];
            if (static_cast<int>(poly.size()) <= ex[xv]) poly.resize(ex[xv] + 1, 0);
            poly[ex[xv]] = R.add(poly[ex[xv]], c);
        }
        TruncSeries out(big, f.nvars(), f.inverted_mask() | inverted_mask());
        for (auto& [rest, bytk] : groups) {
            // High powers: t^k = g * t^(k-e).
            while (!bytk.empty() && bytk.rbegin()->first >= e) {
                int top = bytk.rbegin()->first;
                Poly c = std::move(bytk.rbegin()->second);
                bytk.erase(top);
                Poly prod(c.size() + g.size() - 1, 0);
                for (std::size_t i = 0; i < c.size(); ++i) {
                    if (c[i] == 0) continue;
                    for (std::size_t j = 0; j < g.size(); ++j) prod[i + j] = R.add(prod[i + j], R.mul(c[i], g[j]));
                }
                Poly& dst = bytk[top - e];
                if (dst.size() < prod.size()) dst.resize(prod.size(), 0);
                for (std::size_t i = 0; i < prod.size(); ++i) dst[i] = R.add(dst[i], prod[i]);
            }
            // Negative powers: divide the x-polynomial by g, moving the quotient up by e.
            while (!bytk.empty() && bytk.begin()->first < 0) {
                auto it = bytk.begin();
                int kk = it->first;
                Poly c = std::move(it->second);
                bytk.erase(it);
                trim(c);
                Poly q;
                if (static_cast<int>(c.size()) > dg) {
                    q.assign(c.size() - dg, 0);
                    for (int d = static_cast<int>(c.size()) - 1; d >= dg; --d) {
                        std::uint64_t lc = R.mul(c[d], lead_inv);
                        if (lc == 0) continue;
                        q[d - dg] = lc;
                        for (int j = 0; j <= dg; ++j) c[d - dg + j] = R.sub(c[d - dg + j], R.mul(lc, g[j]));
                    }
                    trim(c);
                }
                for (std::size_t i = 0; i < c.size(); ++i) {
                    if (c[i] == 0) continue;
                    Exp ex = rest;
                    ex[xv] = static_cast<int>(i);
                    ex[tv] = kk;
                    out.add_term(ex, c[i]);
                }
                trim(q);
                if (!q.empty()) {
                    Poly& dst = bytk[kk + e];
                    if (dst.size() < q.size()) dst.resize(q.size(), 0);
                    for (std::size_t i = 0; i < q.size(); ++i) dst[i] = R.add(dst[i], q[i]);
                }
            }
            for (auto& [kk, c] : bytk) {
                for (std::size_t i = 0; i < c.size(); ++i) {
                    if (c[i] == 0) continue;
                    Exp ex = rest;
                    ex[xv] = static_cast<int>(i);
                    ex[tv] = kk;
                    out.add_term(ex, c[i]);
                }
            }
        }
        if (cur.uncertified()) out.mark_uncertified();
        cur = std::move(out);
    }
    TruncSeries result = cur.rebound(f.policy().D, f.policy().E);
    if (f.cert()) {
        try {
            result.set_cert(*f.cert());
        } catch (const DomainError&) {
            // normal form may redistribute valuations; the certificate is then dropped
        }
    }
    return result;
}

TruncSeries VarietyPresentation::multiply(const TruncSeries& a, const TruncSeries& b) const {
    PrecisionPolicy big = unbounded(a.policy());
    TruncSeries prod = a.rebound(big.D, big.E) * b.rebound(big.D, big.E);
    return normal_form(prod).rebound(a.policy().D, a.policy().E);
}

TruncSeries VarietyPresentation::derive(const TruncSeries& f, int factor) const {
    const Zmod R = f.ring();
    const auto& F = factors_[factor];
    const int xv = x_var(factor);
    PrecisionPolicy big = unbounded(f.policy());
    TruncSeries out(big, f.nvars(), f.inverted_mask() | inverted_mask());
    Poly dg;
    if (F.is_cover())
        for (std::size_t i = 1; i < F.g.size(); ++i) dg.push_back(R.reduce(static_cast<std::int64_t>(i) * F.g[i]));
    const std::uint64_t inv_e = R.inv(static_cast<std::uint64_t>(F.e));
    for (const auto& [ex, c] : f.terms()) {
        if (ex[xv] > 0) {
            Exp d = ex;
            d[xv] -= 1;
            out.add_term(d, R.mul(c, R.reduce(ex[xv])));
        }
        if (F.is_cover()) {
            const int tv = t_var(factor);
            int k = ex[tv];
            if (k == 0) continue;
            std::uint64_t coef = R.mul(R.mul(c, R.reduce(k)), inv_e);
            for (std::size_t i = 0; i < dg.size(); ++i) {
                if (dg[i] == 0) continue;
                Exp d = ex;
                d[xv] += static_cast<int>(i);
                d[tv] -= F.e;
                out.add_term(d, R.mul(coef, dg[i]));
            }
        }
    }
    if (f.uncertified()) out.mark_uncertified();
    return normal_form(out).rebound(f.policy().D, f.policy().E);
}

}  // namespace dagger
