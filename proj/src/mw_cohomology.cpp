#include "dagger/mw_cohomology.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <sstream>

namespace dagger {

namespace {

constexpr int kExact = 1 << 20;

PadicNumber exact_one(std::uint64_t p) { return PadicNumber::from_integer(p, 1, kExact); }

// Per-factor admissible (i, k) pairs; k is 0 for lines.
std::vector<std::pair<int, int>> factor_window(const CurveFactor& F, int D, int E) {
    std::vector<std::pair<int, int>> out;
    if (!F.is_cover()) {
        for (int i = 0; i <= D; ++i) out.emplace_back(i, 0);
        return out;
    }
    for (int k = -E; k < 0; ++k)
        for (int i = 0; i < F.deg(); ++i) out.emplace_back(i, k);
    for (int k = 0; k < F.e; ++k)
        for (int i = 0; i + k <= D; ++i) out.emplace_back(i, k);
    return out;
}

int key_weight(const VarietyPresentation& V, const FormKey& k) {
    int w = 0;
    for (int f = 0; f < V.dim(); ++f) {
        const auto& F = V.factors()[f];
        int i = k.e[V.x_var(f)];
        if (!F.is_cover()) {
            w += i;
            continue;
        }
        int t = k.e[V.t_var(f)];
        w += F.e * i + F.deg() * std::abs(t);
    }
    return w;
}

}  // namespace

DeRhamComplex::DeRhamComplex(const VarietyPresentation& pres, std::uint64_t p, int N)
    : pres_(pres),
      p_(p),
      N_(N),
      R_(p, N),
      pol_(unbounded(PrecisionPolicy(p, N, 0, 0))),
      Rcap_(p, max_exponent(p)),
      polcap_(unbounded(PrecisionPolicy(p, max_exponent(p), 0, 0))) {
    denom_ = 1;
    for (const auto& F : pres_.factors())
        if (F.is_cover()) denom_ = std::lcm(denom_, static_cast<std::int64_t>(F.e));
    pres_.check_smooth(p);
    for (const auto& F : pres_.factors())
        if (F.is_cover() && static_cast<std::uint64_t>(F.e) % p == 0)
            throw DomainError("cover degree divisible by p is not supported");
}

int DeRhamComplex::wedge_sign(std::uint32_t S, int f) {
    if ((S >> f) & 1) return 0;
    int below = std::popcount(S & ((1u << f) - 1));
    return below % 2 ? -1 : 1;
}

std::pair<int, int> DeRhamComplex::extent(const VarietyPresentation& V, const FormKey& k) {
    int deg = 0, pole = 0;
    for (int f = 0; f < V.dim(); ++f) {
        int i = k.e[V.x_var(f)];
        int t = V.factors()[f].is_cover() ? k.e[V.t_var(f)] : 0;
        deg = std::max(deg, i + std::max(t, 0));
        pole = std::max(pole, std::max(-t, 0));
    }
    return {deg, pole};
}

bool DeRhamComplex::in_window(const FormKey& k, int D, int E) const {
    for (int f = 0; f < pres_.dim(); ++f) {
        const auto& F = pres_.factors()[f];
        int i = k.e[pres_.x_var(f)];
        if (!F.is_cover()) {
            if (i > D) return false;
            continue;
        }
        int t = k.e[pres_.t_var(f)];
        if (t < -E) return false;
        if (t >= 0 && i + t > D) return false;
    }
    return true;
}

std::vector<FormKey> DeRhamComplex::window(int degree, int D, int E) const {
    std::vector<FormKey> out;
    const int n = pres_.dim();
    if (degree < 0 || degree > n) return out;
    std::vector<std::vector<std::pair<int, int>>> per;
    for (const auto& F : pres_.factors()) per.push_back(factor_window(F, D, E));
    std::vector<FormKey> monos{FormKey{zero_exp(), 0}};
    for (int f = 0; f < n; ++f) {
        std::vector<FormKey> next;
        for (const auto& m : monos)
            for (auto [i, k] : per[f]) {
                FormKey key = m;
                key.e[pres_.x_var(f)] = i;
                if (pres_.factors()[f].is_cover()) key.e[pres_.t_var(f)] = k;
                next.push_back(key);
            }
        monos = std::move(next);
    }
    for (std::uint32_t S = 0; S < (1u << n); ++S) {
        if (std::popcount(S) != degree) continue;
        for (auto m : monos) {
            m.S = S;
            out.push_back(m);
        }
    }
    return out;
}

Form DeRhamComplex::d(const FormKey& k) const { return d_mod(k, pol_, R_); }

KForm DeRhamComplex::d_exact(const FormKey& k) const {
    // denom * d(k) has small integer coefficients; recover them from their residues
    KForm out;
    const PadicNumber den = PadicNumber::from_integer(p_, denom_, kExact);
    for (const auto& [k2, c] : d_mod(k, polcap_, Rcap_)) {
        const std::int64_t a = Rcap_.to_signed(Rcap_.mul(c, Rcap_.reduce(denom_)));
        out.emplace(k2, PadicNumber::from_integer(p_, a, kExact) / den);
    }
    return out;
}

Form DeRhamComplex::d_mod(const FormKey& k, const PrecisionPolicy& pol, const Zmod& R_) const {
    Form out;
    TruncSeries m = TruncSeries::monomial(pol, pres_.nvars(), k.e, 1, pres_.inverted_mask());
    for (int f = 0; f < pres_.dim(); ++f) {
        int sign = wedge_sign(k.S, f);
        if (sign == 0) continue;
        TruncSeries df = pres_.derive(m, f);
        for (const auto& [e, c] : df.terms()) {
            FormKey key{e, k.S | (1u << f)};
            std::uint64_t v = sign > 0 ? c : R_.neg(c);
            auto& slot = out[key];
            slot = R_.add(slot, v);
            if (slot == 0) out.erase(key);
        }
    }
    return out;
}

Form DeRhamComplex::d(const Form& f) const {
    Form out;
    for (const auto& [k, c] : f) {
        for (const auto& [k2, c2] : d(k)) {
            auto& slot = out[k2];
            slot = R_.add(slot, R_.mul(c, c2));
            if (slot == 0) out.erase(k2);
        }
    }
    return out;
}

KForm DeRhamComplex::d(const KForm& f) const {
    KForm out;
    for (const auto& [k, c] : f) {
        for (const auto& [k2, c2] : d(k)) {
            PadicNumber t = c * PadicNumber::from_residue(p_, c2, N_);
            auto it = out.find(k2);
            if (it == out.end())
                out.emplace(k2, t);
            else
                it->second = it->second + t;
        }
    }
    return out;
}

std::string DeRhamComplex::format(const FormKey& k) const {
    auto names = pres_.coordinates();
    std::ostringstream os;
    bool any = false;
    for (int v = 0; v < pres_.nvars(); ++v) {
        if (k.e[v] == 0) continue;
        if (any) os << "*";
        os << names[v];
        if (k.e[v] != 1) os << "^" << k.e[v];
        any = true;
    }
    if (!any) os << "1";
    for (int f = 0; f < pres_.dim(); ++f)
        if ((k.S >> f) & 1) os << " d" << names[pres_.x_var(f)];
    return os.str();
}

std::string DeRhamComplex::format(const KForm& f) const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : f) {
        if (c.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string() << ") " << format(k);
    }
    if (first) os << "0";
    return os.str();
}

std::vector<DeRhamSlice> build_complex(const VarietyPresentation& pres, const PrecisionPolicy& pol) {
    if (pol.p == 2) throw DomainError("p = 2 is not supported");
    DeRhamComplex C(pres, pol.p, pol.s);
    std::vector<DeRhamSlice> out;
    for (int i = 0; i <= pres.dim(); ++i) {
        DeRhamSlice s;
        s.degree = i;
        s.basis = C.window(i, pol.D, pol.E);
        for (const auto& k : s.basis) s.d_images.push_back(C.d(k));
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------- CohomologySpace

CohomologySpace::CohomologySpace(const DeRhamComplex& C, int degree, int D, int E,
                                 const std::vector<FormKey>& extra_cover, int margin)
    : C_(&C), degree_(degree), D_(D), E_bound_(E), E_(C.p()), H_(C.p()) {
    const auto& V = C.presentation();
    const std::uint64_t p = C.p();
    if (degree < 0 || degree > V.dim()) throw DomainError("cohomological degree out of range");

    Dw_ = D + margin;
    Ew_ = E + margin;
    for (const auto& k : extra_cover) {
        auto [dg, pl] = DeRhamComplex::extent(V, k);
        Dw_ = std::max(Dw_, dg + margin);
        Ew_ = std::max(Ew_, pl + margin);
    }
    inside_ = C.window(degree, D, E);
    funcs_ = C.window(degree - 1, Dw_, Ew_);

    std::vector<KForm> rows;
    rows.reserve(funcs_.size());
    for (const auto& f : funcs_) rows.push_back(C.d_exact(f));

    // column order: outside before inside, heavier first
    std::map<FormKey, bool> is_inside;
    for (const auto& k : inside_) is_inside[k] = true;
    for (const auto& r : rows)
        for (const auto& [k, c] : r) is_inside.emplace(k, false);
    col_keys_.clear();
    for (const auto& [k, in] : is_inside) col_keys_.push_back(k);
    std::vector<int> weight(col_keys_.size());
    std::sort(col_keys_.begin(), col_keys_.end(), [&](const FormKey& a, const FormKey& b) {
        bool ia = is_inside[a], ib = is_inside[b];
        if (ia != ib) return !ia;
        int wa = key_weight(V, a), wb = key_weight(V, b);
        if (wa != wb) return wa > wb;
        return b < a;
    });
    first_inside_ = static_cast<int>(col_keys_.size());
    for (std::size_t i = 0; i < col_keys_.size(); ++i) {
        col_[col_keys_[i]] = static_cast<int>(i);
        if (is_inside[col_keys_[i]] && static_cast<int>(i) < first_inside_) first_inside_ = static_cast<int>(i);
    }

    for (std::size_t j = 0; j < rows.size(); ++j) {
        SparseVec v;
        for (const auto& [k, c] : rows[j]) v.emplace(col_.at(k), c);
        E_.add_row(v, static_cast<int>(j));
    }

    // closed forms in the inside window
    std::vector<SparseVec> kernel;
    if (degree == V.dim()) {
        for (const auto& k : inside_) kernel.push_back(SparseVec{{col_.at(k), exact_one(p)}});
    } else {
        PadicEchelon Z(p);
        std::map<FormKey, int> zcol;
        for (std::size_t j = 0; j < inside_.size(); ++j) {
            SparseVec v;
            for (const auto& [k, c] : C.d_exact(inside_[j])) {
                auto it = zcol.emplace(k, static_cast<int>(zcol.size())).first;
                v.emplace(it->second, c);
            }
            Z.add_row(v, static_cast<int>(j));
        }
        for (const auto& rel : Z.relations()) {
            SparseVec v;
            for (const auto& [tag, c] : rel) v.emplace(col_.at(inside_[tag]), c);
            kernel.push_back(v);
        }
    }

    PadicEchelon classes(p);
    for (std::size_t j = 0; j < kernel.size(); ++j) {
        auto red = E_.reduce(kernel[j]);
        SparseVec r;
        for (const auto& [c, x] : red.remainder)
            if (!x.is_zero()) r.emplace(c, x);
        classes.add_row(r, static_cast<int>(j));
    }
    int tag = 0;
    for (const auto& [entries, combo] : classes.rows_from(0)) {
        KForm b;
        for (const auto& [c, x] : entries) b.emplace(col_keys_[c], x);
        basis_.push_back(b);
        H_.add_row(entries, tag++);
    }
    for (const auto& k : inside_)
        if (!E_.has_pivot(col_.at(k))) standard_.push_back(k);
}

SparseVec CohomologySpace::to_sparse(const KForm& f, bool& overflow) const {
    SparseVec v;
    for (const auto& [k, c] : f) {
        auto it = col_.find(k);
        if (it == col_.end()) {
            if (!c.is_zero()) overflow = true;
            continue;
        }
        auto [slot, inserted] = v.emplace(it->second, c);
        if (!inserted) slot->second = slot->second + c;
    }
    return v;
}

CohomologySpace::Reduction CohomologySpace::reduce(const KForm& closed) const {
    bool overflow = false;
    SparseVec v = to_sparse(closed, overflow);
    if (overflow) throw InstabilityError("window overflow: form has terms outside the primitive window");
    auto red = E_.reduce(v);
    SparseVec inside;
    int floor_prec = kExact;
    for (const auto& [c, x] : red.remainder) {
        if (c < first_inside_) {
            if (!x.is_zero()) throw InstabilityError("window overflow: remainder outside the cohomology window");
            continue;
        }
        floor_prec = std::min(floor_prec, x.absprec());
        inside.emplace(c, x);
    }
    auto hr = H_.reduce(inside);
    for (const auto& [c, x] : hr.remainder)
        if (!x.is_zero()) throw DomainError("form is not closed (nonzero residual after reduction)");
    Reduction out;
    for (int j = 0; j < dim(); ++j) {
        auto it = hr.combination.find(j);
        out.coords.push_back(it == hr.combination.end() ? PadicNumber::zero(C_->p(), floor_prec) : it->second);
    }
    for (const auto& [tag, c] : red.combination) out.primitive.emplace(funcs_[tag], c);
    return out;
}

// ---------------------------------------------------------------- structural checks

std::vector<int> betti_numbers(const VarietyPresentation& pres, const PrecisionPolicy& pol) {
    DeRhamComplex C(pres, pol.p, pol.s);
    std::vector<int> dims;
    for (int i = 0; i <= pres.dim(); ++i) dims.push_back(CohomologySpace(C, i, pol.D, pol.E).dim());
    return dims;
}

StabilityReport stable_betti(const VarietyPresentation& pres, const PrecisionPolicy& pol, int dD, int dE,
                             bool throw_on_change) {
    StabilityReport r;
    r.D = pol.D;
    r.E = pol.E;
    r.D2 = pol.D + dD;
    r.E2 = pol.E + dE;
    r.dims = betti_numbers(pres, pol);
    PrecisionPolicy big = pol;
    big.D = r.D2;
    big.E = r.E2;
    r.dims_enlarged = betti_numbers(pres, big);
    r.stable = r.dims == r.dims_enlarged;
    if (!r.stable && throw_on_change) {
        auto fmt = [](const std::vector<int>& v) {
            std::string t;
            for (int d : v) t += (t.empty() ? "" : ",") + std::to_string(d);
            return "(" + t + ")";
        };
        throw InstabilityError("cohomology dimensions changed under window enlargement: " + fmt(r.dims) + " at (" +
                               std::to_string(r.D) + "," + std::to_string(r.E) + ") vs " + fmt(r.dims_enlarged) +
                               " at (" + std::to_string(r.D2) + "," + std::to_string(r.E2) + ")");
    }
    return r;
}

HomotopyReport homotopy_check(const VarietyPresentation& X, const PrecisionPolicy& pol) {
    HomotopyReport r;
    r.dims_X = stable_betti(X, pol).dims;
    r.dims_XA1 = stable_betti(VarietyPresentation::product(X, VarietyPresentation::affine_space(1)), pol).dims;
    std::vector<int> expect = r.dims_X;
    expect.push_back(0);
    r.pass = r.dims_XA1 == expect;
    return r;
}

namespace {

// Residue at x = a of x^i * g(x)^k (k < 0) where g has a simple root at a; g = (x - a) h.
PadicNumber point_residue(const std::vector<std::int64_t>& g, std::int64_t a, int i, int k, const Zmod& R) {
    if (k >= 0) return PadicNumber::zero(R.p, R.s);
    const int K = -k;
    // Taylor coefficients of g at a: g(a + u) = sum c_j u^j
    const int dg = static_cast<int>(g.size()) - 1;
    std::vector<std::uint64_t> c(dg + 1, 0);
    for (int j = 0; j <= dg; ++j)
        for (int l = j; l <= dg; ++l)
            c[j] = R.add(c[j], R.mul(R.mul(binomial_mod(R, l, j), R.reduce(g[l])), R.pow(R.reduce(a), l - j)));
    if (c[0] != 0) throw DomainError("residue point is not a root");
    // h(a + u) = g(a+u)/u
    std::vector<std::uint64_t> h(c.begin() + 1, c.end());
    h.resize(K, 0);
    // inverse series of h to order K
    std::vector<std::uint64_t> inv(K, 0);
    const std::uint64_t h0inv = R.inv(h[0]);
    inv[0] = h0inv;
    for (int n = 1; n < K; ++n) {
        std::uint64_t s = 0;
        for (int j = 1; j <= n; ++j) s = R.add(s, R.mul(h[j], inv[n - j]));
        inv[n] = R.mul(R.neg(s), h0inv);
    }
    auto mul = [&](const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y) {
        std::vector<std::uint64_t> z(K, 0);
        for (int a1 = 0; a1 < K; ++a1)
            for (int b1 = 0; a1 + b1 < K; ++b1) z[a1 + b1] = R.add(z[a1 + b1], R.mul(x[a1], y[b1]));
        return z;
    };
    std::vector<std::uint64_t> acc(K, 0);
    acc[0] = 1 % R.m;
    for (int n = 0; n < K; ++n) acc = mul(acc, inv);
    // (a + u)^i
    std::vector<std::uint64_t> xa(K, 0);
    for (int j = 0; j <= i && j < K; ++j) xa[j] = R.mul(binomial_mod(R, i, j), R.pow(R.reduce(a), i - j));
    acc = mul(acc, xa);
    return PadicNumber::from_residue(R.p, acc[K - 1], R.s);
}

// Residue of a KForm on a product along {x_f = a} (factor f a cover with e = 1), as a form on
// the remaining factors (re-indexed into the presentation `Y`).
KForm residue_along(const VarietyPresentation& U, int f, std::int64_t a, const KForm& w, const VarietyPresentation& Y,
                    const Zmod& R) {
    KForm out;
    const auto& F = U.factors()[f];
    for (const auto& [k, c] : w) {
        if (!((k.S >> f) & 1)) continue;
        int i = k.e[U.x_var(f)], t = k.e[U.t_var(f)];
        PadicNumber r = point_residue(F.g, a, i, t, R);
        if (r.is_zero()) continue;
        // sign of moving dx_f to the front
        int below = std::popcount(k.S & ((1u << f) - 1));
        PadicNumber coef = c * r;
        if (below % 2) coef = -coef;
        FormKey y{zero_exp(), 0};
        int g2 = 0;
        for (int g = 0; g < U.dim(); ++g) {
            if (g == f) continue;
            y.e[Y.x_var(g2)] = k.e[U.x_var(g)];
            if (U.factors()[g].is_cover()) y.e[Y.t_var(g2)] = k.e[U.t_var(g)];
            if ((k.S >> g) & 1) y.S |= 1u << g2;
            ++g2;
        }
        auto it = out.find(y);
        if (it == out.end())
            out.emplace(y, coef);
        else
            it->second = it->second + coef;
    }
    return out;
}

int rank_of(const std::vector<std::vector<PadicNumber>>& rows, std::uint64_t p) {
    PadicEchelon E(p);
    int tag = 0;
    for (const auto& r : rows) {
        SparseVec v;
        for (std::size_t j = 0; j < r.size(); ++j)
            if (!r[j].is_zero()) v.emplace(static_cast<int>(j), r[j]);
        E.add_row(v, tag++);
    }
    return static_cast<int>(E.rank());
}

bool all_zero(const std::vector<PadicNumber>& v) {
    return std::all_of(v.begin(), v.end(), [](const PadicNumber& x) { return x.is_zero(); });
}

void finish_gysin(GysinReport& g) {
    const int n = static_cast<int>(g.dims_X.size()) - 1;
    auto dimY = [&](int j) { return (j >= 0 && j < static_cast<int>(g.dims_Y.size())) ? g.dims_Y[j] : 0; };
    auto at = [](const std::vector<int>& v, int i) { return (i >= 0 && i < static_cast<int>(v.size())) ? v[i] : 0; };
    g.rank_gysin.assign(n + 2, 0);
    bool ok = true;
    for (int i = 0; i <= n + 1; ++i) {
        int rg = at(g.dims_X, i) - at(g.rank_restriction, i);
        g.rank_gysin[i] = rg;
        if (rg < 0 || rg > dimY(i - 2 * g.codim)) ok = false;
    }
    for (int i = 0; i <= n; ++i) {
        // exact at H^i(U)
        if (at(g.dims_U, i) != at(g.rank_restriction, i) + at(g.rank_residue, i)) ok = false;
        // exact at H^{i-2c+1}(Y): image of residue from H^i(U), kernel of Gysin into H^{i+1}(X)
        int j = i - 2 * g.codim + 1;
        if (j >= 0 && dimY(j) != at(g.rank_residue, i) + at(g.rank_gysin, i + 1)) ok = false;
    }
    g.exact = ok;
    long alt = 0;
    int pos = 0;
    for (int i = 0; i <= n + g.codim; ++i) {
        for (int d : {dimY(i - 2 * g.codim), at(g.dims_X, i), at(g.dims_U, i)}) {
            alt += (pos % 2 ? -1 : 1) * d;
            ++pos;
        }
    }
    g.alternating_sum = alt;
    g.pass = g.exact && alt == 0 && g.residue_after_restriction_zero;
}

}  // namespace

GysinReport gysin_points(const std::vector<std::int64_t>& points, const PrecisionPolicy& pol) {
    GysinReport g;
    g.codim = 1;
    g.description = "X = A^1, Y = " + std::to_string(points.size()) + " point(s)";
    const auto X = VarietyPresentation::affine_space(1);
    const auto U = points.empty() ? X : VarietyPresentation::punctured_line(points);
    DeRhamComplex CX(X, pol.p, pol.s), CU(U, pol.p, pol.s);
    const Zmod R(pol.p, pol.s);
    g.dims_Y = {static_cast<int>(points.size())};
    g.residue_after_restriction_zero = true;
    for (int i = 0; i <= 1; ++i) {
        CohomologySpace HX(CX, i, pol.D, pol.E), HU(CU, i, pol.D, pol.E);
        g.dims_X.push_back(HX.dim());
        g.dims_U.push_back(HU.dim());
        std::vector<std::vector<PadicNumber>> restr;
        for (const auto& b : HX.basis()) {
            KForm w;
            for (const auto& [k, c] : b) {
                FormKey k2 = k;  // x stays variable 0; t exponent 0
                w.emplace(k2, c);
            }
            restr.push_back(HU.reduce(w).coords);
            if (!points.empty()) {
                for (auto a : points) {
                    KForm r = residue_along(U, 0, a, w, VarietyPresentation::affine_space(0), R);
                    for (const auto& [k, c] : r)
                        if (!c.is_zero()) g.residue_after_restriction_zero = false;
                }
            }
        }
        g.rank_restriction.push_back(rank_of(restr, pol.p));
        std::vector<std::vector<PadicNumber>> res;
        if (i == 1 && !points.empty()) {
            for (const auto& b : HU.basis()) {
                std::vector<PadicNumber> row;
                for (auto a : points) {
                    KForm r = residue_along(U, 0, a, b, VarietyPresentation::affine_space(0), R);
                    row.push_back(r.empty() ? PadicNumber::zero(pol.p, pol.s) : r.begin()->second);
                }
                res.push_back(row);
            }
        }
        g.rank_residue.push_back(rank_of(res, pol.p));
    }
    finish_gysin(g);
    return g;
}

GysinReport gysin_axis(const PrecisionPolicy& pol) {
    GysinReport g;
    g.codim = 1;
    g.description = "X = A^2, Y = {x = 0}, U = G_m x A^1";
    const auto X = VarietyPresentation::affine_space(2);
    const auto U = VarietyPresentation::product(VarietyPresentation::torus(1), VarietyPresentation::affine_space(1));
    const auto Y = VarietyPresentation::affine_space(1);
    DeRhamComplex CX(X, pol.p, pol.s), CU(U, pol.p, pol.s), CY(Y, pol.p, pol.s);
    const Zmod R(pol.p, pol.s);
    std::vector<CohomologySpace> HY;
    for (int j = 0; j <= 1; ++j) {
        HY.emplace_back(CY, j, pol.D, pol.E);
        g.dims_Y.push_back(HY.back().dim());
    }
    g.residue_after_restriction_zero = true;
    for (int i = 0; i <= 2; ++i) {
        CohomologySpace HX(CX, i, pol.D, pol.E), HU(CU, i, pol.D, pol.E);
        g.dims_X.push_back(HX.dim());
        g.dims_U.push_back(HU.dim());
        std::vector<std::vector<PadicNumber>> restr;
        for (const auto& b : HX.basis()) {
            KForm w;
            for (const auto& [k, c] : b) {
                FormKey k2{zero_exp(), k.S};
                k2.e[U.x_var(0)] = k.e[X.x_var(0)];
                k2.e[U.x_var(1)] = k.e[X.x_var(1)];
                w.emplace(k2, c);
            }
            restr.push_back(HU.reduce(w).coords);
            KForm r = residue_along(U, 0, 0, w, Y, R);
            for (const auto& [k, c] : r)
                if (!c.is_zero()) g.residue_after_restriction_zero = false;
        }
        g.rank_restriction.push_back(rank_of(restr, pol.p));
        std::vector<std::vector<PadicNumber>> res;
        if (i >= 1) {
            for (const auto& b : HU.basis()) {
                KForm r = residue_along(U, 0, 0, b, Y, R);
                auto coords = HY[i - 1].reduce(r).coords;
                res.push_back(coords);
            }
        }
        g.rank_residue.push_back(rank_of(res, pol.p));
    }
    finish_gysin(g);
    (void)all_zero;
    return g;
}

}  // namespace dagger
