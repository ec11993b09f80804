#include "dagger/frobenius_zeta.hpp"

#include <algorithm>

#include "dagger/ffield.hpp"

namespace dagger {

namespace {

constexpr int kExact = 1 << 20;
using Poly = std::vector<std::uint64_t>;  // low to high, mod p^N

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly pmul(const Poly& a, const Poly& b, const Zmod& R) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = R.add(c[i + j], R.mul(a[i], b[j]));
    }
    trim(c);
    return c;
}

Poly to_poly(const std::vector<std::int64_t>& g, const Zmod& R) {
    Poly out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = R.reduce(g[i]);
    trim(out);
    return out;
}

// Accumulates P(x) t^K in normal form for the cover t^e = g (g monic).
void cover_normal(Poly P, int K, const Poly& g, int e, const Zmod& R, std::map<std::pair<int, int>, std::uint64_t>& out) {
    const int dg = static_cast<int>(g.size()) - 1;
    auto emit = [&](int i, int k, std::uint64_t c) {
        if (!c) return;
        auto& slot = out[{i, k}];
        slot = R.add(slot, c);
        if (!slot) out.erase({i, k});
    };
    trim(P);
    while (!P.empty()) {
        if (K >= 0) {
            for (int r = 0; r < K / e; ++r) P = pmul(P, g, R);
            K %= e;
            for (std::size_t i = 0; i < P.size(); ++i) emit(static_cast<int>(i), K, P[i]);
            return;
        }
        // P = Q g + rem; rem t^K is normal, Q g t^K = Q t^{K+e}
        Poly Q;
        if (static_cast<int>(P.size()) > dg) {
            Q.assign(P.size() - dg, 0);
            for (int d = static_cast<int>(P.size()) - 1; d >= dg; --d) {
                const std::uint64_t c = P[d];
                if (!c) continue;
                Q[d - dg] = c;
                for (int l = 0; l <= dg; ++l) P[d - dg + l] = R.sub(P[d - dg + l], R.mul(c, g[l]));
            }
        }
        for (int i = 0; i < std::min<int>(dg, static_cast<int>(P.size())); ++i) emit(i, K, P[i]);
        trim(Q);
        P = std::move(Q);
        K += e;
    }
}

BigInt big_pow(std::uint64_t p, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

BigInt binom_big(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// q^{w/2}, rounded up.
BigInt half_power(std::uint64_t p, int w) {
    if (w % 2 == 0) return big_pow(p, w / 2);
    BigInt x = big_pow(p, w);
    BigInt s = boost::multiprecision::sqrt(x);
    return s * s == x ? s : s + 1;
}

int digits_for(std::uint64_t p, const BigInt& B) {
    int d = 0;
    BigInt m = 1;
    while (m <= 2 * B) {
        m *= p;
        ++d;
    }
    return d;
}

PadicNumber exact(std::uint64_t p, std::int64_t x) { return PadicNumber::from_integer(p, x, kExact); }

}  // namespace

// ---------------------------------------------------------------- lift

FrobeniusLift::FrobeniusLift(const VarietyPresentation& pres, std::uint64_t p, int N, int terms)
    : pres_(pres), p_(p), N_(N), J_(terms > 0 ? terms : N), R_(p, N) {
    if (p == 2) throw DomainError("p = 2 is not supported");
    pres_.check_smooth(p);
    for (const auto& F : pres_.factors())
        if (F.is_cover() && std::count_if(F.g.begin(), F.g.end(), [](std::int64_t c) { return c != 0; }) > 1) exact_ = false;
}

const FrobeniusLift::FactorImage& FrobeniusLift::factor_image(int f, int i, int k, bool with_dx) const {
    auto key = std::make_tuple(f, i, k, with_dx);
    auto it = fcache_.find(key);
    if (it != fcache_.end()) return it->second;
    const auto& F = pres_.factors()[f];
    const int P = static_cast<int>(p_);
    const int xdeg = P * i + (with_dx ? P - 1 : 0);
    const std::uint64_t lead = with_dx ? R_.reduce(static_cast<std::int64_t>(p_)) : 1 % R_.m;
    FactorImage img;
    if (!F.is_cover()) {
        if (lead) img[{xdeg, 0}] = lead;
        return fcache_.emplace(key, std::move(img)).first->second;
    }
    const Poly g = to_poly(F.g, R_);
    // h = g(x^p) - g(x)^p
    Poly gp(P * (g.size() - 1) + 1, 0);
    for (std::size_t l = 0; l < g.size(); ++l) gp[P * l] = g[l];
    Poly gpow{1 % R_.m};
    for (int r = 0; r < P; ++r) gpow = pmul(gpow, g, R_);
    Poly h(std::max(gp.size(), gpow.size()), 0);
    for (std::size_t l = 0; l < h.size(); ++l)
        h[l] = R_.sub(l < gp.size() ? gp[l] : 0, l < gpow.size() ? gpow[l] : 0);
    trim(h);
    Poly base(xdeg + 1, 0);
    base[xdeg] = lead;
    Poly hj{1 % R_.m};
    for (int j = 0; j < J_; ++j) {
        if (hj.empty()) break;
        const std::uint64_t c = binomial_rational_mod(R_, k, F.e, j);
        if (c) {
            Poly term = pmul(base, hj, R_);
            for (auto& x : term) x = R_.mul(x, c);
            cover_normal(term, P * k - F.e * P * j, g, F.e, R_, img);
        }
        hj = pmul(hj, h, R_);
    }
    return fcache_.emplace(key, std::move(img)).first->second;
}

const Form& FrobeniusLift::image(const FormKey& key) const {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::map<Exp, std::uint64_t> acc{{zero_exp(), 1 % R_.m}};
    for (int f = 0; f < pres_.dim(); ++f) {
        const bool cover = pres_.factors()[f].is_cover();
        const int i = key.e[pres_.x_var(f)];
        const int k = cover ? key.e[pres_.t_var(f)] : 0;
        const auto& img = factor_image(f, i, k, (key.S >> f) & 1);
        std::map<Exp, std::uint64_t> next;
        for (const auto& [e, c] : acc)
            for (const auto& [ik, c2] : img) {
                Exp e2 = e;
                e2[pres_.x_var(f)] = ik.first;
                if (cover) e2[pres_.t_var(f)] = ik.second;
                const std::uint64_t v = R_.mul(c, c2);
                if (v) next[e2] = R_.add(next[e2], v);
            }
        acc = std::move(next);
    }
    Form out;
    for (const auto& [e, c] : acc)
        if (c) out[FormKey{e, key.S}] = c;
    return cache_.emplace(key, std::move(out)).first->second;
}

KForm FrobeniusLift::image(const KForm& w) const {
    KForm out;
    for (const auto& [k, c] : w) {
        for (const auto& [k2, c2] : image(k)) {
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

TruncSeries FrobeniusLift::image_series(const Exp& e) const {
    TruncSeries s(unbounded(PrecisionPolicy(p_, N_, 0, 0)), pres_.nvars(), pres_.inverted_mask());
    for (const auto& [k, c] : image(FormKey{e, 0})) s.set_term(k.e, c);
    return s;
}

bool FrobeniusLift::check_relations() const {
    const auto pol = unbounded(PrecisionPolicy(p_, N_, 0, 0));
    for (int f = 0; f < pres_.dim(); ++f) {
        const auto& F = pres_.factors()[f];
        if (!F.is_cover()) continue;
        TruncSeries st = image_series(unit_exp(pres_.t_var(f)));
        TruncSeries lhs = TruncSeries::constant(pol, pres_.nvars(), 1, pres_.inverted_mask());
        for (int r = 0; r < F.e; ++r) lhs = pres_.multiply(lhs, st);
        TruncSeries rhs(pol, pres_.nvars(), pres_.inverted_mask());
        for (std::size_t l = 0; l < F.g.size(); ++l) {
            Exp e = zero_exp();
            e[pres_.x_var(f)] = static_cast<int>(p_ * l);
            rhs.add_term(e, R_.reduce(F.g[l]));
        }
        rhs = pres_.normal_form(rhs);
        if (!(lhs == rhs)) return false;
    }
    return true;
}

bool FrobeniusLift::check_mod_p() const {
    const Zmod Rp(p_, 1);
    const auto pol = unbounded(PrecisionPolicy(p_, N_, 0, 0));
    for (int f = 0; f < pres_.dim(); ++f) {
        const auto& F = pres_.factors()[f];
        std::vector<Exp> probes;
        Exp x = unit_exp(pres_.x_var(f));
        probes.push_back(x);
        if (F.is_cover())
            for (int k = -2; k <= F.e - 1; ++k) {
                Exp e = zero_exp();
                e[pres_.t_var(f)] = k;
                probes.push_back(e);
            }
        for (const auto& e : probes) {
            TruncSeries img = image_series(e);
            Exp ep = e;
            for (auto& v : ep) v *= static_cast<int>(p_);
            TruncSeries naive = pres_.normal_form(TruncSeries::monomial(pol, pres_.nvars(), ep, 1, pres_.inverted_mask()));
            TruncSeries diff = img - naive;
            for (const auto& [k, c] : diff.terms())
                if (c % p_ != 0) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- matrices

std::vector<PadicNumber> charpoly(const PMatrix& A, std::uint64_t p) {
    const int n = static_cast<int>(A.size());
    if (n == 0) return {exact(p, 1)};
    // c: coefficients high to low of the charpoly of the trailing principal block
    std::vector<PadicNumber> c{exact(p, 1), -A[n - 1][n - 1]};
    for (int r = n - 2; r >= 0; --r) {
        const int m = n - 1 - r;
        std::vector<PadicNumber> t{exact(p, 1), -A[r][r]};
        // v = B^k C, starting with C
        std::vector<PadicNumber> v(m);
        for (int a = 0; a < m; ++a) v[a] = A[r + 1 + a][r];
        for (int k = 0; k < m; ++k) {
            PadicNumber s = PadicNumber::zero(p, kExact);
            for (int a = 0; a < m; ++a) s = s + A[r][r + 1 + a] * v[a];
            t.push_back(-s);
            std::vector<PadicNumber> w(m, PadicNumber::zero(p, kExact));
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) w[a] = w[a] + A[r + 1 + a][r + 1 + b] * v[b];
            v = std::move(w);
        }
        std::vector<PadicNumber> nc(m + 2, PadicNumber::zero(p, kExact));
        for (int j = 0; j < m + 2; ++j)
            for (int l = 0; l <= std::min(j, m); ++l) nc[j] = nc[j] + t[j - l] * c[l];
        c = std::move(nc);
    }
    std::reverse(c.begin(), c.end());
    return c;
}

PMatrix inverse(const PMatrix& A, std::uint64_t p) {
    const int n = static_cast<int>(A.size());
    PMatrix M = A;
    PMatrix I(n, std::vector<PadicNumber>(n, PadicNumber::zero(p, kExact)));
    for (int i = 0; i < n; ++i) I[i][i] = exact(p, 1);
    for (int c = 0; c < n; ++c) {
        int best = -1;
        for (int r = c; r < n; ++r)
            if (!M[r][c].is_zero() && (best < 0 || M[r][c].valuation() < M[best][c].valuation())) best = r;
        if (best < 0) throw PrecisionError("matrix is singular at the working precision");
        std::swap(M[c], M[best]);
        std::swap(I[c], I[best]);
        const PadicNumber piv = M[c][c];
        for (int j = 0; j < n; ++j) {
            M[c][j] = M[c][j] / piv;
            I[c][j] = I[c][j] / piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || M[r][c].is_zero()) continue;
            const PadicNumber f = M[r][c];
            for (int j = 0; j < n; ++j) {
                M[r][j] = M[r][j] - f * M[c][j];
                I[r][j] = I[r][j] - f * I[c][j];
            }
        }
    }
    return I;
}

PMatrix matmul(const PMatrix& A, const PMatrix& B) {
    const std::size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), k = B.size();
    const std::uint64_t p = n ? A[0][0].prime() : 0;
    PMatrix C(n, std::vector<PadicNumber>(m, PadicNumber::zero(p, kExact)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t l = 0; l < k; ++l) C[i][j] = C[i][j] + A[i][l] * B[l][j];
    return C;
}

PadicNumber trace(const PMatrix& A, std::uint64_t p) {
    PadicNumber s = PadicNumber::zero(p, kExact);
    for (std::size_t i = 0; i < A.size(); ++i) s = s + A[i][i];
    return s;
}

std::vector<BigInt> power_sums(const std::vector<std::int64_t>& P, int M) {
    auto c = [&](int k) -> BigInt { return k < static_cast<int>(P.size()) ? BigInt(P[k]) : BigInt(0); };
    std::vector<BigInt> s(M + 1, 0);
    for (int m = 1; m <= M; ++m) {
        BigInt v = -m * c(m);
        for (int j = 1; j < m; ++j) v -= s[j] * c(m - j);
        s[m] = v;
    }
    return {s.begin() + 1, s.end()};
}

BigInt coefficient_bound(std::uint64_t p, int n, int i, int h, int k) {
    return binom_big(h, k) * half_power(p, k * (2 * n - i));
}

BigInt trace_bound(std::uint64_t p, int n, int i, int h, int m) { return BigInt(h) * half_power(p, m * (2 * n - i)); }

int required_precision(std::uint64_t p, int n, const std::vector<int>& dims, int M) {
    int d = 1;
    for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
        for (int k = 1; k <= dims[i]; ++k) d = std::max(d, digits_for(p, coefficient_bound(p, n, i, dims[i], k)));
        for (int m = 1; m <= M; ++m) d = std::max(d, digits_for(p, trace_bound(p, n, i, dims[i], m)));
    }
    return d;
}

int default_depth(std::uint64_t p) {
    BigInt q8 = big_pow(p, 8);
    return q8 > 100000000 ? 3 : 4;
}

FrobeniusMatrix frobenius_matrix(const FrobeniusLift& lift, const CohomologySpace& H) {
    FrobeniusMatrix out;
    out.degree = H.degree();
    const int h = H.dim();
    const std::uint64_t p = lift.p();
    const int N = lift.precision();
    const auto& V = H.complex().presentation();
    const bool top = H.degree() == V.dim();
    // Residues of the lift are used as exact representatives when the error can be bounded afterwards.
    const bool reps = lift.exact() || top;
    out.F.assign(h, std::vector<PadicNumber>(h, PadicNumber::zero(p, N)));
    std::map<FormKey, bool> support;
    for (int j = 0; j < h; ++j) {
        KForm w;
        for (const auto& [k, c] : H.basis()[j])
            for (const auto& [k2, c2] : lift.image(k)) {
                support[k2] = true;
                PadicNumber t = c * (reps ? PadicNumber::from_integer(p, static_cast<std::int64_t>(c2), kExact)
                                          : PadicNumber::from_residue(p, c2, N));
                auto it = w.find(k2);
                if (it == w.end())
                    w.emplace(k2, t);
                else
                    it->second = it->second + t;
            }
        auto r = H.reduce(w);
        for (int i = 0; i < h; ++i) out.F[i][j] = r.coords[i];
    }
    int cap = kExact;
    if (!lift.exact() && top && h > 0) {
        // error = p^N * (integral form on the support region); bound its reduction by reducing
        // every monomial of the region exactly
        int worst = 0;
        std::map<FormKey, bool> region = support;
        int maxdeg = 0, maxpole = 0;
        for (const auto& [k, b] : support) {
            auto [dg, pl] = DeRhamComplex::extent(V, k);
            maxdeg = std::max(maxdeg, dg);
            maxpole = std::max(maxpole, pl);
        }
        for (const auto& k : H.complex().window(H.degree(), maxdeg, maxpole)) region[k] = true;
        for (const auto& [k, b] : region) {
            KForm w{{k, exact(p, 1)}};
            auto r = H.reduce(w);
            for (const auto& c : r.coords)
                if (!c.is_zero()) worst = std::max(worst, -c.valuation());
        }
        // the tail beyond the window is given two more digits of slack
        cap = N - worst - 2;
        out.loss = worst + 2;
    }
    int min_abs = kExact;
    for (auto& row : out.F)
        for (auto& x : row) {
            x = x.reduce_precision(cap);
            min_abs = std::min(min_abs, x.absprec());
        }
    if (cap == kExact) out.loss = std::max(0, N - min_abs);
    return out;
}

// ---------------------------------------------------------------- zeta

namespace {

struct Attempt {
    int deficit = 0;  // > 0: digits missing for certified rounding
};

std::vector<std::int64_t> poly_mul(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    std::vector<std::int64_t> c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

std::optional<std::int64_t> to_i64(const BigInt& B) {
    if (B > BigInt(std::int64_t{1} << 61)) return std::nullopt;
    return static_cast<std::int64_t>(B);
}

// Rounds x with |x| <= B; returns false with deficit set when precision is short.
bool round_certified(const PadicNumber& x, const BigInt& B, std::uint64_t p, std::int64_t& out, int& deficit) {
    const int need = digits_for(p, B);
    const auto b = to_i64(B);
    if (!b || need > max_exponent(p)) throw PrecisionError("rounding bound exceeds the supported modulus");
    if (x.absprec() < need) {
        deficit = std::max(deficit, need - x.absprec());
        return false;
    }
    auto r = x.round_to_integer(*b);
    if (!r) throw InstabilityError("Frobenius data violates the Weil bound: " + x.to_string());
    out = *r;
    return true;
}

// Weil check for a hyperelliptic patch: P_1 = L(t) * prod_orbits (1 - t^|O|) / (1 - t), L of degree 2g
// with leading coefficient q^g.
std::optional<bool> weil_check(const VarietyPresentation& pres, std::uint64_t p, const std::vector<std::int64_t>& P1) {
    if (pres.dim() != 1 || pres.factors()[0].family != "hyperelliptic_patch") return std::nullopt;
    const auto& f = pres.factors()[0].g;
    const int d = static_cast<int>(f.size()) - 1;
    std::vector<std::int64_t> roots(d + 1, 0);  // roots[k] = #roots in F_{p^k}
    for (int k = 1; k <= d; ++k) {
        FiniteField K(p, k);
        for (std::uint32_t x = 0; x < K.q(); ++x)
            if (K.eval(f, x) == 0) ++roots[k];
    }
    std::vector<std::int64_t> orbits(d + 1, 0);
    for (int k = 1; k <= d; ++k) {
        std::int64_t r = roots[k];
        for (int l = 1; l < k; ++l)
            if (k % l == 0) r -= l * orbits[l];
        orbits[k] = r / k;
    }
    // points at infinity: one for odd degree, two (rational, f monic) for even degree
    std::vector<std::int64_t> Q{1};
    for (int k = 1; k <= d; ++k)
        for (std::int64_t o = 0; o < orbits[k]; ++o) {
            std::vector<std::int64_t> fac(k + 1, 0);
            fac[0] = 1;
            fac[k] = -1;
            Q = poly_mul(Q, fac);
        }
    if (d % 2 == 0) Q = poly_mul(Q, {1, -1});
    // odd degree: the single point at infinity cancels the 1/(1 - t)
    // polynomial division P1 / Q (Q has constant term 1)
    const int g = (d - 1) / 2;
    std::vector<std::int64_t> rem(P1.begin(), P1.end());
    std::vector<std::int64_t> L(std::max<int>(1, static_cast<int>(rem.size()) - static_cast<int>(Q.size()) + 1), 0);
    for (std::size_t i = 0; i < L.size(); ++i) {
        L[i] = rem[i];
        for (std::size_t j = 0; j < Q.size() && i + j < rem.size(); ++j) rem[i + j] -= L[i] * Q[j];
    }
    for (auto r : rem)
        if (r != 0) return false;
    if (static_cast<int>(L.size()) != 2 * g + 1) return false;
    std::int64_t qg = 1;
    for (int i = 0; i < g; ++i) qg *= static_cast<std::int64_t>(p);
    return L.back() == qg;
}

}  // namespace

ZetaReport zeta(const VarietyPresentation& pres, std::uint64_t p, const ZetaOptions& opt) {
    if (p == 2) throw DomainError("p = 2 is not supported");
    const int n = pres.dim();
    ZetaReport rep;
    rep.variety = pres.name();
    rep.p = p;
    rep.D = opt.D;
    rep.E = opt.E;
    rep.depth = opt.depth > 0 ? opt.depth : default_depth(p);
    const int M = rep.depth;

    rep.dims = stable_betti(pres, PrecisionPolicy(p, std::min(4, max_exponent(p)), opt.D, opt.E)).dims;
    rep.required_precision = required_precision(p, n, rep.dims, M);
    if (opt.precision && *opt.precision < rep.required_precision)
        throw PrecisionError("precision s = " + std::to_string(*opt.precision) + " cannot certify the zeta function; required s >= " +
                             std::to_string(rep.required_precision));

    auto attempt = [&](int N) -> Attempt {
        Attempt a;
        FrobeniusLift L(pres, p, std::min(N + 2, max_exponent(p)));
        DeRhamComplex C(pres, p, N);
        rep.precision = N;
        rep.series_terms = L.series_terms();
        rep.frobenius.clear();
        rep.P_padic.clear();
        rep.P.clear();
        std::vector<PMatrix> A;  // q^n F^-1
        for (int i = 0; i <= n; ++i) {
            std::vector<FormKey> extra;
            for (const auto& k : C.window(i, opt.D, opt.E))
                for (const auto& [k2, c] : L.image(k)) extra.push_back(k2);
            CohomologySpace H(C, i, opt.D, opt.E, extra);
            if (H.dim() != rep.dims[i]) throw InstabilityError("cohomology dimension changed on the Frobenius window");
            FrobeniusMatrix F = frobenius_matrix(L, H);
            const int h = H.dim();
            auto chi = charpoly(F.F, p);
            const PadicNumber qn = PadicNumber::from_integer(p, static_cast<std::int64_t>(ipow(p, n)), kExact);
            std::vector<PadicNumber> Pp{exact(p, 1)};
            std::vector<std::int64_t> Pi{1};
            PadicNumber qk = exact(p, 1);
            for (int k = 1; k <= h; ++k) {
                qk = qk * qn;
                PadicNumber c = chi[k] * qk / chi[0];
                Pp.push_back(c);
                std::int64_t v = 0;
                round_certified(c, coefficient_bound(p, n, i, h, k), p, v, a.deficit);
                Pi.push_back(v);
            }
            rep.P_padic.push_back(Pp);
            rep.P.push_back(Pi);
            PMatrix Ai = h ? inverse(F.F, p) : PMatrix{};
            for (auto& row : Ai)
                for (auto& x : row) x = x * qn;
            A.push_back(std::move(Ai));
            rep.frobenius.push_back(std::move(F));
        }
        if (a.deficit) return a;
        // zeta assembly and counts
        rep.numerator = {1};
        rep.denominator = {1};
        rep.recovered.assign(M, 0);
        for (int i = 0; i <= n; ++i) {
            (i % 2 ? rep.numerator : rep.denominator) = poly_mul(i % 2 ? rep.numerator : rep.denominator, rep.P[i]);
            auto s = power_sums(rep.P[i], M);
            for (int m = 0; m < M; ++m) rep.recovered[m] += (i % 2 ? -1 : 1) * s[m];
        }
        rep.base_change.assign(M, 0);
        rep.lefschetz = PadicNumber::zero(p, kExact);
        for (int i = 0; i <= n; ++i) {
            if (A[i].empty()) continue;
            const PadicNumber tr = trace(A[i], p);
            rep.lefschetz = i % 2 ? rep.lefschetz - tr : rep.lefschetz + tr;
            PMatrix pw = A[i];
            for (int m = 1; m <= M; ++m) {
                if (m > 1) pw = matmul(pw, A[i]);
                std::int64_t v = 0;
                if (round_certified(trace(pw, p), trace_bound(p, n, i, rep.dims[i], m), p, v, a.deficit))
                    rep.base_change[m - 1] += (i % 2 ? -1 : 1) * BigInt(v);
            }
        }
        if (a.deficit) return a;
        BigInt Lb = 0;
        for (int i = 0; i <= n; ++i) Lb += trace_bound(p, n, i, rep.dims[i], 1);
        std::int64_t lv = 0;
        int ld = 0;
        if (round_certified(rep.lefschetz, Lb, p, lv, ld)) rep.lefschetz_rounded = lv;
        return a;
    };

    if (opt.precision) {
        rep.auto_sized = false;
        rep.attempts = 1;
        Attempt a = attempt(*opt.precision);
        if (a.deficit)
            throw PrecisionError("precision s = " + std::to_string(*opt.precision) + " lost too many digits; required s >= " +
                                 std::to_string(*opt.precision + a.deficit));
    } else {
        rep.auto_sized = true;
        int N = rep.required_precision + 2;
        for (;;) {
            if (N > max_exponent(p)) throw PrecisionError("auto-sized precision exceeds the supported modulus for p = " + std::to_string(p));
            ++rep.attempts;
            Attempt a;
            try {
                a = attempt(N);
            } catch (const PrecisionError&) {
                a.deficit = 2;
            }
            if (!a.deficit) break;
            N += a.deficit;
        }
    }

    if (n == 1 && !rep.P.empty() && rep.P.size() > 1) rep.weil_check = weil_check(pres, p, rep.P[1]);
    if (opt.oracle) {
        for (int m = 1; m <= M; ++m) rep.oracle.push_back(BigInt(count_points(pres, p, m)));
        rep.pass = rep.recovered == rep.oracle && rep.base_change == rep.oracle && rep.lefschetz_rounded &&
                   BigInt(*rep.lefschetz_rounded) == rep.oracle[0] && rep.weil_check.value_or(true);
    } else {
        rep.pass = rep.recovered == rep.base_change && rep.weil_check.value_or(true);
    }
    return rep;
}

PadicNumber lefschetz(const VarietyPresentation& pres, std::uint64_t p, const ZetaOptions& opt) {
    ZetaOptions o = opt;
    o.oracle = false;
    return zeta(pres, p, o).lefschetz;
}

}  // namespace dagger
