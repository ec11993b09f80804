#include "dagger/local_cohomology.hpp"

#include <algorithm>

#include "dagger/linalg.hpp"

namespace dagger {

namespace {

int total_degree(const Exp& e, int n) {
    int t = 0;
    for (int i = 0; i < n; ++i) t += e[i];
    return t;
}

int digits_known(const Exp& e, int n, int W, int s) {
    const int room = W + 1 - total_degree(e, n);
    if (room <= 0) return 0;
    return std::min(s, (room + 1) / 2);
}

std::uint32_t pole_mask(int q) { return q >= 32 ? ~0u : ((1u << q) - 1); }

PrecisionPolicy wide_of(const PrecisionPolicy& pol) { return unbounded(pol); }

TruncSeries widen(const TruncSeries& f, std::uint32_t mask) {
    TruncSeries r(wide_of(f.policy()), f.nvars(), mask | f.inverted_mask());
    for (const auto& [e, c] : f.terms()) r.add_term(e, c);
    return r;
}

bool principal(const Exp& e, int q) {
    for (int i = 0; i < q; ++i)
        if (e[i] >= 0) return false;
    return true;
}

TruncSeries principal_part(const TruncSeries& f, int q) {
    return f.filtered([q](const Exp& e) { return principal(e, q); });
}

std::uint64_t eval_mod_p(const TruncSeries& f, const std::vector<std::uint64_t>& pt) {
    const std::uint64_t p = f.policy().p;
    const Zmod F(p, 1);
    std::uint64_t v = 0;
    for (const auto& [e, c] : f.terms()) {
        std::uint64_t t = c % p;
        for (int i = 0; i < f.nvars() && t; ++i) t = F.mul(t, F.pow(pt[i], static_cast<std::uint64_t>(e[i])));
        v = F.add(v, t);
    }
    return v;
}

TruncSeries det_series(const std::vector<std::vector<TruncSeries>>& M, const PrecisionPolicy& pol, int n, int q) {
    if (q == 0) return TruncSeries::constant(pol, n, 1);
    std::vector<int> perm(q);
    for (int i = 0; i < q; ++i) perm[i] = i;
    TruncSeries det(pol, n);
    do {
        int inv = 0;
        for (int i = 0; i < q; ++i)
            for (int j = i + 1; j < q; ++j) inv += perm[i] > perm[j];
        TruncSeries t = TruncSeries::constant(pol, n, 1);
        for (int i = 0; i < q; ++i) t = t * M[i][perm[i]];
        det += inv % 2 ? -t : t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

// 1/f for a polynomial with unit constant term, modulo weight > W.
TruncSeries unit_inverse(const TruncSeries& f, int W) {
    const Zmod R = f.ring();
    const std::uint64_t c0 = f.coeff(zero_exp());
    if (c0 % R.p == 0) throw DomainError("series inverse: constant term is not a unit");
    const std::uint64_t ci = R.inv(c0);
    TruncSeries u = (f - TruncSeries::constant(f.policy(), f.nvars(), static_cast<std::int64_t>(c0))).scaled(ci);
    TruncSeries sum = TruncSeries::constant(f.policy(), f.nvars(), 1);
    TruncSeries pw = sum;
    for (int k = 1; k <= W + 1; ++k) {
        pw = weight_reduce(-(pw * u), W);
        if (pw.is_zero()) break;
        sum += pw;
    }
    return weight_reduce(sum.scaled(ci), W);
}

CechClass build_class(const std::vector<TruncSeries>& z, const PrecisionPolicy& pol, int slack, bool top) {
    if (z.empty()) throw DomainError("local cohomology: need q >= 1");
    const int q = static_cast<int>(z.size());
    const int n = z[0].nvars();
    if (q > n || n > 3) throw DomainError("local cohomology: need q <= n <= 3");
    check_adapted(z);
    if (!smooth_complete_intersection(z)) throw DomainError("z mod p is not a smooth complete intersection");
    CechClass c;
    c.policy = pol;
    c.n = n;
    c.q = q;
    c.z = z;
    c.top = top;
    c.W = window_weight(pol) + slack;
    // each factor lies in weight >= -1; the partial product of j factors is needed modulo weight > W + q - j
    TruncSeries prod = TruncSeries::constant(wide_of(pol), n, 1, pole_mask(q));
    for (int j = 0; j < q; ++j) {
        TruncSeries inv = laurent_inverse(z[j], j, c.W + q - 1);
        prod = weight_reduce(prod * inv, c.W + q - 1 - j);
    }
    c.rep = top ? principal_part(prod, q) : prod;
    return c;
}

void enumerate_window(int n, std::uint32_t inverted, int D, int E, int i, Exp& cur, int posdeg, std::vector<Exp>& out) {
    if (i == n) {
        out.push_back(cur);
        return;
    }
    const int lo = ((inverted >> i) & 1) ? -E : 0;
    for (int k = lo; posdeg + std::max(k, 0) <= D; ++k) {
        cur[i] = k;
        enumerate_window(n, inverted, D, E, i + 1, cur, posdeg + std::max(k, 0), out);
    }
    cur[i] = 0;
}

}  // namespace

int window_weight(const PrecisionPolicy& pol) { return pol.D + 2 * pol.s - 1; }

TruncSeries weight_reduce(const TruncSeries& f, int W) {
    TruncSeries r(f.policy(), f.nvars(), f.inverted_mask());
    const std::uint64_t p = f.policy().p;
    for (const auto& [e, c] : f.terms()) {
        const int k = digits_known(e, f.nvars(), W, f.policy().s);
        if (k == 0) continue;
        r.add_term(e, c % ipow(p, k));
    }
    return r;
}

TruncSeries CechClass::window() const {
    TruncSeries out(policy, n, rep.inverted_mask());
    for (const auto& [e, c] : rep.terms()) {
        int pos = 0;
        bool ok = true;
        for (int i = 0; i < n; ++i) {
            if (e[i] > 0) pos += e[i];
            if (e[i] < -policy.E) ok = false;
        }
        if (ok && pos <= policy.D) out.add_term(e, c);
    }
    return out;
}

bool CechClass::equals(const CechClass& o) const {
    if (n != o.n || q != o.q || top != o.top) return false;
    return window() == o.window();
}

void check_adapted(const std::vector<TruncSeries>& z) {
    const int q = static_cast<int>(z.size());
    for (int i = 0; i < q; ++i) {
        const Zmod R = z[i].ring();
        if (z[i].inverted_mask() != 0) throw DomainError("z_i must be a polynomial");
        if (z[i].nvars() != z[0].nvars()) throw DomainError("z_i in different numbers of variables");
        if (z[i].coeff(unit_exp(i)) % R.p == 0)
            throw DomainError("z_" + std::to_string(i + 1) + " is not adapted: its x_" + std::to_string(i + 1) +
                              " coefficient is not a unit");
        for (const auto& [e, c] : z[i].terms()) {
            if (e == unit_exp(i)) continue;
            if (R.valuation(c) >= 1 || TruncSeries::positive_degree(e) >= 2) continue;
            throw DomainError("z_" + std::to_string(i + 1) + " is not adapted: a unit term of degree <= 1 besides x_" +
                              std::to_string(i + 1));
        }
    }
}

bool smooth_complete_intersection(const std::vector<TruncSeries>& z) {
    const int q = static_cast<int>(z.size());
    const int n = z[0].nvars();
    const std::uint64_t p = z[0].policy().p;
    std::vector<std::vector<TruncSeries>> J(q, std::vector<TruncSeries>(n));
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < n; ++j) J[i][j] = delta_apply(unit_exp(j), z[i]);
    std::uint64_t total = 1;
    for (int i = 0; i < n && total <= 4096; ++i) total *= p;
    total = std::min<std::uint64_t>(total, 4096);
    const Zmod F(p, 1);
    std::vector<std::uint64_t> pt(n);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t r = idx;
        for (int i = 0; i < n; ++i) {
            pt[i] = r % p;
            r /= p;
        }
        bool on_Y = true;
        for (int i = 0; i < q && on_Y; ++i) on_Y = eval_mod_p(z[i], pt) == 0;
        if (!on_Y) continue;
        std::vector<std::vector<std::uint64_t>> M(q, std::vector<std::uint64_t>(n));
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < n; ++j) M[i][j] = eval_mod_p(J[i][j], pt);
        // rank over F_p by elimination
        int rank = 0;
        for (int col = 0; col < n && rank < q; ++col) {
            int piv = -1;
            for (int r2 = rank; r2 < q; ++r2)
                if (M[r2][col]) piv = r2;
            if (piv < 0) continue;
            std::swap(M[piv], M[rank]);
            const std::uint64_t inv = F.inv(M[rank][col]);
            for (int r2 = 0; r2 < q; ++r2) {
                if (r2 == rank || !M[r2][col]) continue;
                const std::uint64_t f = F.mul(M[r2][col], inv);
                for (int c2 = 0; c2 < n; ++c2) M[r2][c2] = F.sub(M[r2][c2], F.mul(f, M[rank][c2]));
            }
            ++rank;
        }
        if (rank < q) return false;
    }
    return true;
}

TruncSeries laurent_inverse(const TruncSeries& zi, int i, int W) {
    const Zmod R = zi.ring();
    const int n = zi.nvars();
    const std::uint32_t mask = 1u << i;
    const std::uint64_t c = zi.coeff(unit_exp(i));
    if (c % R.p == 0) throw DomainError("laurent_inverse: leading coefficient is not a unit");
    const std::uint64_t ci = R.inv(c);
    // 1/z = c^-1 x_i^-1 sum (-u)^k, u = eps / (c x_i) of weight >= 1
    Exp xinv = zero_exp();
    xinv[i] = -1;
    TruncSeries u(wide_of(zi.policy()), n, mask);
    for (const auto& [e, v] : zi.terms())
        if (e != unit_exp(i)) u.add_term(exp_add(e, xinv), R.mul(v, ci));
    TruncSeries sum = TruncSeries::constant(wide_of(zi.policy()), n, 1, mask);
    TruncSeries pw = sum;
    for (int k = 1; k <= W + 2; ++k) {
        pw = weight_reduce(-(pw * u), W + 1);
        if (pw.is_zero()) break;
        sum += pw;
    }
    TruncSeries lead = TruncSeries::monomial(wide_of(zi.policy()), n, xinv, ci, mask);
    return weight_reduce(lead * sum, W);
}

CechClass class_one_over_z(const std::vector<TruncSeries>& z, const PrecisionPolicy& pol, int slack) {
    return build_class(z, pol, slack, true);
}

CechClass meromorphic_one_over_z(const std::vector<TruncSeries>& z, const PrecisionPolicy& pol, int slack) {
    return build_class(z, pol, slack, false);
}

CechClass multiply(const TruncSeries& g, const CechClass& c) {
    if (g.inverted_mask() != 0) throw DomainError("multiply: polynomial expected");
    CechClass r = c;
    TruncSeries prod = weight_reduce(widen(g, 0) * c.rep, c.W);
    r.rep = c.top ? principal_part(prod, c.q) : prod;
    return r;
}

CechClass op_action(const DiffOperator& P, const CechClass& c) {
    if (P.nvars() != c.n) throw DomainError("op_action: coordinate mismatch");
    for (const auto& [alpha, a] : P.symbol())
        if (a.inverted_mask() != 0) throw DomainError("op_action: coefficients must be polynomials");
    const int ord = std::max(P.order(), 0);
    CechClass r = c;
    r.W = c.W - ord;
    if (r.W < window_weight(c.policy))
        throw InstabilityError("op_action: pole/window overflow (operator order " + std::to_string(ord) +
                               " exceeds the class's remaining slack " + std::to_string(c.W - window_weight(c.policy)) +
                               ")");
    TruncSeries acc(c.rep.policy(), c.n, c.rep.inverted_mask());
    for (const auto& [alpha, a] : P.symbol()) acc += widen(a, 0) * delta_apply(alpha, c.rep);
    acc = weight_reduce(acc, r.W);
    r.rep = c.top ? principal_part(acc, c.q) : acc;
    return r;
}

std::vector<DiffOperator> meromorphic_annihilators(int n, int q, const PrecisionPolicy& pol, int A) {
    std::vector<DiffOperator> gens;
    const PrecisionPolicy wide = wide_of(pol);
    for (int i = 0; i < q; ++i)
        for (int a = 1; a <= A; ++a) {
            Exp al = zero_exp();
            al[i] = a;
            gens.push_back(compose(DiffOperator::delta(wide, n, A + 1, al),
                                   DiffOperator::multiplication(TruncSeries::variable(wide, n, i), A + 1)));
        }
    return gens;
}

std::vector<DiffOperator> top_annihilators(int n, int q, const PrecisionPolicy& pol, int A) {
    std::vector<DiffOperator> gens;
    const PrecisionPolicy wide = wide_of(pol);
    for (int i = 0; i < q; ++i) gens.push_back(DiffOperator::multiplication(TruncSeries::variable(wide, n, i), A + 1));
    for (int j = q; j < n; ++j)
        for (int a = 1; a <= A; ++a) {
            Exp al = zero_exp();
            al[j] = a;
            gens.push_back(DiffOperator::delta(wide, n, A + 1, al));
        }
    return gens;
}

AnnihilatorReport annihilator_check(const std::vector<TruncSeries>& z, const PrecisionPolicy& pol, int A) {
    const int q = static_cast<int>(z.size());
    const int n = z.empty() ? 0 : z[0].nvars();
    for (int i = 0; i < q; ++i)
        if (z[i] != TruncSeries::variable(z[i].policy(), n, i))
            throw DomainError("annihilator_check: z must be the coordinates x_1..x_q");
    AnnihilatorReport rep;
    const CechClass mero = meromorphic_one_over_z(z, pol, A + 2);
    const CechClass top = class_one_over_z(z, pol, A + 2);
    rep.meromorphic = true;
    for (const auto& P : meromorphic_annihilators(n, q, pol, A)) {
        rep.meromorphic = rep.meromorphic && op_action(P, mero).is_zero();
        ++rep.generators;
    }
    rep.top = true;
    for (const auto& P : top_annihilators(n, q, pol, A)) {
        rep.top = rep.top && op_action(P, top).is_zero();
        ++rep.generators;
    }
    return rep;
}

bool same_ideal(const std::vector<TruncSeries>& z, const std::vector<TruncSeries>& zp, int D) {
    if (z.size() != zp.size() || z.empty()) return false;
    const int n = z[0].nvars();
    const Zmod R = z[0].ring();
    const auto cols = multi_indices(n, D);
    std::map<Exp, int> col;
    for (std::size_t k = 0; k < cols.size(); ++k) col[cols[k]] = static_cast<int>(k);
    auto vec = [&](const TruncSeries& f) {
        std::vector<std::uint64_t> v(cols.size(), 0);
        for (const auto& [e, c] : f.terms()) {
            auto it = col.find(e);
            if (it != col.end()) v[it->second] = c;
        }
        return v;
    };
    auto contained = [&](const std::vector<TruncSeries>& gens, const std::vector<TruncSeries>& elems) {
        Matrix M;
        const PrecisionPolicy wide = wide_of(gens[0].policy());
        for (const auto& g : gens)
            for (const auto& b : multi_indices(n, D)) M.push_back(vec(widen(g, 0) * TruncSeries::monomial(wide, n, b, 1)));
        HowellForm H(M, R);
        for (const auto& f : elems)
            if (!H.contains(vec(f))) return false;
        return true;
    };
    return contained(z, zp) && contained(zp, z);
}

TruncSeries jacobian_det(const std::vector<TruncSeries>& z) {
    const int q = static_cast<int>(z.size());
    const int n = z[0].nvars();
    std::vector<std::vector<TruncSeries>> M(q, std::vector<TruncSeries>(q));
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) M[i][j] = widen(delta_apply(unit_exp(j), z[i]), 0);
    return det_series(M, wide_of(z[0].policy()), n, q);
}

CoordinateChange change_of_coordinates(const std::vector<TruncSeries>& z, const std::vector<TruncSeries>& zp,
                                       const PrecisionPolicy& pol) {
    CoordinateChange r;
    r.ideal_match = same_ideal(z, zp, pol.D);
    if (!r.ideal_match) throw DomainError("change_of_coordinates: z and z' cut different ideals");
    r.lhs = class_one_over_z(zp, pol);
    const CechClass base = class_one_over_z(z, pol);
    r.det = weight_reduce(jacobian_det(z) * unit_inverse(jacobian_det(zp), base.W), base.W);
    r.rhs = multiply(r.det, base);
    r.equal = r.lhs.equals(r.rhs);
    return r;
}

PurityReport pure_dims(const std::vector<TruncSeries>& z, const PrecisionPolicy& pol) {
    const int q = static_cast<int>(z.size());
    if (q < 1 || q > 2) throw DomainError("pure_dims: need 1 <= q <= 2");
    const int n = z[0].nvars();
    if (n > 3) throw DomainError("pure_dims: need n <= 3");
    check_adapted(z);
    const Zmod R = pol.ring();
    // spots C^k: subsets I of {0..q-1} with |I| = k, each with its monomial window
    std::vector<std::vector<std::uint32_t>> subsets(q + 1);
    for (std::uint32_t I = 0; I < (1u << q); ++I) subsets[__builtin_popcount(I)].push_back(I);
    std::vector<std::vector<std::pair<std::uint32_t, Exp>>> basis(q + 1);
    std::vector<std::map<std::pair<std::uint32_t, Exp>, int>> index(q + 1);
    for (int k = 0; k <= q; ++k)
        for (std::uint32_t I : subsets[k]) {
            std::vector<Exp> mons;
            Exp cur = zero_exp();
            enumerate_window(n, I, pol.D, pol.E, 0, cur, 0, mons);
            for (const auto& e : mons) {
                index[k][{I, e}] = static_cast<int>(basis[k].size());
                basis[k].push_back({I, e});
            }
        }
    // d_k : C^k -> C^{k+1} as a matrix acting on row vectors
    std::vector<Matrix> d(q);
    for (int k = 0; k < q; ++k) {
        d[k].assign(basis[k].size(), std::vector<std::uint64_t>(basis[k + 1].size(), 0));
        for (std::size_t r = 0; r < basis[k].size(); ++r) {
            const auto& [I, e] = basis[k][r];
            for (int j = 0; j < q; ++j) {
                if ((I >> j) & 1) continue;
                const std::uint32_t J = I | (1u << j);
                const int sign = __builtin_popcount(J & ((1u << j) - 1)) % 2 ? -1 : 1;
                d[k][r][index[k + 1].at({J, e})] = R.reduce(sign);
            }
        }
    }
    PurityReport rep;
    for (int k = 0; k <= q; ++k) {
        const int ker = k == q ? static_cast<int>(basis[k].size()) * pol.s : left_kernel(d[k], R).length();
        const int im = k == 0 ? 0 : HowellForm(d[k - 1], R).length();
        rep.lengths.push_back(ker - im);
        rep.dims.push_back((ker - im) / pol.s);
    }
    rep.concentrated = true;
    for (int k = 0; k < q; ++k) rep.concentrated = rep.concentrated && rep.lengths[k] == 0;
    rep.concentrated = rep.concentrated && rep.lengths[q] > 0;
    return rep;
}

}  // namespace dagger
