#include "dagger/auto_group.hpp"

#include <algorithm>
#include <numeric>

namespace dagger {

namespace {

TruncSeries widen(const TruncSeries& f) {
    TruncSeries r(unbounded(f.policy()), f.nvars(), f.inverted_mask());
    for (const auto& [e, c] : f.terms()) r.add_term(e, c);
    return r;
}

std::vector<TruncSeries> coordinates_plus(const std::vector<TruncSeries>& a) {
    std::vector<TruncSeries> img;
    const int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i) img.push_back(TruncSeries::variable(a[i].policy(), n, i) + a[i]);
    return img;
}

TruncSeries subst(const TruncSeries& f, const std::vector<TruncSeries>& a) {
    return widen(f).substitute(coordinates_plus(a));
}

// det by expansion over permutations (n <= 6)
TruncSeries determinant(const std::vector<std::vector<TruncSeries>>& M, const PrecisionPolicy& pol, int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    TruncSeries det(pol, n);
    do {
        int inv = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) inv += perm[i] > perm[j];
        TruncSeries t = TruncSeries::constant(pol, n, 1);
        for (int i = 0; i < n; ++i) t = t * M[i][perm[i]];
        det += inv % 2 ? -t : t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

}  // namespace

GroupElement::GroupElement(const PrecisionPolicy& policy, std::vector<TruncSeries> a) : policy_(policy) {
    const int n = static_cast<int>(a.size());
    for (auto& ai : a) {
        if (ai.nvars() != n) throw DomainError("group element: a_i must live in n variables");
        if (ai.policy().p != policy.p || ai.policy().s != policy.s) throw DomainError("group element: ring mismatch");
        if (ai.inverted_mask() != 0) throw DomainError("group element: a_i must be polynomials");
        if (ai.min_valuation() < 1) throw DomainError("group element: a_i must be divisible by p");
        a_.push_back(widen(ai));
    }
}

GroupElement GroupElement::identity(const PrecisionPolicy& policy, int n) {
    return GroupElement(policy, std::vector<TruncSeries>(n, TruncSeries(unbounded(policy), n)));
}

TruncSeries GroupElement::act(const TruncSeries& f) const {
    if (f.nvars() != nvars()) throw DomainError("act: coordinate mismatch");
    TruncSeries r = subst(f, a_).rebound(f.policy().D, f.policy().E);
    TruncSeries out(f.policy(), f.nvars());
    for (const auto& [e, c] : r.terms()) out.add_term(e, c);
    return out;
}

DiffOperator GroupElement::operator_form() const {
    const int n = nvars();
    const int A = std::max(policy_.s - 1, 0);
    const PrecisionPolicy wide = unbounded(policy_);
    DiffOperator P(wide, n, A);
    for (const auto& alpha : multi_indices(n, A)) {
        TruncSeries c = TruncSeries::constant(wide, n, 1);
        for (int i = 0; i < n; ++i) c = c * a_[i].pow(alpha[i]);
        P.set_coefficient(alpha, c);
    }
    return P;
}

bool GroupElement::operator==(const GroupElement& o) const {
    if (nvars() != o.nvars()) return false;
    for (int i = 0; i < nvars(); ++i)
        if (a_[i] != o.a_[i]) return false;
    return true;
}

GroupElement theta(const PrecisionPolicy& policy, const std::vector<TruncSeries>& a) { return GroupElement(policy, a); }

std::vector<TruncSeries> delta(const GroupElement& g) { return g.a(); }

GroupElement theta_from_operator(const DiffOperator& P) {
    const int n = P.nvars();
    std::vector<TruncSeries> a;
    for (int i = 0; i < n; ++i) a.push_back(widen(P.coefficient(unit_exp(i))));
    GroupElement g(P.policy(), a);
    DiffOperator expect = g.operator_form();
    for (const auto& alpha : multi_indices(n, P.order_bound()))
        if (widen(P.coefficient(alpha)) != expect.coefficient(alpha))
            throw DomainError("theta_from_operator: symbol is not of the form a^alpha");
    return g;
}

GroupElement group_mul(const GroupElement& g1, const GroupElement& g2) {
    if (g1.nvars() != g2.nvars()) throw DomainError("group_mul: coordinate mismatch");
    std::vector<TruncSeries> a;
    for (int i = 0; i < g1.nvars(); ++i) a.push_back(g1.a()[i] + subst(g2.a()[i], g1.a()));
    return GroupElement(g1.policy(), a);
}

GroupElement group_inv(const GroupElement& g) {
    const int n = g.nvars();
    const Zmod R = g.policy().ring();
    // b = -a mod p^2, then b <- -a(x + b): each pass fixes one more p-adic digit
    std::vector<TruncSeries> b;
    for (const auto& ai : g.a()) b.push_back(-ai);
    for (int k = 2; k < g.policy().s; ++k) {
        std::vector<TruncSeries> nb;
        for (int i = 0; i < n; ++i) nb.push_back(-subst(g.a()[i], b));
        b = nb;
    }
    GroupElement inv(g.policy(), b);
    const GroupElement id = GroupElement::identity(g.policy(), n);
    if (group_mul(inv, g) != id || group_mul(g, inv) != id)
        throw Error("group_inv: lifting did not converge in s - 1 steps (p = " + std::to_string(R.p) + ")");
    return inv;
}

bool homomorphism_check(const GroupElement& g, int D) {
    const int n = g.nvars();
    const PrecisionPolicy wide = unbounded(g.policy());
    const DiffOperator P = g.operator_form();
    for (const auto& beta : multi_indices(n, D)) {
        TruncSeries m = TruncSeries::monomial(wide, n, beta, 1);
        if (apply(P, m) != subst(m, g.a())) return false;
    }
    return true;
}

bool order_bound_check(const GroupElement& g, int s_prime, const std::vector<TruncSeries>& tests, int D) {
    if (s_prime < 0 || s_prime > g.policy().s || static_cast<int>(tests.size()) < s_prime)
        throw DomainError("order_bound_check: need s' <= s test functions");
    const int n = g.nvars();
    const PrecisionPolicy wide = unbounded(g.policy());
    std::vector<TruncSeries> a;
    for (int k = 0; k < s_prime; ++k) a.push_back(widen(tests[k]));
    // C_0 = g, C_k(f) = C_{k-1}(a_k f) - a_k C_{k-1}(f)
    std::function<TruncSeries(int, const TruncSeries&)> C = [&](int k, const TruncSeries& f) -> TruncSeries {
        if (k == 0) return subst(f, g.a());
        return C(k - 1, a[k - 1] * f) - a[k - 1] * C(k - 1, f);
    };
    for (const auto& beta : multi_indices(n, D)) {
        TruncSeries r = C(s_prime, TruncSeries::monomial(wide, n, beta, 1));
        if (!r.mod_p_power(s_prime).is_zero()) return false;
    }
    return true;
}

JacobianSides jacobian_identity(const GroupElement& g) {
    const int n = g.nvars();
    const PrecisionPolicy wide = unbounded(g.policy());
    JacobianSides J;
    J.left = apply(transpose(group_inv(g).operator_form()), TruncSeries::constant(wide, n, 1));
    std::vector<std::vector<TruncSeries>> M(n, std::vector<TruncSeries>(n));
    for (int i = 0; i < n; ++i) {
        TruncSeries gx = subst(TruncSeries::variable(wide, n, i), g.a());
        for (int j = 0; j < n; ++j) M[i][j] = delta_apply(unit_exp(j), gx);
    }
    J.right = n == 0 ? TruncSeries::constant(wide, 0, 1) : determinant(M, wide, n);
    J.equal = J.left == J.right;
    return J;
}

CocycleValue series_log1p(const TruncSeries& u) {
    if (u.min_valuation() < 1) throw DomainError("series_log1p: argument must be divisible by p");
    const Zmod R = u.ring();
    const int s = R.s;
    int loss = 0;
    int M = 0;
    for (int m = 1; m <= 4 * s + 8; ++m) {
        const int v = valuation_int(R.p, m);
        if (m - v < s) {
            loss = std::max(loss, v);
            M = m;
        }
    }
    const int prec = s - loss;
    TruncSeries acc(u.policy(), u.nvars(), u.inverted_mask());
    TruncSeries pw = TruncSeries::constant(u.policy(), u.nvars(), 1);
    for (int m = 1; m <= M; ++m) {
        pw = pw * u;
        const int v = valuation_int(R.p, m);
        if (m - v >= prec) continue;
        const std::uint64_t unit_inv = R.inv(static_cast<std::uint64_t>(m) / ipow(R.p, v));
        TruncSeries term(u.policy(), u.nvars(), u.inverted_mask());
        for (const auto& [e, c] : pw.terms()) term.add_term(e, R.mul(R.divide_by_p_power(c, v), unit_inv));
        acc += m % 2 ? term : -term;
    }
    return {acc.mod_p_power(prec), prec};
}

CocycleValue log_cocycle(const GroupElement& g) {
    JacobianSides J = jacobian_identity(g);
    return series_log1p(J.left - TruncSeries::constant(J.left.policy(), g.nvars(), 1));
}

bool cocycle_law_check(const GroupElement& g1, const GroupElement& g2) {
    CocycleValue c12 = log_cocycle(group_mul(g1, g2));
    CocycleValue c1 = log_cocycle(g1);
    CocycleValue c2 = log_cocycle(g2);
    const int prec = std::min({c12.precision, c1.precision, c2.precision});
    TruncSeries rhs = c1.value + subst(c2.value, g1.a());
    return c12.value.mod_p_power(prec) == rhs.mod_p_power(prec);
}

std::vector<GroupElement> axis_factorization(const GroupElement& g) {
    const int n = g.nvars();
    const PrecisionPolicy wide = unbounded(g.policy());
    std::vector<GroupElement> factors;
    GroupElement cur = g;
    for (int i = 0; i < n; ++i) {
        std::vector<TruncSeries> c(n, TruncSeries(wide, n));
        c[i] = -group_inv(cur).act(cur.a()[i]);
        GroupElement h(g.policy(), c);
        factors.push_back(group_inv(h));
        cur = group_mul(cur, h);
    }
    if (cur != GroupElement::identity(g.policy(), n)) throw Error("axis_factorization: remainder is not the identity");
    return factors;
}

GroupElement product(const std::vector<GroupElement>& factors_low_first) {
    if (factors_low_first.empty()) throw DomainError("product of no factors");
    GroupElement r = factors_low_first.front();
    for (std::size_t k = 1; k < factors_low_first.size(); ++k) r = group_mul(factors_low_first[k], r);
    return r;
}

}  // namespace dagger
