#include "dagger/diff_ops.hpp"

#include <omp.h>

#include <sstream>

namespace dagger {

namespace {

std::uint64_t multi_binomial(const Zmod& R, const Exp& beta, const Exp& alpha, int n) {
    std::uint64_t c = 1;
    for (int i = 0; i < n && c != 0; ++i) c = R.mul(c, binomial_mod(R, beta[i], alpha[i]));
    return c;
}

bool leq(const Exp& a, const Exp& b, int n) {
    for (int i = 0; i < n; ++i)
        if (a[i] > b[i]) return false;
    return true;
}

// Copy of f's terms into a series with the given policy (no truncation when the policy is unbounded).
TruncSeries recast(const TruncSeries& f, const PrecisionPolicy& pol, int n, std::uint32_t mask) {
    TruncSeries r(pol, n, mask | f.inverted_mask());
    for (const auto& [e, c] : f.terms()) r.add_term(e, c);
    return r;
}

void enumerate(int n, int A, int i, int left, Exp& cur, std::vector<Exp>& out) {
    if (i == n) {
        out.push_back(cur);
        return;
    }
    for (int k = 0; k <= left; ++k) {
        cur[i] = k;
        enumerate(n, A, i + 1, left - k, cur, out);
    }
    cur[i] = 0;
}

TruncSeries symbol_entry(const Exp& alpha, const std::map<Exp, TruncSeries>& values, const PrecisionPolicy& wide, int n,
                         std::uint32_t mask) {
    const Zmod R = wide.ring();
    TruncSeries a(wide, n, mask);
    std::vector<Exp> betas;
    Exp cur = zero_exp();
    enumerate(n, multi_degree(alpha, n), 0, multi_degree(alpha, n), cur, betas);
    for (const auto& beta : betas) {
        if (!leq(beta, alpha, n)) continue;
        std::uint64_t c = multi_binomial(R, alpha, beta, n);
        if (multi_degree(beta, n) % 2) c = R.neg(c);
        if (c == 0) continue;
        const TruncSeries& v = values.at(exp_sub(alpha, beta));
        for (const auto& [e, w] : v.terms()) a.add_term(exp_add(e, beta), R.mul(c, w));
    }
    return a;
}

std::map<Exp, TruncSeries> monomial_values(const MonomialMap& P, const std::vector<Exp>& idx, const PrecisionPolicy& wide,
                                           int n, std::uint32_t mask, bool parallel) {
    std::vector<TruncSeries> vals(idx.size());
    const long m = static_cast<long>(idx.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long k = 0; k < m; ++k) vals[k] = recast(P(idx[k]), wide, n, mask);
    std::map<Exp, TruncSeries> out;
    for (long k = 0; k < m; ++k) out.emplace(idx[k], std::move(vals[k]));
    return out;
}

DiffOperator extract_impl(const MonomialMap& P, const PrecisionPolicy& policy, int n, int A, std::uint32_t mask,
                          bool parallel) {
    const PrecisionPolicy wide = unbounded(policy);
    const auto idx = multi_indices(n, A);
    const auto values = monomial_values(P, idx, wide, n, mask, parallel);
    std::vector<TruncSeries> coeffs(idx.size());
    const long m = static_cast<long>(idx.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long k = 0; k < m; ++k) coeffs[k] = symbol_entry(idx[k], values, wide, n, mask).rebound(policy.D, policy.E);
    DiffOperator out(policy, n, A, mask);
    for (long k = 0; k < m; ++k) {
        TruncSeries c(policy, n, mask | coeffs[k].inverted_mask());
        for (const auto& [e, v] : coeffs[k].terms()) c.add_term(e, v);
        if (coeffs[k].uncertified()) c.mark_uncertified();
        out.set_coefficient(idx[k], c);
    }
    return out;
}

}  // namespace

int multi_degree(const Exp& alpha, int n) {
    int d = 0;
    for (int i = 0; i < n; ++i) d += alpha[i];
    return d;
}

std::vector<Exp> multi_indices(int n, int A) {
    std::vector<Exp> out;
    for (int d = 0; d <= A; ++d) {
        std::vector<Exp> level;
        Exp cur = zero_exp();
        enumerate(n, d, 0, d, cur, level);
        for (const auto& e : level)
            if (multi_degree(e, n) == d) out.push_back(e);
    }
    return out;
}

DiffOperator::DiffOperator(const PrecisionPolicy& policy, int nvars, int A, std::uint32_t inverted_mask)
    : policy_(policy), n_(nvars), A_(A), inverted_(inverted_mask) {
    if (nvars < 0 || nvars > kMaxVars) throw DomainError("operator: bad number of coordinates");
    if (A < 0) throw DomainError("operator: negative order bound");
}

DiffOperator DiffOperator::identity(const PrecisionPolicy& policy, int nvars, int A) {
    DiffOperator P(policy, nvars, A);
    P.set_coefficient(zero_exp(), TruncSeries::constant(policy, nvars, 1));
    return P;
}

DiffOperator DiffOperator::multiplication(const TruncSeries& g, int A) {
    DiffOperator P(g.policy(), g.nvars(), A, g.inverted_mask());
    P.set_coefficient(zero_exp(), g);
    return P;
}

DiffOperator DiffOperator::delta(const PrecisionPolicy& policy, int nvars, int A, const Exp& alpha) {
    DiffOperator P(policy, nvars, A);
    P.set_coefficient(alpha, TruncSeries::constant(policy, nvars, 1));
    return P;
}

int DiffOperator::order() const {
    int o = -1;
    for (const auto& [a, c] : symbol_) o = std::max(o, multi_degree(a, n_));
    return o;
}

TruncSeries DiffOperator::coefficient(const Exp& alpha) const {
    auto it = symbol_.find(alpha);
    if (it != symbol_.end()) return it->second;
    return TruncSeries(policy_, n_, inverted_);
}

void DiffOperator::set_coefficient(const Exp& alpha, const TruncSeries& a) {
    for (int i = 0; i < kMaxVars; ++i)
        if (alpha[i] < 0 || (i >= n_ && alpha[i] != 0)) throw DomainError("operator: bad multi-index");
    if (multi_degree(alpha, n_) > A_) throw DomainError("operator: order exceeds the bound A");
    if (a.nvars() != n_ || a.policy().p != policy_.p || a.policy().s != policy_.s)
        throw DomainError("operator: coefficient over a different coordinate system");
    if (cert_) {
        const int need = std::min(cert_->required_valuation(multi_degree(alpha, n_)), policy_.s);
        if (a.min_valuation() < need) throw DomainError("operator: coefficient violates the certificate");
    }
    inverted_ |= a.inverted_mask();
    if (a.is_zero())
        symbol_.erase(alpha);
    else
        symbol_[alpha] = a;
}

void DiffOperator::set_cert(const GrowthCert& c) {
    for (const auto& [alpha, a] : symbol_) {
        const int need = std::min(c.required_valuation(multi_degree(alpha, n_)), policy_.s);
        if (a.min_valuation() < need) throw DomainError("operator: certificate violated");
    }
    cert_ = c;
}

void DiffOperator::check_compatible(const DiffOperator& o) const {
    if (n_ != o.n_ || policy_.p != o.policy_.p || policy_.s != o.policy_.s)
        throw DomainError("operators on different coordinate systems");
}

DiffOperator DiffOperator::operator+(const DiffOperator& o) const {
    check_compatible(o);
    DiffOperator r(policy_, n_, std::max(A_, o.A_), inverted_ | o.inverted_);
    r.symbol_ = symbol_;
    for (const auto& [a, c] : o.symbol_) r.set_coefficient(a, r.coefficient(a) + c);
    return r;
}

DiffOperator DiffOperator::operator-(const DiffOperator& o) const {
    check_compatible(o);
    DiffOperator r(policy_, n_, std::max(A_, o.A_), inverted_ | o.inverted_);
    r.symbol_ = symbol_;
    for (const auto& [a, c] : o.symbol_) r.set_coefficient(a, r.coefficient(a) - c);
    return r;
}

bool DiffOperator::operator==(const DiffOperator& o) const {
    if (n_ != o.n_) return false;
    auto nonzero = [](const Symbol& s) {
        std::map<Exp, TruncSeries::TermMap> m;
        for (const auto& [a, c] : s)
            if (!c.is_zero()) m.emplace(a, c.terms());
        return m;
    };
    return nonzero(symbol_) == nonzero(o.symbol_);
}

std::string DiffOperator::to_string() const {
    if (symbol_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [a, c] : symbol_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string() << ")";
        if (multi_degree(a, n_) == 0) continue;
        os << "*D^(";
        for (int i = 0; i < n_; ++i) os << (i ? "," : "") << a[i];
        os << ")";
    }
    return os.str();
}

TruncSeries delta_apply(const Exp& alpha, const TruncSeries& f) {
    const int n = f.nvars();
    for (int i = n; i < kMaxVars; ++i)
        if (alpha[i] != 0) throw DomainError("delta_apply: derivative along a variable the series does not have");
    TruncSeries r(f.policy(), n, f.inverted_mask());
    const Zmod R = f.ring();
    for (const auto& [e, c] : f.terms()) {
        const std::uint64_t b = multi_binomial(R, e, alpha, n);
        if (b) r.add_term(exp_sub(e, alpha), R.mul(b, c));
    }
    if (f.uncertified()) r.mark_uncertified();
    return r;
}

TruncSeries apply(const DiffOperator& P, const TruncSeries& f) {
    if (f.nvars() != P.nvars() || f.policy().p != P.policy().p || f.policy().s != P.policy().s)
        throw DomainError("apply: coordinate mismatch");
    const PrecisionPolicy wide = unbounded(f.policy());
    TruncSeries g = recast(f, wide, f.nvars(), P.inverted_mask());
    TruncSeries acc(wide, f.nvars(), P.inverted_mask() | f.inverted_mask());
    for (const auto& [alpha, a] : P.symbol()) acc += recast(a, wide, f.nvars(), 0) * delta_apply(alpha, g);
    TruncSeries r = acc.rebound(f.policy().D, f.policy().E);
    if (f.uncertified()) r.mark_uncertified();
    return r;
}

DiffOperator extract_symbol(const MonomialMap& P, const PrecisionPolicy& policy, int n, int A, std::uint32_t mask) {
    return extract_impl(P, policy, n, A, mask, true);
}

DiffOperator extract_symbol_serial(const MonomialMap& P, const PrecisionPolicy& policy, int n, int A,
                                   std::uint32_t mask) {
    return extract_impl(P, policy, n, A, mask, false);
}

DiffOperator compose(const DiffOperator& P, const DiffOperator& Q) {
    if (P.nvars() != Q.nvars() || P.policy().p != Q.policy().p || P.policy().s != Q.policy().s)
        throw DomainError("compose: coordinate mismatch");
    const int A = std::max(P.order_bound(), Q.order_bound());
    const int ord = std::max(P.order(), 0) + std::max(Q.order(), 0);
    if (ord > A) throw DomainError("compose: order " + std::to_string(ord) + " exceeds the bound A = " + std::to_string(A));
    const PrecisionPolicy wide = unbounded(P.policy());
    const int n = P.nvars();
    const std::uint32_t mask = P.inverted_mask() | Q.inverted_mask();
    auto action = [&](const Exp& beta) {
        TruncSeries m = TruncSeries::monomial(wide, n, beta, 1, mask);
        return apply(P, apply(Q, m));
    };
    DiffOperator r = extract_symbol(action, P.policy(), n, ord, mask);
    DiffOperator out(P.policy(), n, A, mask);
    for (const auto& [a, c] : r.symbol()) out.set_coefficient(a, c);
    return out;
}

DiffOperator transpose(const DiffOperator& P) {
    const PrecisionPolicy wide = unbounded(P.policy());
    const int n = P.nvars();
    const int ord = std::max(P.order(), 0);
    auto action = [&](const Exp& beta) {
        TruncSeries m = TruncSeries::monomial(wide, n, beta, 1, P.inverted_mask());
        TruncSeries acc(wide, n, P.inverted_mask());
        for (const auto& [alpha, a] : P.symbol()) {
            TruncSeries t = delta_apply(alpha, recast(a, wide, n, 0) * m);
            acc += multi_degree(alpha, n) % 2 ? -t : t;
        }
        return acc;
    };
    DiffOperator r = extract_symbol(action, P.policy(), n, ord, P.inverted_mask());
    DiffOperator out(P.policy(), n, P.order_bound(), P.inverted_mask());
    for (const auto& [a, c] : r.symbol()) out.set_coefficient(a, c);
    return out;
}

std::vector<Exp> EchelonSymbol::digits(const Exp& beta) const {
    std::vector<Exp> out(h + 1, zero_exp());
    std::uint64_t ph = 1;
    for (int j = 0; j < h; ++j) ph *= p;
    for (int i = 0; i < n; ++i) {
        std::uint64_t b = static_cast<std::uint64_t>(beta[i]);
        out[h][i] = static_cast<int>(b / ph);
        b %= ph;
        for (int j = 0; j < h; ++j) {
            out[j][i] = static_cast<int>(b % p);
            b /= p;
        }
    }
    return out;
}

int echelon_shift(std::uint64_t p, int h, const Exp& beta, int n) {
    std::uint64_t ph = 1;
    for (int j = 0; j < h; ++j) ph *= p;
    std::int64_t v = 0;
    for (int i = 0; i < n; ++i) {
        std::uint64_t b = static_cast<std::uint64_t>(beta[i]);
        v -= val_factorial(p, b);
        v += static_cast<std::int64_t>(b / ph) * val_factorial(p, ph);
        b %= ph;
        std::uint64_t pj = 1;
        for (int j = 0; j < h; ++j) {
            v += static_cast<std::int64_t>(b % p) * val_factorial(p, pj);
            b /= p;
            pj *= p;
        }
    }
    return static_cast<int>(v);
}

namespace {

// Unit part of M_beta / beta! modulo p^s.
std::uint64_t echelon_unit(const Zmod& R, int h, const Exp& beta, int n) {
    auto fact_unit = [&](std::uint64_t m) {
        std::uint64_t u = 1;
        for (std::uint64_t k = 2; k <= m; ++k) {
            std::uint64_t x = k;
            while (x % R.p == 0) x /= R.p;
            u = R.mul(u, x % R.m);
        }
        return u;
    };
    std::uint64_t ph = 1;
    for (int j = 0; j < h; ++j) ph *= R.p;
    std::uint64_t num = 1, den = 1;
    for (int i = 0; i < n; ++i) {
        std::uint64_t b = static_cast<std::uint64_t>(beta[i]);
        den = R.mul(den, fact_unit(b));
        num = R.mul(num, R.pow(fact_unit(ph), b / ph));
        b %= ph;
        std::uint64_t pj = 1;
        for (int j = 0; j < h; ++j) {
            num = R.mul(num, R.pow(fact_unit(pj), b % R.p));
            b /= R.p;
            pj *= R.p;
        }
    }
    return R.mul(num, R.inv(den));
}

}  // namespace

EchelonSymbol echelon_rewrite(const DiffOperator& P, int h) {
    if (h < 0) throw DomainError("echelon must be >= 0");
    EchelonSymbol E;
    E.p = P.policy().p;
    E.s = P.policy().s;
    E.h = h;
    E.n = P.nvars();
    E.policy = P.policy();
    E.A = P.order_bound();
    const Zmod R = P.policy().ring();
    for (int j = 0; j <= h; ++j) {
        SplitInteger u = echelon_relation_constant(R, j);
        if (u.valuation != 1) throw DomainError("relation constant with valuation != 1");
        E.u.push_back(u);
    }
    for (const auto& [beta, a] : P.symbol()) {
        const int k = echelon_shift(E.p, h, beta, E.n);
        const std::uint64_t unit = echelon_unit(R, h, beta, E.n);
        TruncSeries b(P.policy(), E.n, a.inverted_mask());
        for (const auto& [e, c] : a.terms()) {
            std::uint64_t v = R.mul(c, unit);
            if (k < 0) {
                if (R.valuation(v) < -k)
                    throw PrecisionError("echelon rewrite: coefficient valuation below v_p(beta!) - v_p(M_beta)");
                v = R.divide_by_p_power(v, -k) % ipow(E.p, E.s + k);
            } else {
                v = R.mul(v, ipow(E.p, std::min(k, E.s)) % R.m);
            }
            b.add_term(e, v);
        }
        E.b.emplace(beta, b);
        E.shift.emplace(beta, k);
    }
    return E;
}

DiffOperator plain_symbol(const EchelonSymbol& E) {
    const Zmod R = E.policy.ring();
    DiffOperator P(E.policy, E.n, E.A);
    for (const auto& [beta, b] : E.b) {
        const int k = E.shift.at(beta);
        if (k > 0) throw DomainError("plain_symbol: positive shift cannot be undone");
        const std::uint64_t uinv = R.inv(echelon_unit(R, E.h, beta, E.n));
        TruncSeries a(E.policy, E.n, b.inverted_mask());
        const std::uint64_t pk = ipow(E.p, std::min(-k, E.s)) % R.m;
        for (const auto& [e, c] : b.terms()) a.add_term(e, R.mul(R.mul(c, pk), uinv));
        P.set_coefficient(beta, a);
    }
    return P;
}

Rational echelon_lambda(std::uint64_t p, int h) {
    const std::int64_t ph = static_cast<std::int64_t>(ipow(p, h));
    const std::int64_t pm = static_cast<std::int64_t>(p) - 1;
    return Rational(ph * pm - 1, pm * ph);
}

}  // namespace dagger
