#include "dagger/series.hpp"

#include <algorithm>
#include <sstream>

namespace dagger {

namespace {
constexpr int kHuge = 1 << 28;

std::int64_t ceil_rational(const Rational& r) {
    std::int64_t q = r.numerator() / r.denominator();
    if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
    return q;
}
}  // namespace

Exp zero_exp() {
    Exp e{};
    e.fill(0);
    return e;
}

Exp unit_exp(int i) {
    Exp e = zero_exp();
    e[i] = 1;
    return e;
}

Exp exp_add(const Exp& a, const Exp& b) {
    Exp r;
    for (int i = 0; i < kMaxVars; ++i) r[i] = a[i] + b[i];
    return r;
}

Exp exp_sub(const Exp& a, const Exp& b) {
    Exp r;
    for (int i = 0; i < kMaxVars; ++i) r[i] = a[i] - b[i];
    return r;
}

int GrowthCert::required_valuation(int degree) const {
    std::int64_t v = ceil_rational(lambda * Rational(degree) - c);
    return static_cast<int>(std::max<std::int64_t>(0, v));
}

GrowthCert combine_certs(const GrowthCert& a, const GrowthCert& b) {
    return GrowthCert{std::min(a.lambda, b.lambda), a.c + b.c};
}

PrecisionPolicy unbounded(const PrecisionPolicy& pol) {
    PrecisionPolicy r = pol;
    r.D = kHuge;
    r.E = kHuge;
    return r;
}

TruncSeries::TruncSeries(const PrecisionPolicy& policy, int nvars, std::uint32_t inverted_mask)
    : policy_(policy), ring_(policy.p, policy.s), nvars_(nvars), inverted_(inverted_mask) {
    if (nvars < 0 || nvars > kMaxVars) throw DomainError("unsupported number of variables");
}

TruncSeries TruncSeries::constant(const PrecisionPolicy& policy, int nvars, std::int64_t c, std::uint32_t mask) {
    TruncSeries r(policy, nvars, mask);
    r.add_term(zero_exp(), r.ring_.reduce(c));
    return r;
}

TruncSeries TruncSeries::monomial(const PrecisionPolicy& policy, int nvars, const Exp& e, std::uint64_t c,
                                  std::uint32_t mask) {
    TruncSeries r(policy, nvars, mask);
    r.add_term(e, c % r.ring_.m);
    return r;
}

TruncSeries TruncSeries::variable(const PrecisionPolicy& policy, int nvars, int i, std::uint32_t mask) {
    return monomial(policy, nvars, unit_exp(i), 1, mask);
}

std::uint64_t TruncSeries::coeff(const Exp& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0 : it->second;
}

PadicScalar TruncSeries::coefficient(const Exp& e) const {
    return PadicScalar::from_residue(policy_.p, policy_.s, coeff(e));
}

int TruncSeries::positive_degree(const Exp& e) {
    int d = 0;
    for (int x : e)
        if (x > 0) d += x;
    return d;
}

int TruncSeries::pole_order(const Exp& e) const {
    int pole = 0;
    for (int i = 0; i < nvars_; ++i)
        if (e[i] < 0) pole = std::max(pole, -e[i]);
    return pole;
}

bool TruncSeries::in_window(const Exp& e) const { return positive_degree(e) <= policy_.D && pole_order(e) <= policy_.E; }

bool TruncSeries::drop_is_certified(const Exp& e, std::uint64_t c) const {
    if (c == 0) return true;
    if (!cert_) return false;
    return cert_->required_valuation(positive_degree(e)) >= policy_.s;
}

void TruncSeries::add_term(const Exp& e, std::uint64_t c) {
    c %= ring_.m;
    if (c == 0) return;
    for (int i = nvars_; i < kMaxVars; ++i)
        if (e[i] != 0) throw DomainError("exponent on a nonexistent variable");
    for (int i = 0; i < nvars_; ++i)
        if (e[i] < 0 && !((inverted_ >> i) & 1)) throw DomainError("negative exponent on a non-inverted variable");
    if (!in_window(e)) {
        if (!drop_is_certified(e, c)) uncertified_ = true;
        return;
    }
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second = ring_.add(it->second, c);
        if (it->second == 0) terms_.erase(it);
    }
}

void TruncSeries::set_term(const Exp& e, std::uint64_t c) {
    terms_.erase(e);
    add_term(e, c);
}

void TruncSeries::set_cert(const GrowthCert& c) {
    for (const auto& [e, v] : terms_) {
        int need = c.required_valuation(positive_degree(e));
        if (ring_.valuation(v) < std::min(need, policy_.s))
            throw DomainError("growth certificate violated by a stored coefficient");
    }
    cert_ = c;
}

void TruncSeries::check_compatible(const TruncSeries& o) const {
    if (policy_.p != o.policy_.p || policy_.s != o.policy_.s) throw DomainError("series over different rings");
    if (nvars_ != o.nvars_) throw DomainError("series in different numbers of variables");
}

TruncSeries& TruncSeries::operator+=(const TruncSeries& o) {
    check_compatible(o);
    inverted_ |= o.inverted_;
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    uncertified_ = uncertified_ || o.uncertified_;
    if (cert_ && o.cert_)
        cert_ = GrowthCert{std::min(cert_->lambda, o.cert_->lambda), std::max(cert_->c, o.cert_->c)};
    else
        cert_.reset();
    return *this;
}

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
    TruncSeries r = *this;
    r += o;
    return r;
}

TruncSeries TruncSeries::operator-() const {
    TruncSeries r = *this;
    for (auto& [e, c] : r.terms_) c = ring_.neg(c);
    return r;
}

TruncSeries TruncSeries::operator-(const TruncSeries& o) const { return *this + (-o); }

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
    check_compatible(o);
    TruncSeries r(policy_, nvars_, inverted_ | o.inverted_);
    if (cert_ && o.cert_) r.cert_ = combine_certs(*cert_, *o.cert_);
    r.uncertified_ = uncertified_ || o.uncertified_;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) r.add_term(exp_add(e1, e2), ring_.mul(c1, c2));
    return r;
}

TruncSeries TruncSeries::scaled(std::uint64_t c) const {
    TruncSeries r(policy_, nvars_, inverted_);
    r.uncertified_ = uncertified_;
    for (const auto& [e, v] : terms_) r.add_term(e, ring_.mul(v, c % ring_.m));
    return r;
}

TruncSeries TruncSeries::pow(unsigned k) const {
    TruncSeries r = constant(policy_, nvars_, 1, inverted_);
    TruncSeries b = *this;
    while (k) {
        if (k & 1) r = r * b;
        k >>= 1;
        if (k) b = b * b;
    }
    return r;
}

TruncSeries TruncSeries::rebound(int D, int E) const {
    PrecisionPolicy pol = policy_;
    pol.D = D;
    pol.E = E;
    TruncSeries r(pol, nvars_, inverted_);
    r.cert_ = cert_;
    r.uncertified_ = uncertified_;
    for (const auto& [e, c] : terms_) r.add_term(e, c);
    return r;
}

TruncSeries TruncSeries::filtered(const std::function<bool(const Exp&)>& pred) const {
    TruncSeries r = *this;
    for (auto it = r.terms_.begin(); it != r.terms_.end();) {
        if (!pred(it->first))
            it = r.terms_.erase(it);
        else
            ++it;
    }
    return r;
}

TruncSeries TruncSeries::mod_p_power(int k) const {
    std::uint64_t m = ipow(policy_.p, std::min(k, policy_.s));
    TruncSeries r = *this;
    for (auto it = r.terms_.begin(); it != r.terms_.end();) {
        it->second %= m;
        if (it->second == 0)
            it = r.terms_.erase(it);
        else
            ++it;
    }
    return r;
}

int TruncSeries::min_valuation() const {
    int v = policy_.s;
    for (const auto& [e, c] : terms_) v = std::min(v, ring_.valuation(c));
    return v;
}

int TruncSeries::max_positive_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, positive_degree(e));
    return d;
}

TruncSeries TruncSeries::substitute(const std::vector<TruncSeries>& images) const {
    if (static_cast<int>(images.size()) != nvars_) throw DomainError("substitute: wrong number of images");
    std::vector<std::vector<TruncSeries>> powers(nvars_);
    TruncSeries one = constant(images.empty() ? policy_ : images[0].policy_, nvars_, 1);
    for (int i = 0; i < nvars_; ++i) powers[i].push_back(one);
    TruncSeries r(one.policy_, nvars_, 0);
    r.uncertified_ = uncertified_;
    for (const auto& [e, c] : terms_) {
        TruncSeries term = one.scaled(c);
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] < 0) throw DomainError("substitute: negative exponent");
            while (static_cast<int>(powers[i].size()) <= e[i]) powers[i].push_back(powers[i].back() * images[i]);
            if (e[i] > 0) term = term * powers[i][e[i]];
        }
        r += term;
    }
    return r;
}

std::string TruncSeries::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    static const char* defaults[kMaxVars] = {"x1", "x2", "x3", "x4", "x5", "x6"};
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c;
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            os << "*" << (i < static_cast<int>(names.size()) ? names[i] : std::string(defaults[i]));
            if (e[i] != 1) os << "^" << e[i];
        }
    }
    return os.str();
}

}  // namespace dagger
