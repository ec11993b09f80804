#pragma once

// Truncated multivariate Laurent polynomials over Z/p^s.

#include <array>
#include <boost/rational.hpp>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dagger/padic.hpp"

namespace dagger {

constexpr int kMaxVars = 6;
using Exp = std::array<int, kMaxVars>;
using Rational = boost::rational<std::int64_t>;

Exp zero_exp();
Exp unit_exp(int i);
Exp exp_add(const Exp& a, const Exp& b);
Exp exp_sub(const Exp& a, const Exp& b);

// Coefficients of total degree d satisfy v_p >= ceil(lambda*d - c).
struct GrowthCert {
    Rational lambda{1};
    Rational c{0};
    int required_valuation(int degree) const;
};

GrowthCert combine_certs(const GrowthCert& a, const GrowthCert& b);

class TruncSeries {
public:
    using TermMap = std::map<Exp, std::uint64_t>;

    TruncSeries() = default;
    TruncSeries(const PrecisionPolicy& policy, int nvars, std::uint32_t inverted_mask = 0);

    static TruncSeries constant(const PrecisionPolicy& policy, int nvars, std::int64_t c, std::uint32_t inverted_mask = 0);
    static TruncSeries monomial(const PrecisionPolicy& policy, int nvars, const Exp& e, std::uint64_t c,
                                std::uint32_t inverted_mask = 0);
    static TruncSeries variable(const PrecisionPolicy& policy, int nvars, int i, std::uint32_t inverted_mask = 0);

    const PrecisionPolicy& policy() const { return policy_; }
    Zmod ring() const { return ring_; }
    int nvars() const { return nvars_; }
    std::uint32_t inverted_mask() const { return inverted_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    std::uint64_t coeff(const Exp& e) const;
    PadicScalar coefficient(const Exp& e) const;
    // Adds c * x^e, dropping (and flagging) terms outside the window.
    void add_term(const Exp& e, std::uint64_t c);
    void set_term(const Exp& e, std::uint64_t c);

    // Sum of positive exponents.
    static int positive_degree(const Exp& e);
    int pole_order(const Exp& e) const;
    bool in_window(const Exp& e) const;

    bool uncertified() const { return uncertified_; }
    void mark_uncertified() { uncertified_ = true; }
    const std::optional<GrowthCert>& cert() const { return cert_; }
    // Throws DomainError if a stored coefficient violates the bound.
    void set_cert(const GrowthCert& c);
    void clear_cert() { cert_.reset(); }

    TruncSeries operator+(const TruncSeries& o) const;
    TruncSeries operator-(const TruncSeries& o) const;
    TruncSeries operator-() const;
    TruncSeries operator*(const TruncSeries& o) const;
    TruncSeries scaled(std::uint64_t c) const;
    TruncSeries& operator+=(const TruncSeries& o);
    TruncSeries pow(unsigned k) const;
    // Equality of the term maps (flags and certificates ignored).
    bool operator==(const TruncSeries& o) const { return terms_ == o.terms_; }
    bool operator!=(const TruncSeries& o) const { return !(*this == o); }

    // Same terms under different bounds (truncating with the usual flag rule).
    TruncSeries rebound(int D, int E) const;
    // Keep only terms satisfying pred; no flag.
    TruncSeries filtered(const std::function<bool(const Exp&)>& pred) const;
    // Reduces coefficients modulo p^k (k <= s).
    TruncSeries mod_p_power(int k) const;
    // Minimal coefficient valuation (s for zero).
    int min_valuation() const;
    int max_positive_degree() const;

    // Substitutes x_i -> images[i] in a polynomial (no negative exponents).
    TruncSeries substitute(const std::vector<TruncSeries>& images) const;

    std::string to_string(const std::vector<std::string>& names = {}) const;

private:
    void check_compatible(const TruncSeries& o) const;
    bool drop_is_certified(const Exp& e, std::uint64_t c) const;

    PrecisionPolicy policy_;
    Zmod ring_;
    int nvars_ = 0;
    std::uint32_t inverted_ = 0;
    TermMap terms_;
    std::optional<GrowthCert> cert_;
    bool uncertified_ = false;
};

// Policy with the same p, s and very large bounds, for exact intermediate products.
PrecisionPolicy unbounded(const PrecisionPolicy& pol);

}  // namespace dagger
