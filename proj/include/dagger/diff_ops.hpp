#pragma once

// Differential operators sum_alpha a_alpha Delta^alpha on free coordinates x_1..x_n,
// where Delta^alpha x^beta = C(beta, alpha) x^(beta - alpha).

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dagger/series.hpp"

namespace dagger {

class DiffOperator {
public:
    using Symbol = std::map<Exp, TruncSeries>;

    DiffOperator() = default;
    // A bounds the order |alpha| of stored terms.
    DiffOperator(const PrecisionPolicy& policy, int nvars, int A, std::uint32_t inverted_mask = 0);

    static DiffOperator identity(const PrecisionPolicy& policy, int nvars, int A);
    static DiffOperator multiplication(const TruncSeries& g, int A);
    static DiffOperator delta(const PrecisionPolicy& policy, int nvars, int A, const Exp& alpha);

    const PrecisionPolicy& policy() const { return policy_; }
    int nvars() const { return n_; }
    int order_bound() const { return A_; }
    std::uint32_t inverted_mask() const { return inverted_; }
    const Symbol& symbol() const { return symbol_; }
    // Largest |alpha| with a nonzero coefficient (-1 for the zero operator).
    int order() const;

    TruncSeries coefficient(const Exp& alpha) const;
    // Stores a_alpha (zero erases); DomainError when |alpha| > A or alpha has negative entries.
    void set_coefficient(const Exp& alpha, const TruncSeries& a);

    const std::optional<GrowthCert>& cert() const { return cert_; }
    // v_p(a_alpha) >= ceil(lambda |alpha| - c) on every stored coefficient; DomainError otherwise.
    void set_cert(const GrowthCert& c);

    DiffOperator operator+(const DiffOperator& o) const;
    DiffOperator operator-(const DiffOperator& o) const;
    bool operator==(const DiffOperator& o) const;
    bool operator!=(const DiffOperator& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    void check_compatible(const DiffOperator& o) const;

    PrecisionPolicy policy_;
    int n_ = 0;
    int A_ = 0;
    std::uint32_t inverted_ = 0;
    Symbol symbol_;
    std::optional<GrowthCert> cert_;
};

int multi_degree(const Exp& alpha, int n);
// All alpha in N^n with |alpha| <= A, graded.
std::vector<Exp> multi_indices(int n, int A);

TruncSeries delta_apply(const Exp& alpha, const TruncSeries& f);
// Result carries f's policy.
TruncSeries apply(const DiffOperator& P, const TruncSeries& f);

// A linear map given by its values on monomials; must be safe to call concurrently.
using MonomialMap = std::function<TruncSeries(const Exp&)>;

// a_alpha = sum_{beta <= alpha} C(alpha, beta) (-x)^beta P(x^(alpha - beta)), |alpha| <= A.
DiffOperator extract_symbol(const MonomialMap& P, const PrecisionPolicy& policy, int n, int A,
                            std::uint32_t inverted_mask = 0);
DiffOperator extract_symbol_serial(const MonomialMap& P, const PrecisionPolicy& policy, int n, int A,
                                   std::uint32_t inverted_mask = 0);

// P o Q; DomainError when order(P) + order(Q) exceeds the order bound.
DiffOperator compose(const DiffOperator& P, const DiffOperator& Q);
// sum (-1)^|alpha| Delta^alpha o a_alpha, rewritten with coefficients on the left.
DiffOperator transpose(const DiffOperator& P);

// Coefficients b_beta = a_beta * M_beta / beta!, M_beta = prod_j ((p^j)!)^{|a_{beta,j}|} * ((p^h)!)^{|q_beta|},
// where beta_i = q_i p^h + sum_{j<h} a_{i,j} p^j.
struct EchelonSymbol {
    std::uint64_t p = 0;
    int s = 0;
    int h = 0;
    int n = 0;
    std::map<Exp, TruncSeries> b;
    std::map<Exp, int> shift;        // v_p(M_beta) - v_p(beta!) for every stored beta
    std::vector<SplitInteger> u;     // u_0..u_h
    PrecisionPolicy policy;
    int A = 0;

    // beta^0..beta^(h-1) digit vectors followed by the quotient beta^h.
    std::vector<Exp> digits(const Exp& beta) const;
};

int echelon_shift(std::uint64_t p, int h, const Exp& beta, int n);
EchelonSymbol echelon_rewrite(const DiffOperator& P, int h);
DiffOperator plain_symbol(const EchelonSymbol& E);
// (p^h (p-1) - 1) / ((p-1) p^h).
Rational echelon_lambda(std::uint64_t p, int h);

}  // namespace dagger
