#include <doctest.h>

#include <cmath>
#include <random>

#include "dagger/diff_ops.hpp"

using namespace dagger;

namespace {

Exp ex(int a, int b = 0) {
    Exp e = zero_exp();
    e[0] = a;
    e[1] = b;
    return e;
}

TruncSeries mono(const PrecisionPolicy& pol, int n, const Exp& e, std::uint64_t c = 1) {
    return TruncSeries::monomial(pol, n, e, c);
}

TruncSeries random_poly(std::mt19937_64& rng, const PrecisionPolicy& pol, int n, int deg, std::uint64_t scale = 1) {
    TruncSeries f(pol, n);
    const Zmod R = pol.ring();
    for (const auto& e : multi_indices(n, deg)) f.add_term(e, R.mul(rng() % R.m, scale % R.m));
    return f;
}

DiffOperator random_op(std::mt19937_64& rng, const PrecisionPolicy& pol, int n, int ord, int A, int deg) {
    DiffOperator P(pol, n, A);
    for (const auto& a : multi_indices(n, ord)) P.set_coefficient(a, random_poly(rng, pol, n, deg));
    return P;
}

}  // namespace

TEST_CASE("delta on monomials") {
    PrecisionPolicy pol(5, 4, 10, 2);
    CHECK(delta_apply(ex(1), mono(pol, 1, ex(2))) == mono(pol, 1, ex(1), 2));
    CHECK(delta_apply(ex(2), mono(pol, 1, ex(3))) == mono(pol, 1, ex(1), 3));
    CHECK(delta_apply(ex(3), mono(pol, 1, ex(2))).is_zero());
    CHECK(delta_apply(ex(1, 2), mono(pol, 2, ex(2, 1))).is_zero());
    // negative exponents in a localization: Delta x^-1 = -x^-2
    auto inv = TruncSeries::monomial(pol, 1, ex(-1), 1, 1u);
    CHECK(delta_apply(ex(1), inv) == TruncSeries::monomial(pol, 1, ex(-2), pol.ring().neg(1), 1u));
}

TEST_CASE("apply: identity, x*Delta and translation") {
    PrecisionPolicy pol(7, 5, 12, 0);
    auto f = mono(pol, 1, ex(5), 3) + mono(pol, 1, ex(1), 2);
    CHECK(apply(DiffOperator::identity(pol, 1, 3), f) == f);
    DiffOperator xD(pol, 1, 3);
    xD.set_coefficient(ex(1), TruncSeries::variable(pol, 1, 0));
    CHECK(apply(xD, mono(pol, 1, ex(2))) == mono(pol, 1, ex(2), 2));
    // theta_c = sum c^k Delta^k on x^3 against the expansion of (x+c)^3
    const std::int64_t c = 14;
    DiffOperator th(pol, 1, 3);
    for (int k = 0; k <= 3; ++k) th.set_coefficient(ex(k), TruncSeries::constant(pol, 1, static_cast<std::int64_t>(std::pow(c, k))));
    TruncSeries expect(pol, 1);
    const std::int64_t b3[] = {1, 3, 3, 1};
    for (int k = 0; k <= 3; ++k) expect.add_term(ex(3 - k), pol.ring().reduce(b3[k] * static_cast<std::int64_t>(std::pow(c, k))));
    CHECK(apply(th, mono(pol, 1, ex(3))) == expect);
}

TEST_CASE("symbol extraction") {
    PrecisionPolicy pol(5, 4, 12, 0);
    std::mt19937_64 rng(11);
    auto g = random_poly(rng, pol, 2, 2);
    auto mult = [&](const Exp& b) { return g * mono(pol, 2, b); };
    auto S = extract_symbol(mult, pol, 2, 3);
    CHECK(S == DiffOperator::multiplication(g, 3));
    auto d2 = [&](const Exp& b) { return delta_apply(ex(2), mono(pol, 1, b)); };
    CHECK(extract_symbol(d2, pol, 1, 4) == DiffOperator::delta(pol, 1, 4, ex(2)));
    // ring endomorphism x -> x + a: coefficients a^k
    auto a = mono(pol, 1, ex(2), 5) + mono(pol, 1, ex(0), 10);
    auto endo = [&](const Exp& b) { return mono(pol, 1, b).substitute({TruncSeries::variable(pol, 1, 0) + a}); };
    auto T = extract_symbol(endo, pol, 1, 5);
    for (int k = 0; k <= 5; ++k) CHECK(T.coefficient(ex(k)) == a.pow(k));
}

TEST_CASE("parallel and serial extraction agree") {
    PrecisionPolicy pol(7, 4, 10, 0);
    std::mt19937_64 rng(5);
    auto P = random_op(rng, pol, 2, 3, 3, 3);
    auto act = [&](const Exp& b) { return apply(P, mono(unbounded(pol), 2, b)); };
    auto a = extract_symbol(act, pol, 2, 3);
    auto b = extract_symbol_serial(act, pol, 2, 3);
    CHECK(a == b);
    CHECK(a == P);
}

TEST_CASE("composition") {
    PrecisionPolicy pol(5, 4, 8, 0);
    auto D = DiffOperator::delta(pol, 1, 2, ex(1));
    auto X = DiffOperator::multiplication(TruncSeries::variable(pol, 1, 0), 2);
    CHECK(compose(D, X) - compose(X, D) == DiffOperator::identity(pol, 1, 2));
    std::mt19937_64 rng(3);
    auto P = random_op(rng, pol, 2, 2, 4, 2);
    CHECK(compose(P, DiffOperator::identity(pol, 2, 4)) == P);
    for (int trial = 0; trial < 3; ++trial) {
        auto A1 = random_op(rng, pol, 2, 2, 4, 2);
        auto A2 = random_op(rng, pol, 2, 2, 4, 2);
        auto C = compose(A1, A2);
        for (const auto& b : multi_indices(2, 4)) {
            auto m = mono(pol, 2, b);
            CHECK(apply(C, m) == apply(A1, apply(A2, m)));
        }
    }
    auto big = DiffOperator::delta(pol, 1, 2, ex(2));
    CHECK_THROWS_AS(compose(big, big), DomainError);
}

TEST_CASE("transpose is an anti-involution") {
    PrecisionPolicy pol(7, 4, 30, 0);
    std::mt19937_64 rng(9);
    auto g = random_poly(rng, pol, 2, 3);
    CHECK(transpose(DiffOperator::multiplication(g, 2)) == DiffOperator::multiplication(g, 2));
    auto D = DiffOperator::delta(pol, 1, 2, ex(1));
    CHECK(transpose(D) == DiffOperator(pol, 1, 2) - D);
    for (int trial = 0; trial < 3; ++trial) {
        auto P = random_op(rng, pol, 2, 2, 4, 2);
        auto Q = random_op(rng, pol, 2, 2, 4, 2);
        CHECK(transpose(transpose(P)) == P);
        CHECK(transpose(compose(P, Q)) == compose(transpose(Q), transpose(P)));
    }
    // t g (1) for g = sum a^k Delta^k, by direct evaluation
    auto a = mono(pol, 1, ex(2), 7) + mono(pol, 1, ex(1), 14);
    DiffOperator G(pol, 1, 4);
    for (int k = 0; k <= 4; ++k) G.set_coefficient(ex(k), a.pow(k));
    TruncSeries direct(pol, 1);
    for (int k = 0; k <= 4; ++k) {
        auto t = delta_apply(ex(k), a.pow(k));
        direct += k % 2 ? -t : t;
    }
    CHECK(apply(transpose(G), TruncSeries::constant(pol, 1, 1)) == direct);
}

TEST_CASE("certificates are checked") {
    PrecisionPolicy pol(5, 4, 8, 0);
    DiffOperator P(pol, 1, 3);
    P.set_coefficient(ex(1), TruncSeries::constant(pol, 1, 5));
    P.set_coefficient(ex(2), TruncSeries::constant(pol, 1, 25));
    CHECK_NOTHROW(P.set_cert(GrowthCert{Rational(1), Rational(0)}));
    CHECK_THROWS_AS(P.set_coefficient(ex(3), TruncSeries::constant(pol, 1, 25)), DomainError);
    DiffOperator Q(pol, 1, 3);
    Q.set_coefficient(ex(2), TruncSeries::constant(pol, 1, 1));
    CHECK_THROWS_AS(Q.set_cert(GrowthCert{Rational(1), Rational(0)}), DomainError);
}

TEST_CASE("echelon relation constants and shifts") {
    CHECK(echelon_relation_constant_exact(2, 0) == std::optional<std::uint64_t>(2));
    CHECK(echelon_relation_constant_exact(2, 1) == std::optional<std::uint64_t>(6));
    Zmod R(5, 6);
    for (int j = 0; j < 3; ++j) CHECK(echelon_relation_constant(R, j).valuation == 1);
    CHECK(echelon_shift(5, 1, ex(7), 1) == 0);
    CHECK(echelon_shift(5, 0, ex(1), 1) == 0);
    // h = 0 divides by beta! outright
    CHECK(echelon_shift(5, 0, ex(7), 1) == -1);
    CHECK(echelon_shift(5, 1, ex(25), 1) == -1);  // q = 5
}

TEST_CASE("echelon rewrite") {
    PrecisionPolicy pol(5, 6, 20, 0);
    const Zmod R = pol.ring();
    DiffOperator P(pol, 1, 8);
    P.set_coefficient(ex(1), TruncSeries::constant(pol, 1, 3));
    P.set_coefficient(ex(7), TruncSeries::constant(pol, 1, 2));
    auto E = echelon_rewrite(P, 1);
    CHECK(E.b.at(ex(1)) == TruncSeries::constant(pol, 1, 3));
    // 5!/7! = 1/42
    CHECK(E.b.at(ex(7)).coeff(zero_exp()) == R.mul(2, R.inv(42)));
    auto dg = E.digits(ex(7));
    CHECK(dg[0][0] == 2);
    CHECK(dg[1][0] == 1);
    CHECK(plain_symbol(E) == P);
    DiffOperator U(pol, 1, 8);
    U.set_coefficient(ex(5), TruncSeries::constant(pol, 1, 1));
    CHECK_THROWS_AS(echelon_rewrite(U, 0), PrecisionError);
}

TEST_CASE("echelon coefficients of translation operators obey the lambda bound") {
    for (std::uint64_t p : {5, 7}) {
        PrecisionPolicy pol(p, 6, 40, 0);
        std::mt19937_64 rng(p);
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<TruncSeries> a{random_poly(rng, pol, 2, 2, p), random_poly(rng, pol, 2, 2, p)};
            DiffOperator G(pol, 2, 8);
            for (const auto& al : multi_indices(2, 8)) G.set_coefficient(al, a[0].pow(al[0]) * a[1].pow(al[1]));
            for (int h : {0, 1, 2}) {
                auto E = echelon_rewrite(G, h);
                const Rational lam = echelon_lambda(p, h);
                for (const auto& [beta, b] : E.b) {
                    if (b.is_zero()) continue;
                    const int need = static_cast<int>(std::ceil(boost::rational_cast<double>(lam * multi_degree(beta, 2)) - 1e-12));
                    CHECK(b.min_valuation() >= need);
                }
                CHECK(plain_symbol(E) == G);
            }
        }
    }
}
