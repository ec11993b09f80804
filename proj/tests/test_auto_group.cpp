#include <doctest.h>

#include <random>

#include "dagger/auto_group.hpp"

using namespace dagger;

namespace {

Exp ex(int a, int b = 0) {
    Exp e = zero_exp();
    e[0] = a;
    e[1] = b;
    return e;
}

TruncSeries mono(const PrecisionPolicy& pol, int n, const Exp& e, std::int64_t c = 1) {
    return TruncSeries::monomial(pol, n, e, pol.ring().reduce(c));
}

GroupElement random_element(std::mt19937_64& rng, const PrecisionPolicy& pol, int n, int deg = 3) {
    std::vector<TruncSeries> a;
    const Zmod R = pol.ring();
    for (int i = 0; i < n; ++i) {
        TruncSeries f(pol, n);
        for (const auto& e : multi_indices(n, deg))
            if (rng() % 2) f.add_term(e, R.mul(pol.p, rng() % R.m));
        a.push_back(f);
    }
    return theta(pol, a);
}

}  // namespace

TEST_CASE("theta and delta") {
    PrecisionPolicy pol(5, 4, 6, 0);
    auto id = GroupElement::identity(pol, 1);
    CHECK(theta(pol, {TruncSeries(pol, 1)}) == id);
    auto g = theta(pol, {mono(pol, 1, ex(2), 5)});
    CHECK(g.act(TruncSeries::variable(pol, 1, 0)) == TruncSeries::variable(pol, 1, 0) + mono(pol, 1, ex(2), 5));
    // theta(c)(x^3) = (x + c)^3
    auto t = theta(pol, {TruncSeries::constant(pol, 1, 10)});
    CHECK(t.act(mono(pol, 1, ex(3))) ==
          mono(pol, 1, ex(3)) + mono(pol, 1, ex(2), 30) + mono(pol, 1, ex(1), 300) + TruncSeries::constant(pol, 1, 1000));
    auto px = theta(pol, {mono(pol, 1, ex(1), 5)});
    CHECK(delta(px)[0] == mono(unbounded(pol), 1, ex(1), 5));
    CHECK_THROWS_AS(theta(pol, {mono(pol, 1, ex(1), 1)}), DomainError);
}

TEST_CASE("theta and delta are inverse bijections on random inputs") {
    for (std::uint64_t p : {5, 7}) {
        PrecisionPolicy pol(p, 4, 5, 0);
        std::mt19937_64 rng(p * 3);
        for (int trial = 0; trial < 5; ++trial) {
            auto g = random_element(rng, pol, 2);
            CHECK(homomorphism_check(g, 4));
            // operator extracted from the substitution action has symbol a^alpha
            auto act = [&](const Exp& b) { return g.act(mono(unbounded(pol), 2, b)); };
            auto P = extract_symbol(act, unbounded(pol), 2, pol.s - 1);
            CHECK(theta_from_operator(P) == g);
        }
    }
}

TEST_CASE("group law") {
    PrecisionPolicy pol(5, 4, 6, 0);
    auto id = GroupElement::identity(pol, 1);
    auto g = theta(pol, {mono(pol, 1, ex(2), 5)});
    CHECK(group_mul(g, id) == g);
    CHECK(group_mul(id, g) == g);
    auto t1 = theta(pol, {TruncSeries::constant(pol, 1, 5)});
    auto t2 = theta(pol, {TruncSeries::constant(pol, 1, 15)});
    CHECK(group_mul(t1, t2) == theta(pol, {TruncSeries::constant(pol, 1, 20)}));
    // product acts as the composite substitution
    auto h = theta(pol, {mono(pol, 1, ex(1), 5)});
    auto gh = group_mul(g, h);
    for (int k = 0; k <= 5; ++k) {
        auto m = mono(unbounded(pol), 1, ex(k));
        CHECK(gh.act(m) == g.act(h.act(m)));
    }
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 5; ++trial) {
        auto a = random_element(rng, pol, 2), b = random_element(rng, pol, 2), c = random_element(rng, pol, 2);
        CHECK(group_mul(group_mul(a, b), c) == group_mul(a, group_mul(b, c)));
        auto ab = group_mul(a, b);
        for (const auto& e : multi_indices(2, 3)) {
            auto m = mono(unbounded(pol), 2, e);
            CHECK(ab.act(m) == a.act(b.act(m)));
        }
    }
}

TEST_CASE("inverses") {
    PrecisionPolicy pol(7, 5, 6, 0);
    auto id = GroupElement::identity(pol, 1);
    CHECK(group_inv(id) == id);
    auto t = theta(pol, {TruncSeries::constant(pol, 1, 14)});
    CHECK(group_inv(t) == theta(pol, {TruncSeries::constant(pol, 1, -14)}));
    auto g = theta(pol, {mono(pol, 1, ex(2), 7)});
    auto gi = group_inv(g);
    auto x = TruncSeries::variable(unbounded(pol), 1, 0);
    CHECK(gi.act(g.act(x)) == x);
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        auto r = random_element(rng, pol, 2);
        CHECK(group_mul(r, group_inv(r)) == GroupElement::identity(pol, 2));
    }
}

TEST_CASE("order bound") {
    PrecisionPolicy pol(5, 4, 4, 0);
    std::mt19937_64 rng(4);
    auto x = TruncSeries::variable(pol, 1, 0);
    CHECK(order_bound_check(theta(pol, {mono(pol, 1, ex(1), 5)}), 3, {x, x, x}, 4));
    CHECK(order_bound_check(GroupElement::identity(pol, 1), 4, {x, x, x, x}, 4));
    for (int trial = 0; trial < 3; ++trial) {
        auto g = random_element(rng, pol, 2);
        std::vector<TruncSeries> tests;
        for (int k = 0; k < 4; ++k) {
            TruncSeries f(pol, 2);
            for (const auto& e : multi_indices(2, 2)) f.add_term(e, rng() % 625);
            tests.push_back(f);
        }
        for (int sp = 1; sp <= 4; ++sp) CHECK(order_bound_check(g, sp, tests, 3));
    }
}

TEST_CASE("Jacobian identity") {
    PrecisionPolicy pol(5, 4, 6, 0);
    auto t = theta(pol, {TruncSeries::constant(pol, 1, 5)});
    auto Jt = jacobian_identity(t);
    CHECK(Jt.equal);
    CHECK(Jt.left == TruncSeries::constant(unbounded(pol), 1, 1));
    auto g = theta(pol, {mono(pol, 1, ex(2), 5)});
    auto J = jacobian_identity(g);
    auto expect = TruncSeries::constant(unbounded(pol), 1, 1) + mono(unbounded(pol), 1, ex(1), 10);
    CHECK(J.left == expect);
    CHECK(J.right == expect);
    std::mt19937_64 rng(8);
    for (std::uint64_t p : {5, 7}) {
        PrecisionPolicy q(p, 4, 6, 0);
        for (int trial = 0; trial < 4; ++trial) CHECK(jacobian_identity(random_element(rng, q, 2)).equal);
    }
}

TEST_CASE("log cocycle") {
    PrecisionPolicy pol(5, 5, 6, 0);
    CHECK(log_cocycle(GroupElement::identity(pol, 1)).value.is_zero());
    CHECK(log_cocycle(theta(pol, {TruncSeries::constant(pol, 1, 10)})).value.is_zero());
    auto g = theta(pol, {mono(pol, 1, ex(2), 5)});
    auto c = log_cocycle(g);
    CHECK(c.precision == 4);
    // evaluate at points against the scalar logarithm of 1 + 2 p x0
    const Zmod R(5, c.precision);
    for (std::int64_t x0 : {1, 2, 3, 7}) {
        std::uint64_t v = 0;
        for (const auto& [e, k] : c.value.terms()) v = R.add(v, R.mul(k % R.m, R.pow(x0, e[0])));
        CHECK(v == log1p(PadicScalar(5, 5, 10 * x0)).with_prec(c.precision).residue());
    }
    CHECK(cocycle_law_check(g, theta(pol, {mono(pol, 1, ex(1), 5)})));
    std::mt19937_64 rng(6);
    for (std::uint64_t p : {5, 7}) {
        PrecisionPolicy q(p, 4, 6, 0);
        for (int trial = 0; trial < 3; ++trial)
            CHECK(cocycle_law_check(random_element(rng, q, 2), random_element(rng, q, 2)));
    }
}

TEST_CASE("axis factorization") {
    PrecisionPolicy pol(5, 4, 6, 0);
    auto g1 = theta(pol, {mono(pol, 1, ex(2), 5)});
    auto f1 = axis_factorization(g1);
    REQUIRE(f1.size() == 1);
    CHECK(f1[0] == g1);
    auto id = GroupElement::identity(pol, 2);
    for (const auto& f : axis_factorization(id)) CHECK(f == id);
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 4; ++trial) {
        auto g = random_element(rng, pol, 2);
        auto fs = axis_factorization(g);
        CHECK(product(fs) == g);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (i != j) CHECK(fs[i].a()[j].is_zero());
    }
}
