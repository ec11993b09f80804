#include <doctest.h>

#include <chrono>

#include "dagger/ffield.hpp"
#include "dagger/frobenius_zeta.hpp"

using namespace dagger;

namespace {

VarietyPresentation elliptic() { return VarietyPresentation::hyperelliptic_patch({0, -1, 0, 1}); }
VarietyPresentation elliptic2() { return VarietyPresentation::hyperelliptic_patch({1, 1, 0, 1}); }

PadicNumber num(std::uint64_t p, std::int64_t x, int N = 1 << 20) { return PadicNumber::from_integer(p, x, N); }

}  // namespace

TEST_CASE("lift on the trivial families") {
    FrobeniusLift A(VarietyPresentation::affine_space(1), 5, 4);
    FormKey x{unit_exp(0), 0};
    CHECK(A.image(x) == Form{{FormKey{[] {
                                          Exp e = zero_exp();
                                          e[0] = 5;
                                          return e;
                                      }(),
                                      0},
                              1}});
    FrobeniusLift G(VarietyPresentation::torus(1), 7, 4);
    Exp tinv = zero_exp();
    tinv[1] = -1;
    const Form& img = G.image(FormKey{tinv, 0});
    REQUIRE(img.size() == 1);
    CHECK(img.begin()->first.e[1] == -7);
    CHECK(img.begin()->first.e[0] == 0);
    CHECK(img.begin()->second == 1);
    // sigma(dx/x) = p dx/x
    const Form& w = G.image(FormKey{tinv, 1});
    REQUIRE(w.size() == 1);
    CHECK(w.begin()->first.e[1] == -1);
    CHECK(w.begin()->second == 7);
    CHECK(G.check_relations());
}

TEST_CASE("lift satisfies the curve relation mod p^N") {
    for (std::uint64_t p : {5, 7}) {
        FrobeniusLift L(elliptic(), p, 3);
        CHECK(L.check_relations());
        CHECK(L.check_mod_p());
    }
    FrobeniusLift Lp(VarietyPresentation::punctured_line({0, 1, 3}), 5, 4);
    CHECK(Lp.check_relations());
    CHECK(Lp.check_mod_p());
}

TEST_CASE("sigma(y) agrees with the square-root formula at a point") {
    // y^2 = x^3 - x at x0 = 3 mod 7: f(3) = 24 = 3 mod 7, a square (5^2 = 25 = 4? use Hensel search)
    const std::uint64_t p = 7;
    const int N = 4;
    Zmod R(p, N);
    FrobeniusLift L(elliptic(), p, N);
    auto f = [&](std::uint64_t x) { return R.sub(R.mul(R.mul(x, x), x), x); };
    int checked = 0;
    for (std::uint64_t x0 = 2; x0 < 40 && checked < 3; ++x0) {
        const std::uint64_t fx = f(x0);
        if (fx % p == 0) continue;
        // find y0 with y0^2 = f(x0) mod p^N by lifting a square root mod p
        std::uint64_t y0 = 0;
        for (std::uint64_t c = 1; c < p; ++c)
            if (c * c % p == fx % p) y0 = c;
        if (!y0) continue;
        for (int it = 0; it < 6; ++it) y0 = R.sub(y0, R.mul(R.sub(R.mul(y0, y0), fx), R.inv(R.mul(2, y0))));
        REQUIRE(R.mul(y0, y0) == fx);
        // value of the series sigma(y) at (x0, y0)
        Exp ey = zero_exp();
        ey[1] = 1;
        std::uint64_t val = 0;
        const std::uint64_t yinv = R.inv(y0);
        for (const auto& [k, c] : L.image(FormKey{ey, 0})) {
            std::uint64_t t = R.mul(c, R.pow(x0, k.e[0]));
            t = R.mul(t, k.e[1] >= 0 ? R.pow(y0, k.e[1]) : R.pow(yinv, -k.e[1]));
            val = R.add(val, t);
        }
        // y0^p * sqrt(1 + (f(x0^p) - f(x0)^p) / f(x0)^p)
        const std::uint64_t fp = R.pow(fx, p);
        const std::uint64_t ratio = R.mul(R.sub(f(R.pow(x0, p)), fp), R.inv(fp));
        PadicScalar z(p, N, static_cast<std::int64_t>(ratio));
        const std::uint64_t expect = R.mul(R.pow(y0, p), R.add(1, sqrt1p(z).residue()));
        CHECK(val == expect);
        ++checked;
    }
    CHECK(checked == 3);
}

TEST_CASE("Berkowitz matches the 2x2 and 3x3 determinant expansions") {
    const std::uint64_t p = 5;
    PMatrix A{{num(p, 2), num(p, 3)}, {num(p, 7), num(p, -1)}};
    auto c = charpoly(A, p);
    REQUIRE(c.size() == 3);
    CHECK(c[2].equals(num(p, 1)));
    CHECK(c[1].equals(num(p, -1)));       // -trace
    CHECK(c[0].equals(num(p, -2 - 21)));  // det
    PMatrix B{{num(p, 1), num(p, 2), num(p, 0)}, {num(p, 3), num(p, 1), num(p, 4)}, {num(p, 5), num(p, 6), num(p, 2)}};
    auto d = charpoly(B, p);
    // det(B) = 1*(2-24) - 2*(6-20) + 0 = 6; trace 4; sum of principal 2-minors = (1-6) + (2-0) + (2-24) = -25
    CHECK(d[3].equals(num(p, 1)));
    CHECK(d[2].equals(num(p, -4)));
    CHECK(d[1].equals(num(p, -25)));
    CHECK(d[0].equals(num(p, -6)));
}

TEST_CASE("inverse and traces") {
    const std::uint64_t p = 7;
    PMatrix A{{num(p, 7, 6), num(p, 1, 6)}, {num(p, 2, 6), num(p, 3, 6)}};
    auto Ai = inverse(A, p);
    auto I = matmul(A, Ai);
    CHECK(I[0][0].equals(num(p, 1)));
    CHECK(I[0][1].is_zero());
    CHECK(I[1][0].is_zero());
    CHECK(I[1][1].equals(num(p, 1)));
    CHECK(trace(A, p).equals(num(p, 10)));
}

TEST_CASE("Newton power sums") {
    // (1 - 2t)(1 - 3t) = 1 - 5t + 6t^2: s_m = 2^m + 3^m
    auto s = power_sums({1, -5, 6}, 4);
    CHECK(s[0] == 5);
    CHECK(s[1] == 13);
    CHECK(s[2] == 35);
    CHECK(s[3] == 97);
}

TEST_CASE("precision requirement from Weil bounds") {
    // elliptic patch at 7: h1 = 5, largest bound is binom(5,5)*7^{5/2} -> 130, or the trace bounds
    CHECK(coefficient_bound(7, 1, 1, 5, 1) == 5 * 3);  // 5 * ceil(sqrt 7)
    CHECK(trace_bound(5, 1, 0, 1, 2) == 25);
    CHECK(required_precision(5, 1, {1, 0}, 4) == 5);  // 2 * 625 < 5^5
    CHECK(default_depth(7) == 4);
    CHECK(default_depth(11) == 3);
}

TEST_CASE("zeta of A^1 and G_m") {
    auto a = zeta(VarietyPresentation::affine_space(1), 5);
    CHECK(a.pass);
    CHECK(a.P[0] == std::vector<std::int64_t>{1, -5});
    CHECK(a.lefschetz_rounded == 5);
    auto g = zeta(VarietyPresentation::torus(1), 7);
    CHECK(g.pass);
    REQUIRE(g.frobenius.size() == 2);
    CHECK(g.frobenius[1].F[0][0].equals(num(7, 7)));
    CHECK(g.P[1] == std::vector<std::int64_t>{1, -1});
    CHECK(g.numerator == std::vector<std::int64_t>{1, -1});
    CHECK(g.denominator == std::vector<std::int64_t>{1, -7});
    CHECK(g.lefschetz_rounded == 6);
    CHECK(g.recovered[2] == 342);
}

TEST_CASE("zeta of the elliptic patch y^2 = x^3 - x at p = 7") {
    auto r = zeta(elliptic(), 7);
    CHECK(r.dims == std::vector<int>{1, 5});
    CHECK(r.recovered[0] == 4);
    CHECK(r.recovered[1] == 60);
    CHECK(r.lefschetz_rounded == 4);
    CHECK(r.weil_check == true);
    // 7 = 3 mod 4 is supersingular: P_1 = (1 + 7 t^2)(1 - t)^3
    CHECK(r.P[1] == std::vector<std::int64_t>{1, -3, 10, -22, 21, -7});
    CHECK(r.pass);
}

TEST_CASE("zeta of punctured lines and the second curve") {
    for (std::uint64_t p : {5, 7}) {
        auto r = zeta(VarietyPresentation::punctured_line({0, 1, 2}), p);
        CHECK(r.pass);
        CHECK(r.recovered[0] == BigInt(p - 3));
        auto e = zeta(elliptic2(), p);
        CHECK(e.pass);
        CHECK(e.weil_check == true);
    }
}

TEST_CASE("zeta of two-dimensional varieties") {
    auto g = zeta(VarietyPresentation::torus(2), 5);
    CHECK(g.dims == std::vector<int>{1, 2, 1});
    CHECK(g.pass);
    CHECK(g.recovered[1] == 24 * 24);
    auto a = zeta(VarietyPresentation::affine_space(2), 5);
    CHECK(a.pass);
    CHECK(a.recovered[0] == 25);
}

TEST_CASE("under-provisioned precision is refused") {
    ZetaOptions o;
    o.precision = 1;
    CHECK_THROWS_AS(zeta(elliptic(), 7, o), PrecisionError);
    o.precision = 8;
    auto r = zeta(elliptic(), 7, o);
    CHECK(r.pass);
    CHECK(!r.auto_sized);
}

TEST_CASE("Lefschetz number") {
    CHECK(lefschetz(VarietyPresentation::affine_space(1), 5).round_to_integer(100) == 5);
    CHECK(lefschetz(VarietyPresentation::torus(1), 7).round_to_integer(100) == 6);
}
