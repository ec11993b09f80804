#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "dagger/linalg.hpp"

using namespace dagger;

namespace {

using Vec = std::vector<std::uint64_t>;

std::set<Vec> brute_span(const Matrix& m, const Zmod& R, std::size_t ncols) {
    std::set<Vec> span;
    const std::size_t nr = m.size();
    std::vector<std::uint64_t> coef(nr, 0);
    for (;;) {
        Vec v(ncols, 0);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < ncols; ++j) v[j] = R.add(v[j], R.mul(coef[i], m[i][j]));
        span.insert(v);
        std::size_t k = 0;
        while (k < nr && ++coef[k] == R.m) coef[k++] = 0;
        if (k == nr) break;
    }
    return span;
}

Matrix random_matrix(std::mt19937_64& rng, const Zmod& R, std::size_t nr, std::size_t nc) {
    Matrix m(nr, Vec(nc));
    for (auto& row : m)
        for (auto& x : row) {
            // bias toward non-units so valuations vary
            x = rng() % R.m;
            if (rng() % 2) x = R.mul(x, R.p);
        }
    return m;
}

}  // namespace

TEST_CASE("Howell row module equals brute-force span") {
    std::mt19937_64 rng(2024);
    const std::vector<std::pair<std::uint64_t, int>> rings{{3, 1}, {3, 2}, {3, 3}, {5, 1}, {5, 2}, {5, 3}, {7, 2}, {11, 2}};
    int cases = 0;
    for (auto [p, s] : rings) {
        Zmod R(p, s);
        for (int it = 0; it < 15; ++it) {
            std::size_t nr = R.m <= 27 ? 3 : 2;
            std::size_t nc = 1 + rng() % 3;
            Matrix m = random_matrix(rng, R, nr, nc);
            HowellForm H(m, R);
            auto span = brute_span(m, R, nc);
            auto hspan = brute_span(H.rows().empty() ? Matrix{Vec(nc, 0)} : H.rows(), R, nc);
            CHECK(span == hspan);
            CHECK(std::lround(std::log(static_cast<double>(span.size())) / std::log(static_cast<double>(p))) ==
                  H.length());
            // membership on random vectors
            for (int k = 0; k < 20; ++k) {
                Vec v(nc);
                for (auto& x : v) x = rng() % R.m;
                if (k % 2) v = *std::next(span.begin(), rng() % span.size());
                CHECK(H.contains(v) == (span.count(v) == 1));
            }
            // canonical: invariant under invertible row operations
            Matrix m2 = m;
            if (m2.size() >= 2) {
                std::uint64_t f = rng() % R.m;
                for (std::size_t j = 0; j < nc; ++j) m2[0][j] = R.add(m2[0][j], R.mul(f, m2[1][j]));
                std::swap(m2[0], m2[1]);
            }
            CHECK(HowellForm(m2, R) == H);
            CHECK(HowellForm(m, R, false) == H);
            ++cases;
        }
    }
    CHECK(cases >= 100);
}

TEST_CASE("Howell example with a non-unit pivot needs the annihilator row") {
    Zmod R(3, 2);
    // row (3, 1): its multiple 3*(3,1) = (0,3) must appear in the form
    HowellForm H({{3, 1}}, R);
    CHECK(H.rows().size() == 2);
    CHECK(H.contains({0, 3}));
    CHECK(!H.contains({0, 1}));
    CHECK(H.length() == 2);  // the span is {c*(3,1)}, 9 elements
}

TEST_CASE("left kernel") {
    Zmod R(5, 2);
    Matrix m{{1, 2}, {2, 4}, {0, 5}};
    HowellForm K = left_kernel(m, R);
    // (2, -1, 0) and (0, 5, 0) and (0,0,5) ... every kernel vector annihilates m
    for (const auto& v : K.rows()) {
        for (std::size_t j = 0; j < 2; ++j) {
            std::uint64_t s = 0;
            for (std::size_t i = 0; i < 3; ++i) s = R.add(s, R.mul(v[i], m[i][j]));
            CHECK(s == 0);
        }
    }
    CHECK(K.contains({2, R.neg(1), 0}));
    CHECK(K.contains({0, 0, 5}));
    CHECK(!K.contains({0, 0, 1}));
}

TEST_CASE("parallel elimination agrees with the serial reference") {
    std::mt19937_64 rng(8);
    Zmod R(7, 5);
    Matrix a = random_matrix(rng, R, 200, 64);
    Matrix b = a;
    std::vector<std::size_t> targets;
    std::vector<std::uint64_t> factors;
    for (std::size_t i = 1; i < 200; ++i) {
        targets.push_back(i);
        factors.push_back(rng() % R.m);
    }
    eliminate_rows(a, targets, factors, a[0], R);
    eliminate_rows_serial(b, targets, factors, b[0], R);
    CHECK(a == b);
}

TEST_CASE("PadicEchelon reduction and relations") {
    const std::uint64_t p = 5;
    const int N = 6;
    auto num = [&](std::int64_t x) { return PadicNumber::from_integer(p, x, N); };
    PadicEchelon E(p);
    // columns 0,1,2; rows r0 = (5, 1, 0), r1 = (1, 0, 1), r2 = r0 + 2 r1
    CHECK(E.add_row({{0, num(5)}, {1, num(1)}}, 0));
    CHECK(E.add_row({{0, num(1)}, {2, num(1)}}, 1));
    CHECK(!E.add_row({{0, num(7)}, {1, num(1)}, {2, num(2)}}, 2));
    REQUIRE(E.relations().size() == 1);
    const auto& rel = E.relations()[0];
    CHECK(rel.at(2).equals(num(1)));
    CHECK(rel.at(0).equals(num(-1)));
    CHECK(rel.at(1).equals(num(-2)));
    // reduce (0, 0, 1) = r1/... : (0,0,1) = r1 - (1,0,0); (1,0,0) is not in the span alone
    auto red = E.reduce({{2, num(1)}});
    CHECK(red.remainder.at(2).equals(num(1)));
    auto red2 = E.reduce({{0, num(1)}});
    // (1,0,0) - 1*r1 = (0,0,-1); column 1 has pivot r0' so nothing else to do
    CHECK(red2.remainder.at(2).equals(num(-1)));
    CHECK(red2.combination.at(1).equals(num(1)));
}

TEST_CASE("PadicEchelon tracks precision loss through divisions") {
    const std::uint64_t p = 5;
    const int N = 6;
    PadicEchelon E(p);
    // d(x^5) = 5 x^4 : pivot of valuation 1
    E.add_row({{0, PadicNumber::from_integer(p, 5, N)}, {1, PadicNumber::from_integer(p, 1, N)}}, 0);
    auto red = E.reduce({{0, PadicNumber::from_integer(p, 1, N)}});
    // x^4 = d(x^5)/5 - x^... remainder column 1 gets -1/5
    CHECK(red.remainder.at(1).valuation() == -1);
    CHECK(red.remainder.at(1).absprec() == N - 1 - 1);
}
