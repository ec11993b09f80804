#include <doctest.h>

#include "dagger/ffield.hpp"

using namespace dagger;

TEST_CASE("field construction") {
    for (auto [p, m] : std::vector<std::pair<std::uint64_t, int>>{{3, 1}, {5, 2}, {7, 3}, {3, 4}, {13, 2}}) {
        FiniteField K(p, m);
        CHECK(FiniteField::is_irreducible(K.modulus(), p));
        // generator has order q - 1
        std::uint32_t g = K.generator();
        std::uint32_t x = 1;
        std::uint32_t order = 0;
        do {
            x = K.mul(x, g);
            ++order;
        } while (x != 1);
        CHECK(order == K.q() - 1);
        // distributivity sample
        for (std::uint32_t a = 0; a < std::min<std::uint32_t>(K.q(), 40); ++a)
            for (std::uint32_t b = 0; b < std::min<std::uint32_t>(K.q(), 40); ++b)
                CHECK(K.mul(a, K.add(b, 1)) == K.add(K.mul(a, b), a));
    }
    CHECK(!FiniteField::is_irreducible({1, 0, 1}, 5));  // x^2 + 1 = (x-2)(x+2) mod 5
    CHECK(FiniteField::is_irreducible({2, 0, 1}, 5));
    CHECK(FiniteField(5, 3, 1).modulus() == FiniteField(5, 3, 1).modulus());
}

TEST_CASE("point counts on the listed examples") {
    CHECK(count_points(VarietyPresentation::affine_space(1), 5, 2) == 25);
    CHECK(count_points(VarietyPresentation::torus(1), 7, 1) == 6);
    auto E = VarietyPresentation::hyperelliptic_patch({0, -1, 0, 1});
    CHECK(count_points(E, 7, 1) == 4);
    CHECK(count_points(E, 7, 2) == 60);  // #E(F_49) = 64, minus infinity and the three 2-torsion points
    CHECK(count_points(VarietyPresentation::punctured_line({0, 1, 2}), 5, 2) == 22);
}

TEST_CASE("tuple enumeration matches the naive coordinate oracle") {
    std::vector<VarietyPresentation> vs{
        VarietyPresentation::affine_space(2),
        VarietyPresentation::torus(2),
        VarietyPresentation::punctured_line({0, 1, 4}),
        VarietyPresentation::hyperelliptic_patch({0, -1, 0, 1}),
        VarietyPresentation::hyperelliptic_patch({1, 1, 0, 1}),
        VarietyPresentation::product(VarietyPresentation::torus(1), VarietyPresentation::affine_space(1)),
    };
    for (const auto& V : vs) {
        for (std::uint64_t p : {3ull, 5ull}) {
            for (int m = 1; m <= 2; ++m) {
                if (V.nvars() >= 4 && (p > 3 || m > 1)) continue;
                auto naive = count_points_naive(V, p, m);
                CHECK(count_points(V, p, m) == naive);
                CHECK(count_points_serial(V, p, m) == naive);
            }
        }
    }
}

TEST_CASE("product with the affine line multiplies by q") {
    for (const auto& X : {VarietyPresentation::torus(1), VarietyPresentation::punctured_line({0, 3}),
                          VarietyPresentation::hyperelliptic_patch({1, 1, 0, 1})}) {
        auto XA = VarietyPresentation::product(X, VarietyPresentation::affine_space(1));
        for (int m = 1; m <= 3; ++m) CHECK(count_points(XA, 7, m) == ipow(7, m) * count_points(X, 7, m));
    }
}

TEST_CASE("size guard") {
    CHECK_THROWS_AS(count_points(VarietyPresentation::affine_space(2), 13, 4), DomainError);
}
