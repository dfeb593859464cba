#include "carleson/cone.hpp"
#include "carleson/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace carleson;

TEST_CASE("descriptors have the expected dimension and rank") {
    struct Row {
        ConeDescriptor c;
        std::size_t n, r;
    };
    for (const auto& row : {Row{ConeDescriptor::half_line(), 1, 1}, Row{ConeDescriptor::octant2(), 2, 2},
                            Row{ConeDescriptor::lorentz3(), 3, 2}, Row{ConeDescriptor::spherical3(), 3, 2}}) {
        CHECK(row.c.dim() == row.n);
        CHECK(row.c.rank() == row.r);
        CHECK(ConeDescriptor::of(parse_cone_kind(row.c.name())) == row.c);
    }
    CHECK_THROWS_AS(parse_cone_kind("cylinder"), DomainError);
}

TEST_CASE("determinants at reference points") {
    CHECK(det(ConeDescriptor::lorentz3(), {1.0, 0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(det(ConeDescriptor::spherical3(), {1.0, 1.0, 0.0}) == doctest::Approx(1.0));
    CHECK(det(ConeDescriptor::octant2(), {2.0, 3.0}) == doctest::Approx(6.0));
    CHECK(det(ConeDescriptor::half_line(), {2.5}) == doctest::Approx(2.5));
}

TEST_CASE("membership and order") {
    const auto L = ConeDescriptor::lorentz3();
    CHECK(precedes(L, {1.0, 0.0, 0.0}, {3.0, 1.0, 1.0}));
    CHECK_FALSE(precedes(L, {3.0, 1.0, 1.0}, {1.0, 0.0, 0.0}));
    for (const auto& c : {ConeDescriptor::half_line(), ConeDescriptor::octant2(), L, ConeDescriptor::spherical3()})
        CHECK_FALSE(precedes(c, c.base_point(), c.base_point()));
    CHECK_FALSE(contains(ConeDescriptor::half_line(), {-1.0}));
    CHECK_FALSE(contains(L, {1.0, 0.0, 1.0}));  // boundary
    CHECK_THROWS_AS(det(L, {1.0, 0.0}), DomainError);
}

TEST_CASE("the Lorentz to spherical map preserves determinant and boundary") {
    const auto L = ConeDescriptor::lorentz3(), S = ConeDescriptor::spherical3();
    CHECK(lorentz_to_spherical({1.0, 0.0, 0.0}) == ConePoint{1.0, 1.0, 0.0});
    CHECK(lorentz_to_spherical({1.0, 0.0, 1.0}) == ConePoint{1.0, 1.0, 1.0});
    CHECK(det(S, {1.0, 1.0, 1.0}) == doctest::Approx(0.0));
    CHECK(lorentz_to_spherical({0.0, 0.0, 0.0}) == ConePoint{0.0, 0.0, 0.0});
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const ConePoint y{u(rng), u(rng), u(rng)};
        CHECK(det(S, lorentz_to_spherical(y)) == doctest::Approx(det(L, y)));
        CHECK(contains(S, lorentz_to_spherical(y)) == contains(L, y));
        const ConePoint back = spherical_to_lorentz(lorentz_to_spherical(y));
        for (std::size_t k = 0; k < 3; ++k) CHECK(back[k] == doctest::Approx(y[k]));
    }
}

TEST_CASE("the boost maps the scaled base point to t") {
    const ConePoint t{2.0, 0.7, -0.9};
    const auto L = ConeDescriptor::lorentz3();
    const ConePoint v = apply(lorentz_boost_to(t), std::sqrt(det(L, t)) * L.base_point());
    for (std::size_t k = 0; k < 3; ++k) CHECK(v[k] == doctest::Approx(t[k]));
}

// Closed forms: Lorentz in polar fiber coordinates gives 2 pi Gamma(2 nu) / (2 nu - 1); the spherical
// cone is its image under a map of Jacobian 2 that carries the pairing with e to y1.
TEST_CASE("cone gamma against closed forms") {
    CHECK(gamma_cone(ConeDescriptor::half_line(), 2.0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(gamma_cone(ConeDescriptor::half_line(), 0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-7));
    CHECK(gamma_cone(ConeDescriptor::octant2(), 1.5) ==
          doctest::Approx(std::pow(std::tgamma(1.5), 2)).epsilon(1e-7));
    for (double nu : {2.0, 2.5}) {
        const double lorentz = 2.0 * std::numbers::pi * std::tgamma(2.0 * nu) / (2.0 * nu - 1.0);
        CHECK(gamma_cone(ConeDescriptor::lorentz3(), nu, 1e-8) == doctest::Approx(lorentz).epsilon(1e-6));
        CHECK(gamma_cone(ConeDescriptor::spherical3(), nu, 1e-8) == doctest::Approx(2.0 * lorentz).epsilon(1e-6));
    }
}

TEST_CASE("Laplace power integral scales as det(t)^-nu") {
    const auto O = ConeDescriptor::octant2();
    const double nu = 2.0, g = gamma_cone(O, nu);
    const ConePoint t{0.5, 3.0};
    CHECK(laplace_power_integral(O, t, nu - 1.0) * std::pow(det(O, t), nu) == doctest::Approx(g).epsilon(1e-7));
    CHECK_THROWS_AS(laplace_power_integral(O, {1.0, -1.0}, 0.5), DomainError);
}
