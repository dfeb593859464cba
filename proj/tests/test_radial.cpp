#include "carleson/errors.hpp"
#include "carleson/radial.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace carleson;
using namespace carleson::radial;

namespace {

RadialDensity chi01() { return RadialDensity::indicator_below(ConeDescriptor::half_line(), {1.0}, "chi"); }
RadialDensity one_h() {
    return {ConeDescriptor::half_line(), [](const ConePoint&) { return 1.0; }, SupportTag::Unbounded, {}, "one"};
}

// midpoint count of {y < t, y < e} in the Lorentz cone on an n^3 grid
double lorentz_mass_oracle(const ConePoint& t, int n) {
    const auto L = ConeDescriptor::lorentz3();
    const double h = t[0] / n;
    double count = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < 2 * n; ++b)
            for (int c = 0; c < 2 * n; ++c) {
                const ConePoint y{(a + 0.5) * h, -t[0] + (b + 0.5) * h, -t[0] + (c + 0.5) * h};
                if (contains(L, y) && precedes(L, y, t) && precedes(L, y, {1.0, 0.0, 0.0})) ++count;
            }
    return count * h * h * h;
}

}  // namespace

TEST_CASE("multiplier of chi(0,1) is (1 - e^{-2t}) / 2t") {
    for (double t : {0.01, 0.5, 3.0})
        CHECK(multiplier(chi01(), {t}) == doctest::Approx((1 - std::exp(-2 * t)) / (2 * t)).epsilon(1e-8));
    const auto c = multiplier_sup(chi01());
    CHECK_FALSE(c.infinite);
    CHECK(c.sup_value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(multiplier_sup(one_h()).infinite);
}

TEST_CASE("radial integral by exhaustion") {
    CHECK(radial_integral(chi01()).sup_value == doctest::Approx(1.0));
    CHECK(radial_integral(one_h()).infinite);
}

TEST_CASE("necessary ratio of chi(0,1) at alpha = 1 is t ln(1 + 1/t)") {
    for (double t : {0.1, 1.0, 20.0})
        CHECK(necessary_ratio(chi01(), 1.0, {t}) == doctest::Approx(t * std::log1p(1.0 / t)).epsilon(1e-8));
    const auto c = necessary_sup(chi01(), 1.0);
    CHECK(c.sup_value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(c.witness[0] > 100.0);
    CHECK(necessary_sup(one_h(), 1.0).infinite);
    CHECK_THROWS_AS(necessary_sup(chi01(), 0.4), DomainError);
}

TEST_CASE("mass below t for unordered Lorentz order intervals") {
    const auto d = RadialDensity::indicator_below(ConeDescriptor::lorentz3(), {1.0, 0.0, 0.0});
    for (const ConePoint t : {ConePoint{1.0, 0.5, 0.0}, ConePoint{2.0, 1.5, 0.3}})
        CHECK(mass_below(d, t) == doctest::Approx(lorentz_mass_oracle(t, 120)).epsilon(2e-2));
    // ordered cases reduce to the smaller interval: volume of {y < t} is (pi/12) det(t)^{3/2}
    CHECK(mass_below(d, {0.5, 0.1, 0.0}) == doctest::Approx(std::numbers::pi / 12 * std::pow(0.24, 1.5)).epsilon(1e-7));
    CHECK(mass_below(d, {3.0, 0.5, 0.0}) == doctest::Approx(std::numbers::pi / 12).epsilon(1e-7));
}

TEST_CASE("chain check of the necessary inequality") {
    const auto d = chi01();
    const auto n = necessary_sup(d, 1.0);
    const auto pts = chain_check(d, 1.0, n.sup_value);
    REQUIRE_FALSE(pts.empty());
    for (const auto& p : pts) CHECK(p.holds);
    CHECK(chain_constant(ConeDescriptor::half_line(), 1.0) == doctest::Approx(2.0));
}

TEST_CASE("octant density depending only on y1 is not integrable") {
    const RadialDensity d{ConeDescriptor::octant2(), [](const ConePoint& y) { return std::exp(-y[0]); },
                          SupportTag::Unbounded, {}, "e1"};
    CHECK(radial_integral(d).infinite);
    CHECK(necessary_sup(d, 1.0).infinite);
}
