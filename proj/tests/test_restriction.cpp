#include "carleson/errors.hpp"
#include "carleson/restriction.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace carleson;
using namespace carleson::restriction;
constexpr double kPi = std::numbers::pi;

namespace {

SpectralFunction halfline_power(int k) {
    return make_spectral(ConeDescriptor::half_line(),
                         [k](const ConePoint& t) { return Complex(std::pow(t[0], k) * std::exp(-t[0])); },
                         DecayTag::exponential(1.0));
}

SpectralFunction octant_power(double k) {
    return make_spectral(ConeDescriptor::octant2(),
                         [k](const ConePoint& t) { return Complex(std::pow(t[0] * t[1], k) * std::exp(-t[0] - t[1])); },
                         DecayTag::exponential(1.0));
}

}  // namespace

TEST_CASE("half-disc moments") {
    CHECK(half_disc_moment(1.0, 0) == doctest::Approx(1.0));
    CHECK(half_disc_moment(1.0, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(half_disc_moment(1.0, 2) == doctest::Approx(8.0 / 15.0));
    CHECK(moment_constant(0) == doctest::Approx(1.0));
    CHECK(moment_constant(1) == doctest::Approx(2.0 / 3.0));
    for (int k = 0; k <= 5; ++k)
        for (double a : {0.5, 2.0}) {
            // binomial expansion of (a - x^2)^k integrated termwise
            double s = 0.0;
            for (int j = 0; j <= k; ++j)
                s += std::tgamma(k + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(k - j + 1.0)) * std::pow(-1.0, j) *
                     std::pow(a, k - j) * std::pow(a, j + 0.5) / (2 * j + 1);
            CHECK(half_disc_moment(a, k) == doctest::Approx(s).epsilon(1e-12));
        }
    CHECK_THROWS_AS(half_disc_moment(-1.0, 1), DomainError);
}

TEST_CASE("disc moments are pi t1^{2k+2} / (k+1)") {
    for (int k = 0; k <= 3; ++k) CHECK(disc_moment(1.5, k) == doctest::Approx(kPi * std::pow(1.5, 2 * k + 2) / (k + 1)));
}

TEST_CASE("fiber integral of a polynomial over the Lorentz disc") {
    const auto L = ConeDescriptor::lorentz3();
    Density f = [](const ConePoint& t) { return Complex(t[1] * t[1]); };
    // integral of r^2 cos^2 over the disc of radius 2: pi 2^4 / 4
    CHECK(std::abs(fiber_integral(L, f, 0, {2.0}) - 4.0 * kPi) < 1e-9);
}

TEST_CASE("restriction of box^m inverts extension") {
    for (int m = 0; m <= 2; ++m) {
        CHECK(round_trip_error(ConeDescriptor::lorentz3(), m, halfline_power(2 * m + 2)) < 1e-5);
        CHECK(round_trip_error(ConeDescriptor::spherical3(), m, octant_power(m + 1.0)) < 1e-5);
    }
}

TEST_CASE("restricting zero gives zero") {
    SamplingOptions small;
    small.nodes_per_axis = 32;
    const auto z = make_spectral(ConeDescriptor::lorentz3(), [](const ConePoint&) { return Complex{}; },
                                 DecayTag::compact(4.0), small);
    const auto g = restrict_lorentz({ConeDescriptor::lorentz3(), 0, z});
    for (const auto& v : g.values()) CHECK(v == Complex{});
}

TEST_CASE("extension ratio is the same for every g and matches the closed form") {
    std::vector<SpectralFunction> fam{halfline_power(2), halfline_power(3), halfline_power(5)};
    const auto e = verify_extension_identity(ConeDescriptor::lorentz3(), 0, fam);
    CHECK(e.record.relative_spread < 1e-3);
    CHECK(e.record.derived_value == doctest::Approx(extension_ratio(ConeDescriptor::lorentz3(), 0)).epsilon(1e-3));
    CHECK(extension_ratio(ConeDescriptor::lorentz3(), 0) == doctest::Approx(16.0 * kPi));
    REQUIRE(e.record.paper_value);
}

TEST_CASE("restriction inequality on the Lorentz cone with a skipped zero entry") {
    const auto L = ConeDescriptor::lorentz3();
    std::vector<SpectralFunction> fam;
    fam.push_back(make_spectral(L, [](const ConePoint& t) { return Complex(std::exp(-t[0])); }, DecayTag::exponential(1)));
    fam.push_back(SpectralFunction::zero(L, fam[0].grid()));
    const auto r = verify_restriction_inequality(L, 0, fam);
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[1].skipped);
    CHECK(r.holds);
    CHECK(r.max_ratio <= r.bound * (1 + 1e-9));
}

TEST_CASE("point mass box supremum on the half-plane") {
    // (alpha + 1) / |I|^{alpha+2}, approached as |I| decreases to the height
    CHECK(point_mass_box_sup(1.0, 0.0) == doctest::Approx(1.0));
    CHECK(point_mass_box_sup(2.0, 1.0) == doctest::Approx(0.25));
}
