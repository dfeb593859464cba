#include "carleson/errors.hpp"
#include "carleson/kernels/fourier_sums.hpp"
#include "carleson/numerics/cone_quadrature.hpp"
#include "carleson/numerics/fourier.hpp"
#include "carleson/numerics/gauss_legendre.hpp"
#include "carleson/numerics/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace carleson;
using numerics::QuadratureSpec;
using Cx = std::complex<double>;

TEST_CASE("Gauss-Legendre rules are exact to degree 2n-1") {
    for (int n : {1, 2, 5, 16, 48}) {
        const auto& g = numerics::gauss_legendre(n);
        REQUIRE(g.nodes.size() == std::size_t(n));
        for (int deg = 0; deg <= 2 * n - 1; deg += std::max(1, n / 3)) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += g.weights[k] * std::pow(g.nodes[k], deg);
            const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-13));
        }
    }
    CHECK(&numerics::gauss_legendre(7) == &numerics::gauss_legendre(7));
}

TEST_CASE("adaptive integration of closed forms") {
    QuadratureSpec spec;
    spec.tolerance = 1e-12;
    CHECK(numerics::integrate([](double x) { return x * x; }, 0.0, 1.0, spec).value == doctest::Approx(1.0 / 3.0));
    CHECK(numerics::integrate([](double x) { return std::pow(1 - x * x, 2); }, 0.0, 1.0, spec).value ==
          doctest::Approx(8.0 / 15.0));
    auto r = numerics::integrate_to_infinity([](double y) { return std::exp(-y) * y; }, 0.0, spec);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 1.0) < 1e-8);
    // endpoint singularity: integral of x^{-1/2} over (0,1) is 2
    CHECK(numerics::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, spec.scaled(1e4)).value ==
          doctest::Approx(2.0).epsilon(1e-6));
    CHECK(numerics::integrate_periodic([](double t) { return std::exp(std::cos(t)); }, 2 * std::numbers::pi, spec).value ==
          doctest::Approx(2 * std::numbers::pi * std::cyl_bessel_i(0.0, 1.0)));
    CHECK(numerics::integrate_real_line([](double x) { return 1.0 / (1.0 + x * x); }, 0.3, spec).value ==
          doctest::Approx(std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("divergent half-line integrals are flagged") {
    QuadratureSpec spec;
    CHECK_THROWS_AS(numerics::integrate_to_infinity([](double y) { return 1.0 / (1.0 + y); }, 0.0, spec), DivergenceError);
    CHECK_THROWS_AS(numerics::integrate([](double x) { return x; }, 1.0, 0.0, spec), DomainError);
}

TEST_CASE("cone quadrature of exponentials and order intervals") {
    QuadratureSpec spec;
    spec.tolerance = 1e-9;
    const auto L = ConeDescriptor::lorentz3(), O = ConeDescriptor::octant2(), S = ConeDescriptor::spherical3();
    auto one = [](const ConePoint&) { return 1.0; };
    // volume of {y < e} in the Lorentz cone: two cones of height 1/2 and radius 1/2
    CHECK(numerics::integrate_cone(L, one, numerics::ConeRegion::below({1.0, 0.0, 0.0}), spec).value ==
          doctest::Approx(std::numbers::pi / 12.0).epsilon(1e-8));
    // order intervals scale with det(t)^{3/2} and are Lorentz invariant
    CHECK(numerics::integrate_cone(L, one, numerics::ConeRegion::below({2.0, 1.0, 0.5}), spec).value ==
          doctest::Approx(std::numbers::pi / 12.0 * std::pow(4.0 - 1.25, 1.5)).epsilon(1e-8));
    CHECK(numerics::integrate_cone(O, [](const ConePoint& y) { return std::exp(-y[0] - 2 * y[1]); },
                                   numerics::ConeRegion::whole(), spec)
              .value == doctest::Approx(0.5).epsilon(1e-8));
    // the spherical cone is the Lorentz cone under a map of Jacobian 2
    CHECK(numerics::integrate_cone(S, one, numerics::ConeRegion::below({1.0, 1.0, 0.0}), spec).value ==
          doctest::Approx(2.0 * std::numbers::pi / 12.0).epsilon(1e-8));
}

TEST_CASE("cubic Fourier rule is exact on cubics") {
    const double step = 0.05;
    const int M = 40;
    auto p = [](double t) { return Cx(1.0 - 2.0 * t + 0.5 * t * t * t, t * t); };
    std::vector<Cx> h(M + 1);
    for (int k = 0; k <= M; ++k) h[k] = p(k * step);
    QuadratureSpec spec;
    spec.tolerance = 1e-13;
    for (double w : {0.0, 1.0, -7.5, 30.0}) {
        const auto oracle = numerics::integrate([&](double t) { return p(t) * std::exp(Cx(0.0, w * t)); }, 0.0, M * step, spec);
        const Cx got = numerics::fourier_integral_at(h, step, w);
        CHECK(std::abs(got - oracle.value) < 1e-10);
    }
}

TEST_CASE("FFT and direct Fourier grids agree with the single-frequency rule") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n;
    std::vector<Cx> h(65);
    for (auto& v : h) v = {n(rng), n(rng)};
    const double step = 0.1;
    const std::size_t N = 256;
    const auto fast = numerics::fourier_integral_grid(h, step, N, numerics::FourierBackend::Fft);
    const auto slow = numerics::fourier_integral_grid(h, step, N, numerics::FourierBackend::Direct);
    REQUIRE(fast.size() == N);
    for (std::size_t j = 0; j < N; j += 17) {
        CHECK(std::abs(fast[j] - slow[j]) < 1e-10);
        CHECK(std::abs(fast[j] - numerics::fourier_integral_at(h, step, numerics::fft_angle(j, N) / step)) < 1e-10);
    }
    CHECK_THROWS(numerics::fourier_integral_grid(std::vector<Cx>(4), step, N));
}

TEST_CASE("serial, OpenMP and FFT Fourier sums agree with the defining sum") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n;
    std::vector<Cx> h(100);
    for (auto& v : h) v = {n(rng), n(rng)};
    const std::size_t N = 128;
    const auto a = kernels::serial::fourier_sums(h, N);
    const auto b = kernels::omp::fourier_sums(h, N);
    const auto c = kernels::fft::fourier_sums(h, N);
    for (std::size_t j = 0; j < N; ++j) {
        Cx s;
        for (std::size_t k = 0; k < h.size(); ++k)
            s += h[k] * std::polar(1.0, 2 * std::numbers::pi * double(j * k % N) / double(N));
        CHECK(std::abs(a[j] - s) < 1e-9);
        CHECK(a[j] == b[j]);
        CHECK(std::abs(c[j] - s) < 1e-9);
    }
}
