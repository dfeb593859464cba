#include "carleson/numerics/fourier.hpp"

#include "carleson/errors.hpp"
#include "carleson/kernels/fourier_sums.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

namespace carleson::numerics {

FilonWeights filon_cubic_weights(double th) {
    using C = std::complex<double>;
    FilonWeights w;
    if (std::abs(th) < 5e-2) {
        const double t2 = th * th, t4 = t2 * t2, t6 = t4 * t2;
        w.attenuation = 1.0 - (11.0 / 720.0) * t4 + (23.0 / 15120.0) * t6;
        w.endpoint[0] = C((-2.0 / 3.0) + t2 / 45.0 + (103.0 / 15120.0) * t4 - (169.0 / 226800.0) * t6,
                          th * (2.0 / 45.0 + (2.0 / 105.0) * t2 - (8.0 / 2835.0) * t4 + (86.0 / 467775.0) * t6));
        w.endpoint[1] = C((7.0 / 24.0) - (7.0 / 180.0) * t2 + (5.0 / 3456.0) * t4 - (7.0 / 259200.0) * t6,
                          th * (7.0 / 72.0 - t2 / 168.0 + (11.0 / 72576.0) * t4 - (13.0 / 5987520.0) * t6));
        w.endpoint[2] = C((-1.0 / 6.0) + t2 / 45.0 - (5.0 / 6048.0) * t4 + t6 / 64800.0,
                          th * (-7.0 / 90.0 + t2 / 210.0 - (11.0 / 90720.0) * t4 + (13.0 / 7484400.0) * t6));
        w.endpoint[3] = C((1.0 / 24.0) - t2 / 180.0 + (5.0 / 24192.0) * t4 - t6 / 259200.0,
                          th * (7.0 / 360.0 - t2 / 840.0 + (11.0 / 362880.0) * t4 - (13.0 / 29937600.0) * t6));
        return w;
    }
    const double c = std::cos(th), s = std::sin(th);
    const double c2 = c * c - s * s, s2 = 2.0 * s * c;
    const double t2 = th * th, t4 = t2 * t2;
    const double m = 3.0 - t2, p = 6.0 + t2;
    const double k6 = 1.0 / (6.0 * t4), k3 = 2.0 * k6;
    w.attenuation = k3 * p * (3.0 - 4.0 * c + c2);
    w.endpoint[0] = C(k6 * (-42.0 + 5.0 * t2 + p * (8.0 * c - c2)), k6 * (th * (-12.0 + 6.0 * t2) + p * s2));
    w.endpoint[1] = C(k6 * (14.0 * m - 7.0 * p * c), k6 * (30.0 * th - 5.0 * p * s));
    w.endpoint[2] = C(k3 * (-4.0 * m + 2.0 * p * c), k3 * (-12.0 * th + 2.0 * p * s));
    w.endpoint[3] = C(k6 * (2.0 * m - p * c), k6 * (6.0 * th - p * s));
    return w;
}

double fft_angle(std::size_t j, std::size_t n) {
    const double jj = j < (n + 1) / 2 ? double(j) : double(j) - double(n);
    return 2.0 * std::numbers::pi * jj / double(n);
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

namespace {

/// Filon weights for every FFT angle of an n-point transform of m+1 samples.
struct WeightTable {
    std::vector<FilonWeights> w;
    std::vector<std::complex<double>> phase;
};

std::shared_ptr<const WeightTable> weight_table(std::size_t n, std::size_t m) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const WeightTable>> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find({n, m}); it != cache.end()) return it->second;
    }
    auto t = std::make_shared<WeightTable>();
    t->w.resize(n);
    t->phase.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double th = fft_angle(j, n);
        t->w[j] = filon_cubic_weights(th);
        t->phase[j] = std::polar(1.0, th * double(m));
    }
    std::lock_guard lock(mu);
    if (cache.size() > 256) cache.clear();
    return cache.emplace(std::pair{n, m}, std::move(t)).first->second;
}

std::complex<double> corrected(std::span<const std::complex<double>> h, const FilonWeights& w,
                               std::complex<double> phase, std::complex<double> sum) {
    const std::size_t m = h.size() - 1;
    std::complex<double> left{}, right{};
    for (int k = 0; k < 4; ++k) {
        left += w.endpoint[k] * h[k];
        right += std::conj(w.endpoint[k]) * h[m - k];
    }
    return w.attenuation * sum + left + phase * right;
}

void check(std::span<const std::complex<double>> h, double step) {
    if (h.size() < 8) throw DomainError("fourier integral: need at least 8 samples");
    if (!(step > 0.0)) throw DomainError("fourier integral: step must be positive");
}

}  // namespace

std::vector<std::complex<double>> fourier_integral_grid(std::span<const std::complex<double>> h, double step,
                                                        std::size_t n, FourierBackend backend) {
    check(h, step);
    if (n < h.size()) throw DomainError("fourier integral: FFT length must exceed the sample count");
    std::vector<std::complex<double>> sums =
        backend == FourierBackend::Fft ? kernels::fft::fourier_sums(h, n) : kernels::omp::fourier_sums(h, n);
    const auto table = weight_table(n, h.size() - 1);
    for (std::size_t j = 0; j < n; ++j) sums[j] = step * corrected(h, table->w[j], table->phase[j], sums[j]);
    return sums;
}

std::complex<double> fourier_integral_at(std::span<const std::complex<double>> h, double step, double omega) {
    check(h, step);
    const double th = omega * step;
    if (std::abs(th) > std::numbers::pi + 1e-12) throw DomainError("fourier_integral_at: |omega step| > pi");
    std::complex<double> sum{};
    for (std::size_t k = 0; k < h.size(); ++k) sum += h[k] * std::polar(1.0, th * double(k));
    return step * corrected(h, filon_cubic_weights(th), std::polar(1.0, th * double(h.size() - 1)), sum);
}

}  // namespace carleson::numerics
