#include "carleson/kernels/fourier_sums.hpp"

#include "carleson/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace carleson::kernels {

namespace {

void check_sizes(std::size_t m, std::size_t n) {
    if (n == 0 || m > n) throw DomainError("fourier_sums: need 0 < len(h) <= N");
}

std::complex<double> direct_sum(std::span<const std::complex<double>> h, std::size_t n, std::size_t j) {
    std::complex<double> s{};
    for (std::size_t k = 0; k < h.size(); ++k) {
        // reduce j*k mod n exactly before forming the angle
        const std::size_t jk = (j * k) % n;
        const double ang = 2.0 * std::numbers::pi * double(jk) / double(n);
        s += h[k] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return s;
}

class PlanCache {
public:
    fftw_plan get(std::size_t n) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;
        fftw_complex* tmp = fftw_alloc_complex(n);
        fftw_plan p = fftw_plan_dft_1d(int(n), tmp, tmp, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(tmp);
        plans_.emplace(n, p);
        return p;
    }
    ~PlanCache() {
        for (auto& [n, p] : plans_) fftw_destroy_plan(p);
    }

private:
    std::mutex mu_;
    std::map<std::size_t, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

}  // namespace

namespace serial {
std::vector<std::complex<double>> fourier_sums(std::span<const std::complex<double>> h, std::size_t n) {
    check_sizes(h.size(), n);
    std::vector<std::complex<double>> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = direct_sum(h, n, j);
    return out;
}
}  // namespace serial

namespace omp {
std::vector<std::complex<double>> fourier_sums(std::span<const std::complex<double>> h, std::size_t n) {
    check_sizes(h.size(), n);
    std::vector<std::complex<double>> out(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(n); ++j) out[j] = direct_sum(h, n, std::size_t(j));
    return out;
}
}  // namespace omp

namespace fft {
void fourier_sums_inplace(std::complex<double>* buffer, std::size_t n) {
    fftw_plan p = plan_cache().get(n);
    auto* b = reinterpret_cast<fftw_complex*>(buffer);
    fftw_execute_dft(p, b, b);
}

std::vector<std::complex<double>> fourier_sums(std::span<const std::complex<double>> h, std::size_t n) {
    check_sizes(h.size(), n);
    std::vector<std::complex<double>> out(n);
    std::copy(h.begin(), h.end(), out.begin());
    fourier_sums_inplace(out.data(), n);
    return out;
}
}  // namespace fft

}  // namespace carleson::kernels
