#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// S_j = sum_k h_k exp(2 pi i j k / N), j = 0..N-1, for samples h of length <= N.
namespace carleson::kernels {

namespace serial {
std::vector<std::complex<double>> fourier_sums(std::span<const std::complex<double>> h, std::size_t n);
}

namespace omp {
std::vector<std::complex<double>> fourier_sums(std::span<const std::complex<double>> h, std::size_t n);
}

namespace fft {
std::vector<std::complex<double>> fourier_sums(std::span<const std::complex<double>> h, std::size_t n);
/// In-place variant on a buffer of length n (zero-padded by the caller).
void fourier_sums_inplace(std::complex<double>* buffer, std::size_t n);
}

}  // namespace carleson::kernels
