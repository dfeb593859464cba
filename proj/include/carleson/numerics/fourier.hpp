#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace carleson::numerics {

/// Attenuation factor and endpoint weights of cubic Fourier (Filon-type) integration.
struct FilonWeights {
    double attenuation;
    std::array<std::complex<double>, 4> endpoint;
};

FilonWeights filon_cubic_weights(double theta);

enum class FourierBackend { Fft, Direct };

/// I_j ~ integral over [0, M step] of h(t) exp(i w_j t), with samples h_k = h(k step), k = 0..M,
/// w_j = theta_j / step and theta_j = 2 pi j / N wrapped into [-pi, pi). Needs M >= 7 and N > M.
/// Exact for the piecewise-cubic interpolant of the samples.
std::vector<std::complex<double>> fourier_integral_grid(std::span<const std::complex<double>> h, double step,
                                                        std::size_t n_fft,
                                                        FourierBackend backend = FourierBackend::Fft);

/// Same quadrature at one arbitrary frequency w (|w step| <= pi).
std::complex<double> fourier_integral_at(std::span<const std::complex<double>> h, double step, double omega);

/// Wrapped angle theta_j for output index j.
double fft_angle(std::size_t j, std::size_t n_fft);

std::size_t next_pow2(std::size_t n);

}  // namespace carleson::numerics
