#pragma once

#include "carleson/numerics/fourier.hpp"
#include "carleson/spectral_function.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace carleson::numerics {

/// Spatial axis x_k = x0 + k dx, k = 0..count-1.
struct SliceAxis {
    double x0 = 0.0, dx = 0.0;
    std::size_t count = 0;
    double x(std::size_t k) const { return x0 + double(k) * dx; }
};

/// Requested spatial resolution; zero means automatic.
struct SliceOptions {
    double tolerance = 1e-10;
    /// Minimum spectral nodes per axis after subsampling the stored grid.
    std::size_t min_nodes = 8192;
    std::size_t pad = 2;
    double max_dx = 0.0;
    double min_extent = 0.0;
    bool estimate_error = false;
    /// Resample from the density when damping leaves fewer than min_nodes stored nodes.
    bool resample = true;
    FourierBackend backend = FourierBackend::Fft;
};

/// Values F(x + iy) on a uniform spatial grid, with accuracy metadata.
struct Slice {
    ConePoint height;
    std::vector<SliceAxis> axes;
    std::vector<Complex> values;  // row-major, last axis fastest
    std::array<double, 2> spectral_step{};
    std::array<double, 2> spectral_extent{};
    /// Largest damped spectral magnitude dropped by truncation, relative to the maximum.
    double truncation_level = 0.0;
    /// Difference against the half-resolution transform divided by 15 (cubic rule); NaN when not computed.
    double interpolation_error = 0.0;
};

/// F(x + iy) for a density on a box grid (half-line or octant): damp by exp(-<t,y>), truncate where the
/// damped density drops below a tenth of the tolerance, then apply the cubic Fourier rule via FFT.
Slice oscillatory_slice(const SpectralFunction& f, const ConePoint& y, const SliceOptions& opts = {});

/// Integral of |F|^2 over the spatial plane: grid sum plus power-law tail estimate past the edges.
double slice_l2(const Slice& s);

}  // namespace carleson::numerics
