#pragma once

#include "carleson/cone.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace carleson {

using Complex = std::complex<double>;
using Density = std::function<Complex(const ConePoint&)>;

enum class DecayKind { CompactSupport, ExponentialEnvelope };

/// ExponentialEnvelope: |f(t)| decays like exp(-rate <e,t>) up to polynomial factors.
/// CompactSupport: f vanishes outside {t : max coordinate <= radius}.
struct DecayTag {
    DecayKind kind = DecayKind::ExponentialEnvelope;
    double rate = 1.0;
    double radius = 0.0;

    static DecayTag exponential(double rate) { return {DecayKind::ExponentialEnvelope, rate, 0.0}; }
    static DecayTag compact(double radius) { return {DecayKind::CompactSupport, 0.0, radius}; }
};

/// Nodes k * step, k = 0..count-1.
struct UniformAxis {
    double step = 0.0;
    std::size_t count = 0;

    double node(std::size_t k) const { return double(k) * step; }
    double extent() const { return step * double(count - 1); }
};

/// Box grids (half-line, octant) are tensor products of uniform axes starting at t = 0.
/// Fiber grids (Lorentz, spherical) sample each fiber over a base node with rescaled fiber nodes,
/// so no node leaves the cone.
class SpectralGrid {
public:
    enum class Layout { Box, Fiber };

    static SpectralGrid box(const ConeDescriptor& cone, std::vector<UniformAxis> axes);
    /// Base nodes k * step, k = 1..count; fiber_radial Gauss nodes across each fiber and
    /// fiber_angular equispaced angles (Lorentz only).
    static SpectralGrid fiber(const ConeDescriptor& cone, UniformAxis base, std::size_t fiber_radial,
                              std::size_t fiber_angular);

    /// Spherical fiber grid over the base nodes (i * step1, j * step2), i, j >= 1.
    static SpectralGrid spherical_fiber(UniformAxis base1, UniformAxis base2, std::size_t fiber_radial);

    Layout layout() const { return layout_; }
    ConeKind cone_kind() const { return kind_; }
    const std::vector<UniformAxis>& axes() const { return axes_; }
    std::size_t size() const { return size_; }
    std::size_t fiber_size() const { return fiber_radial_ * (kind_ == ConeKind::Lorentz3 ? fiber_angular_ : 1); }
    std::size_t base_size() const;
    ConePoint node(std::size_t i) const;
    /// Fiber grids: weight of node i in the fiber quadrature (disc area element or segment length).
    double fiber_weight(std::size_t i) const;

private:
    Layout layout_ = Layout::Box;
    ConeKind kind_ = ConeKind::HalfLine;
    std::vector<UniformAxis> axes_;
    std::size_t fiber_radial_ = 0, fiber_angular_ = 0;
    std::size_t size_ = 0;
};

/// Sampled spectral density together with the density itself.
class SpectralFunction {
public:
    SpectralFunction(const ConeDescriptor& cone, SpectralGrid grid, Density density, DecayTag decay);
    SpectralFunction(const ConeDescriptor& cone, SpectralGrid grid, Density density, DecayTag decay,
                     std::vector<Complex> values);

    static SpectralFunction zero(const ConeDescriptor& cone, SpectralGrid grid);

    const ConeDescriptor& cone() const { return cone_; }
    const SpectralGrid& grid() const { return grid_; }
    std::span<const Complex> values() const { return *values_; }
    const DecayTag& decay() const { return decay_; }
    Complex operator()(const ConePoint& t) const { return (*density_)(t); }
    const Density& density() const { return *density_; }
    bool is_zero() const { return zero_; }

    /// Frequency scale c_i in exp(i sum_i c_i t_i z_i); defaults to the cone's pairing weights.
    const std::array<double, 3>& pairing_scale() const { return scale_; }
    SpectralFunction with_pairing_scale(std::array<double, 3> scale) const;
    double pairing_determinant() const;

    std::string label;

private:
    ConeDescriptor cone_;
    SpectralGrid grid_;
    std::shared_ptr<const Density> density_;
    std::shared_ptr<const std::vector<Complex>> values_;
    DecayTag decay_;
    std::array<double, 3> scale_{1.0, 1.0, 1.0};
    bool zero_ = false;
};

/// Smallest power-of-two radius T beyond which |f| stays below eps * max|f| on a probe grid.
double truncation_radius(const ConeDescriptor& cone, const Density& f, double eps, double start = 1.0);

struct SamplingOptions {
    double tolerance = 1e-10;
    /// Box grids: nodes per axis. Fiber grids: base nodes.
    std::size_t nodes_per_axis = 32768;
    std::size_t fiber_radial = 4;
    std::size_t fiber_angular = 8;
};

/// Samples f on an automatically truncated grid appropriate for the cone.
SpectralFunction make_spectral(const ConeDescriptor& cone, Density f, DecayTag decay, const SamplingOptions& opts = {},
                               std::string label = {});

}  // namespace carleson
