#include "carleson/spectral_function.hpp"

#include "carleson/errors.hpp"
#include "carleson/numerics/gauss_legendre.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace carleson {

SpectralGrid SpectralGrid::box(const ConeDescriptor& cone, std::vector<UniformAxis> axes) {
    if (cone.kind() != ConeKind::HalfLine && cone.kind() != ConeKind::Octant2)
        throw DomainError("SpectralGrid::box: only the half-line and the octant use box grids");
    if (axes.size() != cone.dim()) throw DomainError("SpectralGrid::box: one axis per dimension required");
    SpectralGrid g;
    g.layout_ = Layout::Box;
    g.kind_ = cone.kind();
    g.size_ = 1;
    for (const auto& a : axes) {
        if (!(a.step > 0.0) || a.count < 2) throw DomainError("SpectralGrid::box: need step > 0 and at least 2 nodes");
        g.size_ *= a.count;
    }
    g.axes_ = std::move(axes);
    return g;
}

SpectralGrid SpectralGrid::fiber(const ConeDescriptor& cone, UniformAxis base, std::size_t radial,
                                 std::size_t angular) {
    if (cone.kind() != ConeKind::Lorentz3 && cone.kind() != ConeKind::Spherical3)
        throw DomainError("SpectralGrid::fiber: only the Lorentz and spherical cones use fiber grids");
    if (!(base.step > 0.0) || base.count < 1 || radial < 1) throw DomainError("SpectralGrid::fiber: empty grid");
    if (cone.kind() == ConeKind::Lorentz3 && angular < 1) throw DomainError("SpectralGrid::fiber: need angles");
    SpectralGrid g;
    g.layout_ = Layout::Fiber;
    g.kind_ = cone.kind();
    g.fiber_radial_ = radial;
    g.fiber_angular_ = angular;
    g.axes_ = cone.kind() == ConeKind::Lorentz3 ? std::vector<UniformAxis>{base} : std::vector<UniformAxis>{base, base};
    g.size_ = g.base_size() * g.fiber_size();
    return g;
}

SpectralGrid SpectralGrid::spherical_fiber(UniformAxis base1, UniformAxis base2, std::size_t radial) {
    SpectralGrid g = fiber(ConeDescriptor::spherical3(), base1, radial, 1);
    if (!(base2.step > 0.0) || base2.count < 1) throw DomainError("SpectralGrid::spherical_fiber: empty grid");
    g.axes_[1] = base2;
    g.size_ = g.base_size() * g.fiber_size();
    return g;
}

double SpectralGrid::fiber_weight(std::size_t i) const {
    if (layout_ != Layout::Fiber) throw DomainError("SpectralGrid::fiber_weight: box grids have no fibers");
    if (i >= size_) throw DomainError("SpectralGrid::fiber_weight: index out of range");
    const auto& rule = numerics::gauss_legendre(int(fiber_radial_));
    const std::size_t b = i / fiber_size(), f = i % fiber_size();
    if (kind_ == ConeKind::Lorentz3) {
        const double t1 = double(b + 1) * axes_[0].step;
        const std::size_t r = f / fiber_angular_;
        const double u = 0.5 * (rule.nodes[r] + 1.0);
        return t1 * t1 * 0.5 * rule.weights[r] * u * 2.0 * std::numbers::pi / double(fiber_angular_);
    }
    const double t1 = double(b / axes_[1].count + 1) * axes_[0].step;
    const double t2 = double(b % axes_[1].count + 1) * axes_[1].step;
    return std::sqrt(t1 * t2) * rule.weights[f];
}

std::size_t SpectralGrid::base_size() const {
    if (layout_ == Layout::Box) return size_;
    return kind_ == ConeKind::Lorentz3 ? axes_[0].count : axes_[0].count * axes_[1].count;
}

ConePoint SpectralGrid::node(std::size_t i) const {
    if (i >= size_) throw DomainError("SpectralGrid::node: index out of range");
    if (layout_ == Layout::Box) {
        if (kind_ == ConeKind::HalfLine) return {axes_[0].node(i)};
        return {axes_[0].node(i / axes_[1].count), axes_[1].node(i % axes_[1].count)};
    }
    const auto& rule = numerics::gauss_legendre(int(fiber_radial_));
    const std::size_t b = i / fiber_size(), f = i % fiber_size();
    if (kind_ == ConeKind::Lorentz3) {
        const double t1 = double(b + 1) * axes_[0].step;
        const double u = 0.5 * (rule.nodes[f / fiber_angular_] + 1.0);
        const double th = 2.0 * std::numbers::pi * double(f % fiber_angular_) / double(fiber_angular_);
        return {t1, t1 * u * std::cos(th), t1 * u * std::sin(th)};
    }
    const double t1 = double(b / axes_[1].count + 1) * axes_[0].step;
    const double t2 = double(b % axes_[1].count + 1) * axes_[1].step;
    return {t1, t2, std::sqrt(t1 * t2) * rule.nodes[f]};
}

namespace {

std::vector<Complex> sample(const SpectralGrid& grid, const Density& f) {
    std::vector<Complex> v(grid.size());
    bool bad = false;
#pragma omp parallel for schedule(static) reduction(|| : bad)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(v.size()); ++i) {
        v[i] = f(grid.node(std::size_t(i)));
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) bad = true;
    }
    if (bad) throw DomainError("SpectralFunction: density is not finite at some grid node");
    return v;
}

}  // namespace

SpectralFunction::SpectralFunction(const ConeDescriptor& cone, SpectralGrid grid, Density density, DecayTag decay)
    : cone_(cone), grid_(std::move(grid)), decay_(decay) {
    if (grid_.cone_kind() != cone.kind()) throw DomainError("SpectralFunction: grid built for another cone");
    if (!density) throw DomainError("SpectralFunction: empty density");
    density_ = std::make_shared<const Density>(std::move(density));
    values_ = std::make_shared<const std::vector<Complex>>(sample(grid_, *density_));
    for (std::size_t i = 0; i < cone.dim(); ++i) scale_[i] = cone.pairing_weight(i);
}

SpectralFunction::SpectralFunction(const ConeDescriptor& cone, SpectralGrid grid, Density density, DecayTag decay,
                                   std::vector<Complex> values)
    : cone_(cone), grid_(std::move(grid)), decay_(decay) {
    if (grid_.cone_kind() != cone.kind()) throw DomainError("SpectralFunction: grid built for another cone");
    if (values.size() != grid_.size()) throw DomainError("SpectralFunction: value count does not match the grid");
    if (!density) throw DomainError("SpectralFunction: empty density");
    density_ = std::make_shared<const Density>(std::move(density));
    values_ = std::make_shared<const std::vector<Complex>>(std::move(values));
    for (std::size_t i = 0; i < cone.dim(); ++i) scale_[i] = cone.pairing_weight(i);
}

SpectralFunction SpectralFunction::zero(const ConeDescriptor& cone, SpectralGrid grid) {
    const std::size_t n = grid.size();
    SpectralFunction f(cone, std::move(grid), [](const ConePoint&) { return Complex{}; }, DecayTag::compact(0.0),
                       std::vector<Complex>(n));
    f.zero_ = true;
    f.label = "zero";
    return f;
}

SpectralFunction SpectralFunction::with_pairing_scale(std::array<double, 3> scale) const {
    for (std::size_t i = 0; i < cone_.dim(); ++i)
        if (!(scale[i] > 0.0)) throw DomainError("with_pairing_scale: scales must be positive");
    SpectralFunction f = *this;
    f.scale_ = scale;
    return f;
}

double SpectralFunction::pairing_determinant() const {
    double d = 1.0;
    for (std::size_t i = 0; i < cone_.dim(); ++i) d *= scale_[i];
    return d;
}

namespace {

std::vector<ConePoint> probe_shell(const ConeDescriptor& cone, double lo, double hi) {
    std::vector<ConePoint> pts;
    const int n = 33;
    auto lin = [&](int k) { return lo + (hi - lo) * double(k) / double(n - 1); };
    switch (cone.kind()) {
        case ConeKind::HalfLine:
            for (int k = 0; k < 8 * n; ++k) pts.push_back({lo + (hi - lo) * double(k) / double(8 * n - 1)});
            break;
        case ConeKind::Octant2:
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const double s = hi * double(a) / double(n - 1), t = hi * double(b) / double(n - 1);
                    if (std::max(s, t) >= lo) pts.push_back({s, t});
                }
            break;
        case ConeKind::Lorentz3:
        case ConeKind::Spherical3:
            for (int k = 0; k < n; ++k)
                for (double u : {0.0, 0.5, 0.9, 0.99})
                    for (int a = 0; a < 4; ++a) {
                        const double t1 = lin(k), th = 0.5 * std::numbers::pi * a;
                        ConePoint p{t1, t1 * u * std::cos(th), t1 * u * std::sin(th)};
                        pts.push_back(cone.kind() == ConeKind::Lorentz3 ? p : lorentz_to_spherical(p));
                    }
            break;
    }
    return pts;
}

double max_abs(const Density& f, const std::vector<ConePoint>& pts) {
    double m = 0.0;
    for (const auto& p : pts) m = std::max(m, std::abs(f(p)));
    return m;
}

}  // namespace

double truncation_radius(const ConeDescriptor& cone, const Density& f, double eps, double start) {
    double inner = max_abs(f, probe_shell(cone, 0.0, start));
    for (double t = start; t < 1e6; t *= 2.0) {
        const double shell = max_abs(f, probe_shell(cone, t, 2.0 * t));
        if (shell <= eps * std::max(inner, shell) || (inner == 0.0 && shell == 0.0)) return 2.0 * t;
        inner = std::max(inner, shell);
    }
    throw DomainError("truncation_radius: density does not decay on the probe range");
}

SpectralFunction make_spectral(const ConeDescriptor& cone, Density f, DecayTag decay, const SamplingOptions& opts,
                               std::string label) {
    double radius = decay.kind == DecayKind::CompactSupport ? decay.radius
                                                            : truncation_radius(cone, f, 0.1 * opts.tolerance);
    if (!(radius > 0.0)) throw DomainError("make_spectral: empty support");
    std::size_t n = opts.nodes_per_axis;
    SpectralGrid grid = [&] {
        switch (cone.kind()) {
            case ConeKind::HalfLine: return SpectralGrid::box(cone, {{radius / double(n - 1), n}});
            case ConeKind::Octant2: {
                n = std::min<std::size_t>(n, 1025);
                UniformAxis a{radius / double(n - 1), n};
                return SpectralGrid::box(cone, {a, a});
            }
            case ConeKind::Lorentz3:
                n = std::min<std::size_t>(n, 8192);
                return SpectralGrid::fiber(cone, {radius / double(n), n}, opts.fiber_radial, opts.fiber_angular);
            case ConeKind::Spherical3:
            default:
                n = std::min<std::size_t>(n, 256);
                return SpectralGrid::fiber(cone, {radius / double(n), n}, opts.fiber_radial, 1);
        }
    }();
    SpectralFunction s(cone, std::move(grid), std::move(f), decay);
    s.label = std::move(label);
    return s;
}

}  // namespace carleson
