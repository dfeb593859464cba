#pragma once

#include "carleson/cone.hpp"
#include "carleson/numerics/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace carleson::numerics {

/// Integration region inside a cone: the whole cone or an order interval {0 < y < upper}.
struct ConeRegion {
    std::optional<ConePoint> upper;

    static ConeRegion whole() { return {}; }
    static ConeRegion below(const ConePoint& t) { return {t}; }
};

namespace detail {

template <class F>
using cone_value_t = std::decay_t<std::invoke_result_t<F&, const ConePoint&>>;

template <class T>
QuadResult<T> accept(const QuadResult<T>& r, bool& ok) {
    ok = ok && r.converged;
    return r;
}

/// Lorentz cone in coordinates y = (s, s u cos th, s u sin th).
template <class F>
auto lorentz_whole(F& f, const QuadratureSpec& spec, double scale, bool& ok) {
    const QuadratureSpec mid = spec.scaled(0.1), in = spec.scaled(0.01);
    auto sheet = [&](double s) {
        auto radial = [&](double u) {
            auto ring = [&](double th) { return f(ConePoint{s, s * u * std::cos(th), s * u * std::sin(th)}); };
            return u * accept(integrate_periodic(ring, 2.0 * std::numbers::pi, in), ok).value;
        };
        return s * s * accept(integrate(radial, 0.0, 1.0, mid), ok).value;
    };
    return integrate_to_infinity(sheet, 0.0, spec, scale);
}

/// Lorentz order interval {0 < y < lambda e}: double cone around the axis.
template <class F>
auto lorentz_double_cone(F& f, double lambda, const QuadratureSpec& spec, double scale, bool& ok) {
    const QuadratureSpec mid = spec.scaled(0.1), in = spec.scaled(0.01);
    auto sheet = [&](double s) {
        const double rmax = std::min(s, lambda - s);
        auto radial = [&](double u) {
            const double rho = rmax * u;
            auto ring = [&](double th) { return f(ConePoint{s, rho * std::cos(th), rho * std::sin(th)}); };
            return u * accept(integrate_periodic(ring, 2.0 * std::numbers::pi, in), ok).value;
        };
        return rmax * rmax * accept(integrate(radial, 0.0, 1.0, mid), ok).value;
    };
    auto lo = integrate_graded(sheet, 0.0, 0.5 * lambda, spec.scaled(0.5), scale);
    auto hi = integrate(sheet, 0.5 * lambda, lambda, spec.scaled(0.5));
    lo.value += hi.value;
    lo.error += hi.error;
    lo.l1 += hi.l1;
    lo.converged = lo.converged && hi.converged;
    lo.evaluations += hi.evaluations;
    return lo;
}

template <class F>
auto lorentz_region(F& f, const ConeRegion& region, const QuadratureSpec& spec, double scale, bool& ok) {
    if (!region.upper) return lorentz_whole(f, spec, scale, ok);
    const ConePoint& t = *region.upper;
    const double lambda = std::sqrt(det(ConeDescriptor::lorentz3(), t));
    const Matrix3 boost = lorentz_boost_to(t);
    auto moved = [&](const ConePoint& s) { return f(apply(boost, s)); };
    return lorentz_double_cone(moved, lambda, spec, scale, ok);
}

}  // namespace detail

/// Iterated adaptive quadrature of f over a cone region; Spherical3 is pulled back to Lorentz3.
/// scale is the width of the first radial panel for unbounded regions.
template <class F>
auto integrate_cone(const ConeDescriptor& cone, F&& f, const ConeRegion& region, const QuadratureSpec& spec,
                    double scale = 1.0) {
    using T = detail::cone_value_t<F>;
    if (region.upper) {
        require_dim(cone, *region.upper, "integrate_cone");
        if (!contains(cone, *region.upper)) throw DomainError("integrate_cone: order interval bound not in cone");
    }
    bool ok = true;
    QuadResult<T> r;
    switch (cone.kind()) {
        case ConeKind::HalfLine: {
            auto g = [&](double y) { return f(ConePoint{y}); };
            r = region.upper ? integrate_graded(g, 0.0, (*region.upper)[0], spec, scale)
                              : integrate_to_infinity(g, 0.0, spec, scale);
            break;
        }
        case ConeKind::Octant2: {
            const QuadratureSpec in = spec.scaled(0.1);
            auto row = [&](double y1) {
                auto g = [&](double y2) { return f(ConePoint{y1, y2}); };
                auto q = region.upper ? integrate_graded(g, 0.0, (*region.upper)[1], in, scale)
                                      : integrate_to_infinity(g, 0.0, in, scale);
                ok = ok && q.converged;
                return q.value;
            };
            r = region.upper ? integrate_graded(row, 0.0, (*region.upper)[0], spec, scale)
                              : integrate_to_infinity(row, 0.0, spec, scale);
            break;
        }
        case ConeKind::Lorentz3:
            r = detail::lorentz_region(f, region, spec, scale, ok);
            break;
        case ConeKind::Spherical3: {
            auto pulled = [&](const ConePoint& y) { return kLorentzToSphericalJacobian * f(lorentz_to_spherical(y)); };
            ConeRegion back = region.upper ? ConeRegion::below(spherical_to_lorentz(*region.upper)) : region;
            r = detail::lorentz_region(pulled, back, spec, scale, ok);
            break;
        }
    }
    r.converged = r.converged && ok;
    return r;
}

}  // namespace carleson::numerics
