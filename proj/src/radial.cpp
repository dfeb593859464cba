#include "carleson/radial.hpp"

#include "carleson/errors.hpp"
#include "carleson/numerics/cone_quadrature.hpp"

#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numbers>
#include <tuple>

namespace carleson::radial {

using numerics::ConeRegion;
using numerics::QuadratureSpec;

std::string_view to_string(Condition c) {
    switch (c) {
        case Condition::Multiplier: return "multiplier";
        case Condition::Integral: return "integral";
        case Condition::NecessaryIneq: return "necessary";
    }
    return "?";
}

RadialDensity RadialDensity::indicator_below(const ConeDescriptor& cone, const ConePoint& upper, std::string label) {
    require_dim(cone, upper, "indicator_below");
    if (!contains(cone, upper)) throw DomainError("indicator_below: bound must lie in the cone");
    RadialDensity d;
    d.cone = cone;
    d.phi = [cone, upper](const ConePoint& y) { return precedes(cone, y, upper) ? 1.0 : 0.0; };
    d.support = SupportTag::Bounded;
    d.bound = upper;
    d.label = std::move(label);
    return d;
}

ConePoint ray_direction(const ConeDescriptor& cone, int j) {
    const double s = j == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -j);
    switch (cone.kind()) {
        case ConeKind::HalfLine: return ConePoint{1.0};
        case ConeKind::Octant2: return ConePoint{1.0, j == 0 ? 1.0 : std::ldexp(1.0, -j)};
        case ConeKind::Lorentz3: return ConePoint{1.0, s, 0.0};
        case ConeKind::Spherical3: return lorentz_to_spherical(ConePoint{1.0, s, 0.0});
    }
    return cone.base_point();
}

namespace {

int depth_of(const ConeDescriptor& cone, const TGrid& g) { return cone.rank() == 1 ? 0 : g.ray_depth; }

QuadratureSpec spec_for(double tol) {
    QuadratureSpec s;
    s.tolerance = tol;
    return s;
}

ConeRegion support_region(const RadialDensity& d) {
    return d.bound ? ConeRegion::below(*d.bound) : ConeRegion::whole();
}

void check_density(const RadialDensity& d) {
    if (!d.phi) throw DomainError("radial density: phi is not set");
}

double pair_scale(const ConeDescriptor& cone, const ConePoint& t) {
    const double p = cone.pair(t, cone.base_point());
    return p > 0.0 ? p : 1.0;
}

struct Key {
    int k, j;
    bool operator<(const Key& o) const { return k != o.k ? k < o.k : j < o.j; }
};

/// Sup of value(t, tol) over the grid, refined toward the witness; the +infinity protocol of RadialOptions.
/// The sup is wanted to absolute accuracy tol * sup, so points far below the running sup get a
/// coarse estimate first and are recomputed only when that estimate is not small enough.
template <class V>
CarlesonCertificate grid_sup(const ConeDescriptor& cone, V value, const RadialOptions& opts, Condition cond) {
    CarlesonCertificate c;
    c.condition = cond;
    const double tol = opts.tolerance;
    const double coarse = std::max(1e-3, tol);
    const int depth = depth_of(cone, opts.grid);
    try {
        c.reference_value = value(cone.base_point(), tol);
    } catch (const DivergenceError&) {
        c.witness = cone.base_point();
        c.infinite = true;
        c.sup_value = c.reference_value = c.constant = std::numeric_limits<double>::infinity();
        c.refinement_sups = {c.sup_value};
        c.note = "inner integral diverges at the reference point";
        return c;
    }
    std::map<Key, double> seen;
    double best = c.reference_value;
    auto evaluate = [&](std::vector<Key> todo) {
        std::vector<double> vals(todo.size());
        const double floor = best;
        std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(todo.size()); ++i) {
            try {
                const ConePoint t = std::ldexp(1.0, todo[i].k) * ray_direction(cone, todo[i].j);
                double v = value(t, coarse);
                if (v * coarse > tol * floor) v = value(t, std::max(tol, tol * floor / v));
                vals[i] = v;
            } catch (const DivergenceError&) {
                vals[i] = std::numeric_limits<double>::infinity();
            } catch (...) {
#pragma omp critical
                err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        for (std::size_t i = 0; i < todo.size(); ++i) seen[todo[i]] = vals[i];
    };
    auto scan = [&] {
        Key w{0, 0};
        double b = -1.0;
        for (const auto& [key, v] : seen)
            if (v > b) b = v, w = key;  // lexicographic first on ties
        best = std::max(best, b);
        return std::pair{w, b};
    };
    // base ray first at full accuracy: it fixes the scale of the running sup
    std::vector<Key> axis, rest;
    for (int k = opts.grid.k_min; k <= opts.grid.k_max; ++k) {
        axis.push_back({k, 0});
        for (int j = 1; j <= depth; ++j) rest.push_back({k, j});
    }
    {
        std::vector<double> vals(axis.size());
        for (std::size_t i = 0; i < axis.size(); ++i) {
            try {
                vals[i] = value(std::ldexp(1.0, axis[i].k) * ray_direction(cone, 0), tol);
            } catch (const DivergenceError&) {
                vals[i] = std::numeric_limits<double>::infinity();
            }
            seen[axis[i]] = vals[i];
        }
    }
    scan();
    evaluate(rest);
    auto [w, b] = scan();
    c.refinement_sups.push_back(b);
    for (int level = 1; level <= opts.grid.refinements && std::isfinite(b); ++level) {
        int k_lo = w.k, k_hi = w.k, j_hi = 0;
        for (const auto& [key, v] : seen)
            if (key.j == w.j) k_lo = std::min(k_lo, key.k), k_hi = std::max(k_hi, key.k);
        for (const auto& [key, v] : seen)
            if (key.k == w.k) j_hi = std::max(j_hi, key.j);
        std::vector<Key> more;
        const int step = opts.grid.refine_step;
        if (w.k == k_lo)
            for (int k = k_lo - step; k < k_lo; ++k) more.push_back({k, w.j});
        if (w.k == k_hi)
            for (int k = k_hi + 1; k <= k_hi + step; ++k) more.push_back({k, w.j});
        if (depth > 0 && w.j == j_hi && w.j > 0)
            for (int j = j_hi + 1; j <= j_hi + std::max(1, step / 3); ++j) more.push_back({w.k, j});
        if (more.empty()) {
            c.refinement_sups.push_back(b);
            continue;
        }
        evaluate(more);
        std::tie(w, b) = scan();
        c.refinement_sups.push_back(b);
    }
    c.witness = std::ldexp(1.0, w.k) * ray_direction(cone, w.j);
    c.sup_value = c.refinement_sups.back();
    const double limit = opts.blowup * c.reference_value;
    if (std::isinf(c.sup_value)) {
        c.infinite = true;
        c.note = "inner integral diverges at the witness";
    } else if (c.refinement_sups.size() >= 3) {
        bool grows = true;
        for (std::size_t i = 1; i < c.refinement_sups.size(); ++i) grows = grows && c.refinement_sups[i] > limit;
        c.infinite = grows;
        if (grows) c.note = "sup exceeds blowup * reference under every refinement";
    }
    c.constant = c.infinite ? std::numeric_limits<double>::infinity() : c.sup_value;
    return c;
}

}  // namespace

std::vector<ConePoint> TGrid::points(const ConeDescriptor& cone) const {
    std::vector<ConePoint> out;
    const int depth = depth_of(cone, *this);
    for (int k = k_min; k <= k_max; ++k)
        for (int j = 0; j <= depth; ++j) out.push_back(std::ldexp(1.0, k) * ray_direction(cone, j));
    return out;
}

double multiplier(const RadialDensity& d, const ConePoint& t, double tolerance) {
    check_density(d);
    const auto& cone = d.cone;
    require_dim(cone, t, "multiplier");
    if (!contains(cone, t)) throw DomainError("multiplier: t must lie in the cone");
    auto f = [&](const ConePoint& y) { return d.phi(y) * std::exp(-2.0 * cone.pair(t, y)); };
    auto r = numerics::integrate_cone(cone, f, support_region(d), spec_for(tolerance),
                                      std::min(1.0, 0.5 / pair_scale(cone, t)));
    return numerics::require_converged(r, "multiplier");
}

CarlesonCertificate multiplier_sup(const RadialDensity& d, const RadialOptions& opts) {
    check_density(d);
    return grid_sup(d.cone, [&](const ConePoint& t, double tol) { return multiplier(d, t, tol); }, opts,
                    Condition::Multiplier);
}

namespace {

// Lorentz cone with t and the bound unordered: the slice y1 = s of {y < t, y < bound} is an intersection
// of three discs, integrated column by column with u = lo + (hi - lo)(1 - cos theta)/2.
double lorentz_two_interval_mass(const RadialDensity& d, const ConePoint& t, const ConePoint& b, double tol) {
    struct Disc {
        double x, y, r;
    };
    const auto& g = numerics::gauss_legendre(16);
    const double inf = std::numeric_limits<double>::infinity();
    const QuadratureSpec outer = spec_for(tol), inner = outer.scaled(0.1);
    auto slice = [&](double s) {
        const std::array<Disc, 3> discs{{{0.0, 0.0, s}, {t[1], t[2], t[0] - s}, {b[1], b[2], b[0] - s}}};
        double lo = -inf, hi = inf;
        for (const auto& c : discs) lo = std::max(lo, c.x - c.r), hi = std::min(hi, c.x + c.r);
        if (!(hi > lo)) return 0.0;
        auto column = [&](double theta) {
            const double u = lo + 0.5 * (hi - lo) * (1.0 - std::cos(theta));
            double vlo = -inf, vhi = inf;
            for (const auto& c : discs) {
                const double h = std::sqrt(std::max(0.0, c.r * c.r - (u - c.x) * (u - c.x)));
                vlo = std::max(vlo, c.y - h), vhi = std::min(vhi, c.y + h);
            }
            if (!(vhi > vlo)) return 0.0;
            const double mid = 0.5 * (vlo + vhi), half = 0.5 * (vhi - vlo);
            double acc = 0.0;
            for (std::size_t k = 0; k < g.nodes.size(); ++k) acc += g.weights[k] * d.phi(ConePoint{s, u, mid + half * g.nodes[k]});
            return acc * half * 0.5 * (hi - lo) * std::sin(theta);
        };
        return numerics::require_converged(numerics::integrate(column, 0.0, std::numbers::pi, inner), "mass_below slice");
    };
    return numerics::require_converged(numerics::integrate(slice, 0.0, std::min(t[0], b[0]), outer), "mass_below");
}

}  // namespace

double mass_below(const RadialDensity& d, const ConePoint& t, double tolerance) {
    check_density(d);
    const auto& cone = d.cone;
    require_dim(cone, t, "mass_below");
    if (!contains(cone, t)) throw DomainError("mass_below: t must lie in the cone");
    ConePoint upper = t;
    if (d.bound) {
        if (*d.bound == t || precedes(cone, *d.bound, t))
            upper = *d.bound;
        else if (cone.kind() == ConeKind::HalfLine || cone.kind() == ConeKind::Octant2)
            for (std::size_t i = 0; i < cone.dim(); ++i) upper[i] = std::min(upper[i], (*d.bound)[i]);
        else if (cone.kind() == ConeKind::Lorentz3 && !precedes(cone, t, *d.bound))
            return lorentz_two_interval_mass(d, t, *d.bound, tolerance);
    }
    auto r = numerics::integrate_cone(cone, d.phi, ConeRegion::below(upper), spec_for(tolerance));
    return numerics::require_converged(r, "mass_below");
}

CarlesonCertificate radial_integral(const RadialDensity& d, const RadialOptions& opts) {
    check_density(d);
    const auto& cone = d.cone;
    CarlesonCertificate c;
    c.condition = Condition::Integral;
    c.witness = cone.base_point();
    c.reference_value = mass_below(d, cone.base_point(), opts.tolerance);
    double prev = c.reference_value;
    c.refinement_sups.push_back(prev);
    int stable = 0, large = 0;
    for (int k = 1; k <= 60; ++k) {
        const ConePoint t = std::ldexp(1.0, k) * cone.base_point();
        const double v = mass_below(d, t, opts.tolerance);
        c.refinement_sups.push_back(v);
        c.witness = t;
        stable = std::abs(v - prev) <= 10.0 * opts.tolerance * std::abs(v) ? stable + 1 : 0;
        large = v > opts.blowup * c.reference_value ? large + 1 : 0;
        prev = v;
        if (stable >= 2) {
            c.sup_value = c.constant = v;
            return c;
        }
        if (large >= 2) {
            c.sup_value = v;
            c.infinite = true;
            c.constant = std::numeric_limits<double>::infinity();
            c.note = "exhaustion exceeds blowup * reference on two successive dilations";
            return c;
        }
    }
    c.sup_value = c.constant = prev;
    c.note = "exhaustion neither stabilised nor blew up within 2^60";
    return c;
}

double necessary_ratio(const RadialDensity& d, double alpha, const ConePoint& t, double tolerance) {
    check_density(d);
    const auto& cone = d.cone;
    require_dim(cone, t, "necessary_ratio");
    if (!contains(cone, t)) throw DomainError("necessary_ratio: t must lie in the cone");
    const double b = -2.0 * alpha + cone.dim_over_rank();
    auto f = [&](const ConePoint& y) { return std::pow(det(cone, y + t), b) * d.phi(y); };
    auto r = numerics::integrate_cone(cone, f, support_region(d), spec_for(tolerance),
                                      std::min(1.0, pair_scale(cone, t)));
    return numerics::require_converged(r, "necessary_ratio") / std::pow(det(cone, t), b);
}

CarlesonCertificate necessary_sup(const RadialDensity& d, double alpha, const RadialOptions& opts) {
    check_density(d);
    if (!(alpha > d.cone.dim_over_rank() - 0.5)) throw DomainError("necessary_sup: alpha must exceed n/r - 1/2");
    return grid_sup(d.cone, [&](const ConePoint& t, double tol) { return necessary_ratio(d, alpha, t, tol); },
                    opts,
                    Condition::NecessaryIneq);
}

double chain_constant(const ConeDescriptor& cone, double alpha) {
    const double b = -2.0 * alpha + cone.dim_over_rank();
    // y < t gives t < y + t < 2t, and det(2t) = 2^r det(t)
    return b < 0.0 ? std::pow(2.0, -double(cone.rank()) * b) : 1.0;
}

std::vector<ChainPoint> chain_check(const RadialDensity& d, double alpha, double sup_value,
                                    const RadialOptions& opts) {
    const double c = chain_constant(d.cone, alpha);
    std::vector<ChainPoint> out;
    for (const auto& t : opts.grid.points(d.cone)) {
        ChainPoint p;
        p.t = t;
        p.mass_below = mass_below(d, t, opts.tolerance);
        p.bound = c * sup_value;
        p.holds = p.mass_below <= p.bound * (1.0 + 10.0 * opts.tolerance);
        out.push_back(p);
    }
    return out;
}

}  // namespace carleson::radial
