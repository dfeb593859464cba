#include "carleson/restriction.hpp"

#include "carleson/errors.hpp"
#include "carleson/numerics/gauss_legendre.hpp"
#include "carleson/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace carleson::restriction {

using numerics::QuadratureSpec;
using spectral::CalibrationRecord;
using spectral::NormSide;

namespace {

constexpr double kPi = std::numbers::pi;

QuadratureSpec spec_for(double tol) {
    QuadratureSpec s;
    s.tolerance = tol;
    return s;
}

void require_rank2(const ConeDescriptor& cone, const char* what) {
    if (cone.kind() != ConeKind::Lorentz3 && cone.kind() != ConeKind::Spherical3)
        throw DomainError(std::string(what) + ": needs the Lorentz or the spherical cone");
}

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

std::size_t fiber_nodes(int m) { return std::size_t(2 * m + 4); }

}  // namespace

Complex fiber_integral(const ConeDescriptor& cone, const Density& f, int m, const ConePoint& base, double tol) {
    require_rank2(cone, "fiber_integral");
    if (m < 0) throw DomainError("fiber_integral: m must be non-negative");
    const QuadratureSpec outer = spec_for(tol), inner = spec_for(0.1 * tol);
    if (cone.kind() == ConeKind::Lorentz3) {
        const double t1 = base[0];
        if (!(t1 > 0.0)) return {};
        auto radial = [&](double rho) {
            auto ring = [&](double th) {
                return f(ConePoint{t1, rho * std::cos(th), rho * std::sin(th)}) * ipow(t1 * t1 - rho * rho, m);
            };
            return rho * numerics::require_converged(numerics::integrate_periodic(ring, 2.0 * kPi, inner),
                                                     "fiber_integral");
        };
        return numerics::require_converged(numerics::integrate(radial, 0.0, t1, outer), "fiber_integral");
    }
    const double a = base[0] * base[1];
    if (!(base[0] > 0.0 && base[1] > 0.0)) return {};
    const double s = std::sqrt(a);
    auto line = [&](double t3) { return f(ConePoint{base[0], base[1], t3}) * ipow(a - t3 * t3, m); };
    return numerics::require_converged(numerics::integrate(line, -s, s, outer), "fiber_integral");
}

SpectralFunction restrict_lorentz(const RestrictionTask& task) {
    if (task.cone.kind() != ConeKind::Lorentz3 || task.f.cone().kind() != ConeKind::Lorentz3)
        throw DomainError("restrict_lorentz: density must live on the Lorentz cone");
    if (task.m < 0) throw DomainError("restrict_lorentz: m must be non-negative");
    const SpectralFunction& f = task.f;
    const ConeDescriptor half = ConeDescriptor::half_line();
    const int m = task.m;
    if (f.grid().layout() != SpectralGrid::Layout::Fiber)
        throw DomainError("restrict_lorentz: density must be sampled on a fiber grid");
    const UniformAxis base = f.grid().axes()[0];
    SpectralGrid grid = SpectralGrid::box(half, {UniformAxis{base.step, base.count + 1}});
    std::vector<Complex> values(base.count + 1);
    const std::size_t per = f.grid().fiber_size();
    auto v = f.values();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t bb = 0; bb < std::ptrdiff_t(base.count); ++bb) {
        const std::size_t b = std::size_t(bb);
        Complex sum{};
        for (std::size_t k = 0; k < per; ++k) {
            const std::size_t i = b * per + k;
            const ConePoint t = f.grid().node(i);
            const double rho2 = t[1] * t[1] + t[2] * t[2];
            sum += f.grid().fiber_weight(i) * v[i] * ipow(t[0] * t[0] - rho2, m);
        }
        values[b + 1] = sum;
    }
    const ConeDescriptor cone = task.cone;
    const Density fd = f.density();
    Density g = [cone, fd, m](const ConePoint& t) { return fiber_integral(cone, fd, m, ConePoint{t[0]}); };
    SpectralFunction out(half, grid, std::move(g), f.decay(), std::move(values));
    out.label = "R box^" + std::to_string(m) + "(" + f.label + ")";
    return out;
}

SpectralFunction restrict_spherical(const RestrictionTask& task) {
    if (task.cone.kind() != ConeKind::Spherical3 || task.f.cone().kind() != ConeKind::Spherical3)
        throw DomainError("restrict_spherical: density must live on the spherical cone");
    if (task.m < 0) throw DomainError("restrict_spherical: m must be non-negative");
    const SpectralFunction& f = task.f;
    const int m = task.m;
    if (f.grid().layout() != SpectralGrid::Layout::Fiber)
        throw DomainError("restrict_spherical: density must be sampled on a fiber grid");
    const ConeDescriptor oct = ConeDescriptor::octant2();
    const UniformAxis a1 = f.grid().axes()[0], a2 = f.grid().axes()[1];
    SpectralGrid grid = SpectralGrid::box(oct, {UniformAxis{a1.step, a1.count + 1}, UniformAxis{a2.step, a2.count + 1}});
    std::vector<Complex> values((a1.count + 1) * (a2.count + 1));
    const std::size_t per = f.grid().fiber_size();
    auto v = f.values();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t bb = 0; bb < std::ptrdiff_t(a1.count * a2.count); ++bb) {
        const std::size_t b = std::size_t(bb);
        Complex sum{};
        for (std::size_t k = 0; k < per; ++k) {
            const std::size_t i = b * per + k;
            const ConePoint t = f.grid().node(i);
            sum += f.grid().fiber_weight(i) * v[i] * ipow(t[0] * t[1] - t[2] * t[2], m);
        }
        const std::size_t i1 = b / a2.count + 1, i2 = b % a2.count + 1;
        values[i1 * (a2.count + 1) + i2] = sum;
    }
    const ConeDescriptor cone = task.cone;
    const Density fd = f.density();
    Density g = [cone, fd, m](const ConePoint& t) { return fiber_integral(cone, fd, m, ConePoint{t[0], t[1]}); };
    SpectralFunction out(oct, grid, std::move(g), f.decay(), std::move(values));
    out = out.with_pairing_scale({0.5, 0.5, 1.0});
    out.label = "R box^" + std::to_string(m) + "(" + f.label + ")";
    return out;
}

SpectralFunction restrict_fibers(const RestrictionTask& task) {
    return task.cone.kind() == ConeKind::Lorentz3 ? restrict_lorentz(task) : restrict_spherical(task);
}

namespace {

/// Stride keeping at most cap base nodes.
std::size_t base_stride(std::size_t count, std::size_t cap) {
    std::size_t s = 1;
    while ((count - 1) / s > cap) s *= 2;
    return s;
}

void probe_weight(const SpectralFunction& g, double power, const char* what) {
    // |g|^2 t^{-power} must vanish at the origin along each axis
    const std::size_t n = g.cone().dim();
    for (std::size_t axis = 0; axis < n; ++axis) {
        auto q = [&](double t) {
            ConePoint p(n, 1.0);
            p[axis] = t;
            return std::norm(g(p)) * std::pow(t, -power);
        };
        const double q1 = q(std::ldexp(1.0, -20)), q2 = q(std::ldexp(1.0, -40));
        if (q1 > 0.0 && q2 >= 0.5 * q1)
            throw DivergenceError(std::string(what) + ": weighted integral of |g|^2 diverges at the origin",
                                  std::numeric_limits<double>::infinity());
    }
}

}  // namespace

SpectralFunction extend_lorentz(const ExtensionTask& task) {
    const SpectralFunction& g = task.g;
    const int m = task.m;
    if (task.cone.kind() != ConeKind::Lorentz3) throw DomainError("extend_lorentz: target must be the Lorentz cone");
    if (g.cone().kind() != ConeKind::HalfLine || g.grid().layout() != SpectralGrid::Layout::Box)
        throw DomainError("extend_lorentz: g must be sampled on the half-line");
    if (m < 0) throw DomainError("extend_lorentz: m must be non-negative");
    probe_weight(g, 4.0 * m + 2.0, "extend_lorentz");
    const UniformAxis ax = g.grid().axes()[0];
    const std::size_t stride = base_stride(ax.count, 8192);
    const std::size_t base_count = (ax.count - 1) / stride;
    const ConeDescriptor cone = ConeDescriptor::lorentz3();
    SpectralGrid grid = SpectralGrid::fiber(cone, {ax.step * double(stride), base_count}, fiber_nodes(m), 8);
    const double c = (m + 1) / kPi;
    std::vector<Complex> values(grid.size());
    auto gv = g.values();
    const std::size_t per = grid.fiber_size();
    for (std::size_t b = 0; b < base_count; ++b) {
        const double t1 = double(b + 1) * ax.step * double(stride);
        const Complex h = c * gv[(b + 1) * stride] / ipow(t1, 2 * m + 2);
        for (std::size_t k = 0; k < per; ++k) values[b * per + k] = h;
    }
    const Density gd = g.density();
    Density h = [gd, c, m](const ConePoint& t) { return c * gd(ConePoint{t[0]}) / ipow(t[0], 2 * m + 2); };
    SpectralFunction out(cone, grid, std::move(h), g.decay(), std::move(values));
    out.label = "E_" + std::to_string(m) + "(" + g.label + ")";
    return out;
}

SpectralFunction extend_spherical(const ExtensionTask& task) {
    const SpectralFunction& g = task.g;
    const int m = task.m;
    if (task.cone.kind() != ConeKind::Spherical3)
        throw DomainError("extend_spherical: target must be the spherical cone");
    if (g.cone().kind() != ConeKind::Octant2 || g.grid().layout() != SpectralGrid::Layout::Box)
        throw DomainError("extend_spherical: g must be sampled on the octant");
    if (m < 0) throw DomainError("extend_spherical: m must be non-negative");
    probe_weight(g, 2.0 * m + 0.5, "extend_spherical");
    const UniformAxis a1 = g.grid().axes()[0], a2 = g.grid().axes()[1];
    const std::size_t s1 = base_stride(a1.count, 256), s2 = base_stride(a2.count, 256);
    const std::size_t n1 = (a1.count - 1) / s1, n2 = (a2.count - 1) / s2;
    const ConeDescriptor cone = ConeDescriptor::spherical3();
    SpectralGrid grid =
        SpectralGrid::spherical_fiber({a1.step * double(s1), n1}, {a2.step * double(s2), n2}, fiber_nodes(m));
    const double c = 1.0 / (2.0 * moment_constant(m));
    std::vector<Complex> values(grid.size());
    auto gv = g.values();
    const std::size_t per = grid.fiber_size();
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            const double t1 = double(i + 1) * a1.step * double(s1), t2 = double(j + 1) * a2.step * double(s2);
            const Complex h = c * gv[((i + 1) * s1) * a2.count + (j + 1) * s2] / std::pow(t1 * t2, m + 0.5);
            for (std::size_t k = 0; k < per; ++k) values[(i * n2 + j) * per + k] = h;
        }
    const Density gd = g.density();
    Density h = [gd, c, m](const ConePoint& t) {
        return c * gd(ConePoint{t[0], t[1]}) / std::pow(t[0] * t[1], m + 0.5);
    };
    SpectralFunction out(cone, grid, std::move(h), g.decay(), std::move(values));
    out.label = "E_" + std::to_string(m) + "(" + g.label + ")";
    return out;
}

SpectralFunction extend(const ExtensionTask& task) {
    require_rank2(task.cone, "extend");
    return task.cone.kind() == ConeKind::Lorentz3 ? extend_lorentz(task) : extend_spherical(task);
}

double half_disc_moment(double a, int k) {
    if (!(a > 0.0)) throw DomainError("half_disc_moment: a must be positive");
    if (k < 0) throw DomainError("half_disc_moment: k must be non-negative");
    const auto& rule = numerics::gauss_legendre(std::max(2, k + 1));
    const double h = 0.5 * std::sqrt(a);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = h * (rule.nodes[i] + 1.0);
        s += rule.weights[i] * ipow(a - x * x, k);
    }
    return h * s;
}

double moment_constant(int k) {
    if (k < 0) throw DomainError("moment_constant: k must be non-negative");
    return 0.5 * std::exp(std::lgamma(k + 1.0) + std::lgamma(0.5) - std::lgamma(k + 1.5));
}

double disc_moment(double t1, int k) {
    const Density one = [](const ConePoint&) { return Complex(1.0); };
    return fiber_integral(ConeDescriptor::lorentz3(), one, k, ConePoint{t1}).real();
}

spectral::BergmanWeight restricted_weight(const ConeDescriptor& cone, int m) {
    require_rank2(cone, "restricted_weight");
    if (cone.kind() == ConeKind::Lorentz3) return spectral::BergmanWeight::half_plane(4.0 * m + 1.0);
    return spectral::BergmanWeight::product(2.0 * m - 0.5, 2.0 * m - 0.5);
}

double restriction_bound(const ConeDescriptor& cone, int m) {
    require_rank2(cone, "restriction_bound");
    if (cone.kind() == ConeKind::Lorentz3) return std::tgamma(4.0 * m + 2.0) / (std::ldexp(1.0, 4 * m + 4) * kPi * (2 * m + 1));
    const double g = std::tgamma(2.0 * m + 0.5);
    return g * g * 2.0 * moment_constant(2 * m) / (2.0 * kPi);
}

double extension_ratio(const ConeDescriptor& cone, int m) {
    require_rank2(cone, "extension_ratio");
    if (cone.kind() == ConeKind::Lorentz3)
        return 4.0 * kPi * (m + 1.0) * (m + 1.0) * std::ldexp(1.0, 4 * m + 2) / std::tgamma(4.0 * m + 2.0);
    const double a = std::tgamma(m + 1.5), b = std::tgamma(m + 1.0) * std::tgamma(2.0 * m + 0.5);
    return 4.0 * a * a / (b * b);
}

namespace {

double restricted_norm(const SpectralFunction& g, const ConeDescriptor& cone, int m, double tol) {
    spectral::NormOptions o;
    o.tolerance = tol;
    const auto b = spectral::bergman_norm(g, restricted_weight(cone, m), NormSide::Spectral, o);
    return b.kappa_derived * b.value;
}

double hardy(const SpectralFunction& f, double tol) {
    spectral::NormOptions o;
    o.tolerance = tol;
    return spectral::hardy_norm(f, NormSide::Spectral, o).value;
}

std::string describe(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

RestrictionCheck verify_restriction_inequality(const ConeDescriptor& cone, int m,
                                               std::span<const SpectralFunction> family, double tol) {
    require_rank2(cone, "verify_restriction_inequality");
    if (family.empty()) throw DomainError("verify_restriction_inequality: empty test family");
    RestrictionCheck c;
    c.bound = restriction_bound(cone, m);
    for (const auto& f : family) {
        NormPair p;
        p.label = f.label;
        if (f.is_zero()) {
            p.skipped = true;
            c.entries.push_back(p);
            continue;
        }
        const SpectralFunction g = restrict_fibers({cone, m, f});
        // G = R box^m F lives on the octant with the pairing of the spherical cone restricted to it.
        p.restricted = restricted_norm(cone.kind() == ConeKind::Spherical3 ? g.with_pairing_scale({0.5, 0.5, 1.0}) : g,
                                       cone, m, tol);
        p.hardy = hardy(f, tol);
        p.ratio = p.restricted / p.hardy;
        c.max_ratio = std::max(c.max_ratio, p.ratio);
        c.holds = c.holds && p.ratio <= c.bound * (1.0 + 1e3 * tol);
        c.entries.push_back(p);
    }
    const std::string tag = std::string(cone.name()) + ",m=" + std::to_string(m);
    if (cone.kind() == ConeKind::Lorentz3) {
        const double stated = std::tgamma(4.0 * m + 2.0) / (std::ldexp(1.0, 4 * m + 4) * kPi * (2 * m + 1));
        auto r = spectral::make_record("restriction_bound(" + tag + ")", stated, c.max_ratio, 0.0, 1e-3);
        r.note = "max ratio over the family; Cauchy-Schwarz bound " + describe(c.bound) +
                 "; stated constant read as the bound for the squared norm";
        c.records.push_back(r);
    } else {
        const double fact = std::tgamma(2.0 * m + 1.0), g = std::tgamma(2.0 * m + 0.5);
        const double statement = 4.0 * std::pow(kPi, 2.5) * fact * g / (2.0 * m + 0.5);
        const double closing = fact * g / (2.0 * std::sqrt(kPi) * (2.0 * m + 0.5));
        auto r = spectral::make_record("restriction_bound(" + tag + ")", statement, c.max_ratio, 0.0, 1e-3);
        r.note = "max ratio over the family; Cauchy-Schwarz bound " + describe(c.bound) + "; statement form";
        c.records.push_back(r);
        auto r2 = spectral::make_record("restriction_bound_closing_form(" + tag + ")", closing, c.max_ratio, 0.0, 1e-3);
        r2.note = "second stated form (end of the estimate)";
        c.records.push_back(r2);
    }
    for (auto& r : c.records)
        for (const auto& e : c.entries)
            if (!e.skipped) r.samples.push_back(e.ratio);
    return c;
}

ExtensionCheck verify_extension_identity(const ConeDescriptor& cone, int m,
                                         std::span<const SpectralFunction> family, double tol) {
    require_rank2(cone, "verify_extension_identity");
    if (family.empty()) throw DomainError("verify_extension_identity: empty test family");
    ExtensionCheck c;
    std::vector<double> ratios;
    for (const auto& g : family) {
        NormPair p;
        p.label = g.label;
        const SpectralFunction f = extend({cone, m, g});
        // G = R box^m F lives on the octant with the pairing of the spherical cone restricted to it.
        p.restricted = restricted_norm(cone.kind() == ConeKind::Spherical3 ? g.with_pairing_scale({0.5, 0.5, 1.0}) : g,
                                       cone, m, tol);
        p.hardy = hardy(f, tol);
        p.ratio = p.hardy / p.restricted;
        ratios.push_back(p.ratio);
        c.entries.push_back(p);
    }
    double mean = 0.0;
    for (double r : ratios) mean += r;
    mean /= double(ratios.size());
    const std::string tag = std::string(cone.name()) + ",m=" + std::to_string(m);
    const double spread = spectral::relative_spread(ratios);
    if (cone.kind() == ConeKind::Lorentz3) {
        const double stated = (m + 1.0) * (m + 1.0) / (2.0 * kPi * kPi * std::tgamma(4.0 * m + 2.0));
        c.record = spectral::make_record("extension_ratio(" + tag + ")", stated, mean, spread, 1e-3);
        c.record.note = "convention-derived ratio " + describe(extension_ratio(cone, m));
        auto alt = spectral::make_record("extension_ratio_doubled_form(" + tag + ")", 4.0 * stated, mean, spread, 1e-3);
        alt.note = "variant with an extra factor 2 on the unsquared norm, used in the box-Carleson argument";
        c.alternatives.push_back(alt);
    } else {
        const double a = std::tgamma(m + 1.5), b = std::tgamma(2.0 * m + 0.5) * std::tgamma(m + 1.0);
        const double stated = a * a / (4.0 * kPi * kPi * b * b);
        c.record = spectral::make_record("extension_ratio(" + tag + ")", stated, mean, spread, 1e-3);
        c.record.note = "convention-derived ratio " + describe(extension_ratio(cone, m)) +
                        "; G carries pairing scale 1/2 (argument dilation z -> z/2 against the octant transform)";
    }
    c.record.samples = ratios;
    for (auto& r : c.alternatives) r.samples = ratios;
    return c;
}

double round_trip_error(const ConeDescriptor& cone, int m, const SpectralFunction& g, unsigned seed) {
    const SpectralFunction f = extend({cone, m, g});
    const SpectralFunction back = restrict_fibers({cone, m, f});
    double gmax = 0.0, err = 0.0;
    const auto& bg = back.grid();
    // interior nodes of the restricted grid coincide with the strided base nodes of g
    for (std::size_t i = 0; i < bg.size(); ++i) {
        const ConePoint t = bg.node(i);
        bool interior = true;
        for (std::size_t d = 0; d < t.size(); ++d) interior = interior && t[d] > 0.0;
        if (!interior) continue;
        const Complex ref = g(t);
        gmax = std::max(gmax, std::abs(ref));
        err = std::max(err, std::abs(back.values()[i] - ref));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const auto& ax = g.grid().axes();
    for (int k = 0; k < 16; ++k) {
        ConePoint t(g.cone().dim());
        for (std::size_t d = 0; d < t.size(); ++d) t[d] = u(rng) * 0.5 * ax[d].extent();
        const Complex ref = g(t);
        gmax = std::max(gmax, std::abs(ref));
        err = std::max(err, std::abs(back(t) - ref));
    }
    return gmax > 0.0 ? err / gmax : err;
}

double point_mass_box_sup(double height, double alpha) {
    if (!(height > 0.0)) throw DomainError("point_mass_box_sup: height must be positive");
    if (!(alpha > -1.0)) throw DomainError("point_mass_box_sup: alpha must exceed -1");
    // Q_I contains the mass iff |I| > height (I centred at the mass); V_alpha(Q_I) = |I|^{alpha+2}/(alpha+1)
    double best = 0.0;
    for (int k = 0; k <= 60; ++k) {
        const double len = height * (1.0 + std::ldexp(1.0, -k / 2) * (k % 2 ? 0.75 : 1.0));
        best = std::max(best, (alpha + 1.0) / std::pow(len, alpha + 2.0));
    }
    return best;
}

ChainResult box_hardy_chain(const SpectralFunction& f, int m, double tol) {
    if (f.cone().kind() != ConeKind::Lorentz3) throw DomainError("box_hardy_chain: density must be on the Lorentz cone");
    ChainResult r;
    r.m = m;
    const double alpha = 4.0 * m + 1.0;
    r.carleson_sup = point_mass_box_sup(1.0, alpha);
    r.embedding_constant = r.carleson_sup / (4.0 * kPi);
    const SpectralFunction boxed = spectral::box_apply(f, m);
    const Complex v = spectral::laplace_at(boxed, ConePoint{0.0, 0.0, 0.0}, ConePoint{1.0, 0.0, 0.0}, tol);
    r.point_value = std::norm(v);
    const SpectralFunction g = restrict_lorentz({f.cone(), m, f});
    r.embedding_rhs = r.embedding_constant * restricted_norm(g, f.cone(), m, tol);
    r.hardy_rhs = r.embedding_constant * restriction_bound(f.cone(), m) * hardy(f, tol);
    const double slack = 1.0 + 1e3 * tol;
    r.holds = r.point_value <= r.embedding_rhs * slack && r.embedding_rhs <= r.hardy_rhs * slack;
    return r;
}

}  // namespace carleson::restriction
