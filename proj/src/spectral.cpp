#include "carleson/spectral.hpp"

#include "carleson/errors.hpp"
#include "carleson/numerics/cone_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace carleson::spectral {

using numerics::QuadratureSpec;

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Match: return "Match";
        case Verdict::Mismatch: return "Mismatch";
        case Verdict::Unstated: return "Unstated";
        case Verdict::Divergent: return "Divergent";
    }
    return "?";
}

CalibrationRecord make_record(std::string name, std::optional<double> paper, double derived, double spread,
                              double tolerance) {
    CalibrationRecord r;
    r.constant_name = std::move(name);
    r.paper_value = paper;
    r.derived_value = derived;
    r.relative_spread = std::max(spread, 0.0);
    r.tolerance = tolerance;
    if (!paper)
        r.verdict = Verdict::Unstated;
    else
        r.verdict = std::abs(*paper - derived) <= tolerance * std::abs(derived) ? Verdict::Match : Verdict::Mismatch;
    return r;
}

double relative_spread(std::span<const double> v) {
    if (v.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= double(v.size());
    return mean == 0.0 ? 0.0 : (*hi - *lo) / std::abs(mean);
}

void WeightExponents::validate(const ConeDescriptor& cone) const {
    if (!(alpha > -1.0)) throw DomainError("weight: alpha must exceed -1");
    if (!(alpha_vec[0] > -1.0 && alpha_vec[1] > -1.0)) throw DomainError("weight: alpha_1, alpha_2 must exceed -1");
    if (!(nu > cone.dim_over_rank() - 1.0)) throw DomainError("weight: nu must exceed n/r - 1");
    if (m < 0) throw DomainError("weight: m must be non-negative");
    if (!(p > 1.0 && q > 1.0)) throw DomainError("weight: p and q must exceed 1");
}

BergmanWeight BergmanWeight::from_nu(const ConeDescriptor& cone, double nu) {
    const double a = nu - cone.dim_over_rank();
    switch (cone.kind()) {
        case ConeKind::HalfLine: return half_plane(a);
        case ConeKind::Octant2: return product(a, a);
        default: return BergmanWeight::cone(nu);
    }
}

std::string BergmanWeight::describe() const {
    std::ostringstream os;
    if (nu) {
        os << "nu=" << *nu;
        return os.str();
    }
    os << "alpha=(";
    for (std::size_t i = 0; i < axis_powers.size(); ++i) os << (i ? "," : "") << axis_powers[i];
    os << ")";
    return os.str();
}

namespace {

void check_weight(const SpectralFunction& f, const BergmanWeight& w) {
    const auto& cone = f.cone();
    if (w.nu) {
        if (!(*w.nu > cone.dim_over_rank() - 1.0)) throw DomainError("Bergman weight: nu must exceed n/r - 1");
        return;
    }
    if (cone.kind() != ConeKind::HalfLine && cone.kind() != ConeKind::Octant2)
        throw DomainError("Bergman weight: axis powers need a product cone");
    if (w.axis_powers.size() != cone.dim()) throw DomainError("Bergman weight: one power per axis required");
    for (double a : w.axis_powers)
        if (!(a > -1.0)) throw DomainError("Bergman weight: powers must exceed -1");
}

std::vector<double> axis_powers(const SpectralFunction& f, const BergmanWeight& w) {
    if (!w.nu) return w.axis_powers;
    if (f.cone().kind() == ConeKind::HalfLine || f.cone().kind() == ConeKind::Octant2)
        return BergmanWeight::from_nu(f.cone(), *w.nu).axis_powers;
    return {};
}

double two_pi_pow(std::size_t n) { return std::pow(2.0 * std::numbers::pi, double(n)); }

QuadratureSpec spec_for(double tol) {
    QuadratureSpec s;
    s.tolerance = tol;
    return s;
}

/// Width of the first radial panel from the decay tag.
double radial_scale(const SpectralFunction& f) {
    if (f.decay().kind == DecayKind::CompactSupport) return std::max(f.decay().radius / 8.0, 1e-3);
    return 1.0 / std::max(f.decay().rate, 1e-6);
}

}  // namespace

FieldGrid laplace_eval(const SpectralFunction& f, std::span<const ConePoint> heights,
                       const numerics::SliceOptions& opts) {
    FieldGrid g{f.cone(), std::vector<numerics::Slice>(heights.size())};
    for (std::size_t i = 0; i < heights.size(); ++i) g.slices[i] = numerics::oscillatory_slice(f, heights[i], opts);
    return g;
}

Complex laplace_at(const SpectralFunction& f, const ConePoint& x, const ConePoint& y, double tolerance) {
    const auto& cone = f.cone();
    require_dim(cone, x, "laplace_at");
    require_dim(cone, y, "laplace_at");
    if (!contains(cone, y)) throw DomainError("laplace_at: height must lie strictly inside the cone");
    if (f.is_zero()) return {};
    const auto& sc = f.pairing_scale();
    auto integrand = [&](const ConePoint& t) {
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < cone.dim(); ++i) {
            re -= sc[i] * t[i] * y[i];
            im += sc[i] * t[i] * x[i];
        }
        return f(t) * std::polar(std::exp(re), im);
    };
    auto r = numerics::integrate_cone(cone, integrand, numerics::ConeRegion::whole(), spec_for(tolerance),
                                      radial_scale(f));
    return numerics::require_converged(r, "laplace_at");
}

HardyNorm hardy_norm(const SpectralFunction& f, NormSide side, const NormOptions& opts) {
    HardyNorm h;
    h.side = side;
    if (f.is_zero()) return h;
    const auto& cone = f.cone();
    if (side == NormSide::Spectral) {
        auto sq = [&](const ConePoint& t) { return std::norm(f(t)); };
        auto r = numerics::integrate_cone(cone, sq, numerics::ConeRegion::whole(), spec_for(opts.tolerance),
                                          radial_scale(f));
        h.value = two_pi_pow(cone.dim()) / f.pairing_determinant() * numerics::require_converged(r, "hardy_norm");
        h.richardson = h.raw_sup = h.value;
        return h;
    }
    for (int k = 0; k <= opts.levels; ++k) {
        const ConePoint y = std::ldexp(opts.y0, -k) * cone.base_point();
        h.heights.push_back(std::ldexp(opts.y0, -k));
        h.slice_norms.push_back(numerics::slice_l2(numerics::oscillatory_slice(f, y, opts.slice)));
    }
    const std::size_t n = h.slice_norms.size();
    for (std::size_t k = 1; k < n; ++k)
        if (h.slice_norms[k] < h.slice_norms[k - 1] * (1.0 - 1e-9)) h.monotone = false;
    const double last = h.slice_norms[n - 1], prev = n > 1 ? h.slice_norms[n - 2] : last;
    h.richardson = 2.0 * last - prev;
    h.raw_sup = *std::max_element(h.slice_norms.begin(), h.slice_norms.end());
    h.value = h.monotone ? h.richardson : h.raw_sup;
    h.lower_bound = std::abs(last - prev) > 1e-3 * std::abs(last);
    return h;
}

namespace {

/// Quadrature nodes for the integral over (0, inf) of y^a S(y) dy with S smooth and decaying.
void height_rule(double a, int n, std::vector<double>& nodes, std::vector<double>& weights) {
    const auto& g = numerics::gauss_legendre(n);
    auto add_panel = [&](double lo, double hi, auto map) {
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (int i = 0; i < n; ++i) {
            double y, jw;
            map(c + h * g.nodes[i], y, jw);
            nodes.push_back(y);
            weights.push_back(h * g.weights[i] * jw);
        }
    };
    // (0, 1]: y = v^{1/(a+1)} absorbs the weight when a < 0
    auto near = [&](double v, double& y, double& jw) {
        if (a < 0.0) {
            y = std::pow(v, 1.0 / (a + 1.0));
            jw = 1.0 / (a + 1.0);
        } else {
            y = v;
            jw = std::pow(v, a);
        }
    };
    // [1, inf): y = 1 / w
    auto far = [&](double w, double& y, double& jw) {
        y = 1.0 / w;
        jw = std::pow(y, a) / (w * w);
    };
    constexpr double near_cuts[] = {0.0, 0.125, 0.5, 1.0};
    constexpr double far_cuts[] = {0.0, 0.0625, 0.25, 1.0};
    for (int k = 0; k < 3; ++k) add_panel(near_cuts[k], near_cuts[k + 1], near);
    for (int k = 0; k < 3; ++k) add_panel(far_cuts[k], far_cuts[k + 1], far);
}

double spatial_bergman_1d(const SpectralFunction& f, double a, const NormOptions& opts) {
    auto mass = [&](double y) { return numerics::slice_l2(numerics::oscillatory_slice(f, ConePoint{y}, opts.slice)); };
    const QuadratureSpec s = spec_for(opts.height_tolerance);
    // (0, 1] with y = v^{1/(a+1)}, then y^a dy = dv / (a+1)
    auto near = numerics::integrate([&](double v) { return mass(std::pow(v, 1.0 / (a + 1.0))) / (a + 1.0); }, 0.0,
                                    1.0, s);
    auto far = numerics::integrate_to_infinity([&](double y) { return std::pow(y, a) * mass(y); }, 1.0, s, 1.0);
    return numerics::require_converged(near, "spatial Bergman norm") +
           numerics::require_converged(far, "spatial Bergman norm");
}

double spatial_bergman_2d(const SpectralFunction& f, double a1, double a2, const NormOptions& opts) {
    std::vector<double> y1, w1, y2, w2;
    height_rule(a1, opts.height_nodes, y1, w1);
    height_rule(a2, opts.height_nodes, y2, w2);
    numerics::SliceOptions so = opts.slice;
    so.min_nodes = std::min<std::size_t>(so.min_nodes, 96);
    so.pad = 1;
    std::vector<double> mass(y1.size() * y2.size());
    for (std::size_t i = 0; i < y1.size(); ++i)
        for (std::size_t j = 0; j < y2.size(); ++j)
            mass[i * y2.size() + j] = numerics::slice_l2(numerics::oscillatory_slice(f, ConePoint{y1[i], y2[j]}, so));
    double total = 0.0;
    for (std::size_t i = 0; i < y1.size(); ++i)
        for (std::size_t j = 0; j < y2.size(); ++j) total += w1[i] * w2[j] * mass[i * y2.size() + j];
    return total;
}

/// |f|^2 t^{-a} near t = 0 must vanish for the weighted integral to converge at the origin.
void probe_origin(const SpectralFunction& f, const std::vector<double>& powers) {
    const auto& cone = f.cone();
    for (std::size_t axis = 0; axis < powers.size(); ++axis) {
        auto probe = [&](double t) {
            ConePoint p(cone.dim(), 1.0);
            p[axis] = t;
            return std::norm(f(p)) * std::pow(t, -powers[axis]);
        };
        const double q1 = probe(std::ldexp(1.0, -20)), q2 = probe(std::ldexp(1.0, -40));
        if (q1 > 0.0 && q2 >= 0.5 * q1)
            throw DivergenceError("weighted spectral integral diverges at t = 0 (density does not vanish fast enough)",
                                  std::numeric_limits<double>::infinity());
    }
}

}  // namespace

double bergman_kappa_derived(const SpectralFunction& f, const BergmanWeight& w, double tolerance) {
    check_weight(f, w);
    const auto& cone = f.cone();
    const auto& sc = f.pairing_scale();
    auto powers = axis_powers(f, w);
    if (!powers.empty()) {
        double k = two_pi_pow(cone.dim());
        for (std::size_t i = 0; i < powers.size(); ++i)
            k *= std::tgamma(powers[i] + 1.0) * std::pow(2.0 * sc[i], -(powers[i] + 1.0)) / sc[i];
        return k;
    }
    const double nu = *w.nu;
    return two_pi_pow(cone.dim()) / f.pairing_determinant() * gamma_cone(cone, nu, tolerance) *
           std::pow(2.0, -double(cone.rank()) * nu);
}

double bergman_kappa_paper(const SpectralFunction& f, const BergmanWeight& w, double tolerance) {
    check_weight(f, w);
    const auto& cone = f.cone();
    auto powers = axis_powers(f, w);
    if (!powers.empty() && !w.nu) {
        double k = two_pi_pow(cone.dim());
        for (double a : powers) k *= std::tgamma(a + 1.0);
        return k;
    }
    return two_pi_pow(cone.dim()) * gamma_cone(cone, *w.nu, tolerance);
}

BergmanNorm bergman_norm(const SpectralFunction& f, const BergmanWeight& w, NormSide side, const NormOptions& opts) {
    check_weight(f, w);
    BergmanNorm b;
    b.side = side;
    const auto& cone = f.cone();
    auto powers = axis_powers(f, w);
    if (side == NormSide::Spatial) {
        if (powers.empty())
            throw DomainError("bergman_norm: spatial side is available on the half-plane and its product only");
        if (f.is_zero()) return b;
        b.value = powers.size() == 1 ? spatial_bergman_1d(f, powers[0], opts)
                                     : spatial_bergman_2d(f, powers[0], powers[1], opts);
        return b;
    }
    b.kappa_derived = bergman_kappa_derived(f, w, opts.tolerance);
    b.kappa_paper = bergman_kappa_paper(f, w, opts.tolerance);
    if (f.is_zero()) return b;
    if (!powers.empty()) probe_origin(f, powers);
    auto integrand = [&](const ConePoint& t) {
        double wt = 1.0;
        if (!powers.empty())
            for (std::size_t i = 0; i < powers.size(); ++i) wt *= std::pow(t[i], -(powers[i] + 1.0));
        else
            wt = std::pow(det(cone, t), -*w.nu);
        return std::norm(f(t)) * wt;
    };
    auto r = numerics::integrate_cone(cone, integrand, numerics::ConeRegion::whole(), spec_for(opts.tolerance),
                                      radial_scale(f));
    if (!r.converged)
        throw DivergenceError("weighted spectral integral does not converge under refinement", r.value);
    b.value = r.value;
    return b;
}

CalibrationRecord calibrate_bergman(std::span<const SpectralFunction> family, const BergmanWeight& w,
                                    const NormOptions& opts) {
    if (family.empty()) throw DomainError("calibrate_bergman: empty family");
    std::vector<double> ratios;
    double num = 0.0, den = 0.0, paper = 0.0;
    for (const auto& f : family) {
        const auto spatial = bergman_norm(f, w, NormSide::Spatial, opts);
        const auto spec = bergman_norm(f, w, NormSide::Spectral, opts);
        ratios.push_back(spatial.value / spec.value);
        num += spatial.value * spec.value;
        den += spec.value * spec.value;
        paper = spec.kappa_paper;
    }
    const double kappa = num / den;
    auto rec = make_record("kappa(" + w.describe() + ")", paper, kappa, relative_spread(ratios), 1e-3);
    rec.samples = ratios;
    std::ostringstream os;
    os.precision(17);
    os << "convention-derived kappa = " << bergman_kappa_derived(family[0], w, opts.tolerance);
    rec.note = os.str();
    return rec;
}

SpectralFunction box_apply(const SpectralFunction& f, int m) {
    if (m < 0) throw DomainError("box_apply: m must be non-negative");
    if (m == 0) return f;
    const ConeDescriptor cone = f.cone();
    const Density inner = f.density();
    Density boxed = [cone, inner, m](const ConePoint& t) {
        Complex v = inner(t);
        const double d = det(cone, t);
        for (int k = 0; k < m; ++k) v *= d;
        return v;
    };
    std::vector<Complex> values(f.values().begin(), f.values().end());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = det(cone, f.grid().node(i));
        for (int k = 0; k < m; ++k) values[i] *= d;
    }
    DecayTag decay = f.decay();
    SpectralFunction g(cone, f.grid(), std::move(boxed), decay, std::move(values));
    g = g.with_pairing_scale(f.pairing_scale());
    g.label = "box^" + std::to_string(m) + "(" + f.label + ")";
    return g;
}

CalibrationRecord box_iso_ratio(const SpectralFunction& f, int m, double tolerance) {
    const auto& cone = f.cone();
    if (m < 0 || !(2.0 * m > cone.dim_over_rank() - 1.0))
        throw DomainError("box_iso_ratio: need 2m > n/r - 1 (m = " + std::to_string(m) + ")");
    if (f.is_zero()) throw DomainError("box_iso_ratio: f must not vanish identically");
    NormOptions opts;
    opts.tolerance = tolerance;
    const SpectralFunction g = box_apply(f, m);
    const BergmanWeight w = BergmanWeight::from_nu(cone, 2.0 * m);
    const auto b = bergman_norm(g, w, NormSide::Spectral, opts);
    const auto h = hardy_norm(f, NormSide::Spectral, opts);
    const double ratio = b.kappa_derived * b.value / h.value;
    const double gamma = gamma_cone(cone, 2.0 * m, tolerance);
    auto rec = make_record("box_iso_ratio(m=" + std::to_string(m) + ")", gamma, ratio, 0.0, 1e-6);
    std::ostringstream os;
    os.precision(17);
    os << "gamma_cone(2m) = " << gamma << "; convention-adjusted gamma_cone(2m) 2^{-2mr} = "
       << gamma * std::pow(2.0, -2.0 * m * double(cone.rank()));
    rec.note = os.str();
    return rec;
}

CalibrationRecord kernel_integral_check(const ConeDescriptor& cone, double alpha, const ConePoint& y,
                                        const ConePoint& w_re, const ConePoint& w_im, double tolerance) {
    require_dim(cone, y, "kernel_integral_check");
    require_dim(cone, w_re, "kernel_integral_check");
    require_dim(cone, w_im, "kernel_integral_check");
    if (!contains(cone, y) || !contains(cone, w_im))
        throw DomainError("kernel_integral_check: y and Im w must lie in the cone");
    if (cone.kind() != ConeKind::HalfLine && cone.kind() != ConeKind::Octant2)
        throw DomainError("kernel_integral_check: available on the half-plane and its product");
    const ConePoint s = y + w_im;
    QuadratureSpec spec = spec_for(tolerance);
    // |zeta|^2 with zeta = (x - Re w) / i + s on each factor
    auto factor = [&](std::size_t i, double x) {
        const double u = x - w_re[i];
        return std::pow(u * u + s[i] * s[i], -alpha);
    };
    const std::string name = "C_alpha(" + std::string(cone.name()) + ",alpha=" + std::to_string(alpha) + ")";
    double value = 0.0;
    try {
        if (cone.dim() == 1) {
            auto r = numerics::integrate_real_line([&](double x) { return factor(0, x); }, w_re[0], spec, s[0]);
            value = numerics::require_converged(r, "kernel_integral_check");
        } else {
            bool ok = true;
            auto outer = [&](double x1) {
                auto inner = numerics::integrate_real_line(
                    [&](double x2) {
                        const double u1 = x1 - w_re[0], u2 = x2 - w_re[1];
                        return std::pow((u1 * u1 + s[0] * s[0]) * (u2 * u2 + s[1] * s[1]), -alpha);
                    },
                    w_re[1], spec.scaled(0.1), s[1]);
                ok = ok && inner.converged;
                return inner.value;
            };
            auto r = numerics::integrate_real_line(outer, w_re[0], spec, s[0]);
            if (!ok) r.converged = false;
            value = numerics::require_converged(r, "kernel_integral_check");
        }
    } catch (const DivergenceError& e) {
        CalibrationRecord rec = make_record(name, std::nullopt, std::numeric_limits<double>::infinity(), 0.0, tolerance);
        rec.verdict = Verdict::Divergent;
        rec.note = e.what();
        return rec;
    }
    const double ref = std::pow(det(cone, s), -2.0 * alpha + cone.dim_over_rank());
    auto rec = make_record(name, std::nullopt, value / ref, 0.0, tolerance);
    rec.samples = {value};
    return rec;
}

}  // namespace carleson::spectral
