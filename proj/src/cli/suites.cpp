#include "carleson/cli.hpp"

#include "carleson/dyadic.hpp"
#include "carleson/radial.hpp"
#include "carleson/restriction.hpp"
#include "carleson/spectral.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

namespace carleson::cli {

namespace {

using report::CheckRecord;
using report::VerificationReport;
using Json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

std::string num(double v, int digits = 6) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

std::string padded(std::size_t i, int width) {
    std::ostringstream os;
    os << std::setw(width) << std::setfill('0') << i;
    return os.str();
}

double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

std::vector<ConeKind> cones(const SuiteParams& p, const std::vector<std::string>& fallback) {
    std::vector<ConeKind> out;
    for (const auto& w : p.words("cone", p.words("domain", fallback))) {
        if (w == "halfplane" || w == "half-plane") out.push_back(ConeKind::HalfLine);
        else out.push_back(parse_cone_kind(w));
    }
    return out;
}

// t^a e^{-b t}, a >= 1, on the half-line.
SpectralFunction power_exp(double a, double b) {
    return make_spectral(
        ConeDescriptor::half_line(), [a, b](const ConePoint& t) { return Complex(std::pow(t[0], a) * std::exp(-b * t[0])); },
        DecayTag::exponential(b), {}, "t^" + num(a) + " e^-" + num(b) + "t");
}

const std::vector<std::pair<double, double>> kHalfLineFamily{{1, 1}, {2, 1}, {1, 2}, {3, 1.5}, {1.5, 0.75}};

// ---------------------------------------------------------------- gamma

VerificationReport gamma_suite(const SuiteParams& p) {
    VerificationReport rep;
    const double tol = p.number("tol", 1e-6);
    const std::string anchor = "cone gamma function as a Laplace integral of a power of the determinant";
    const auto kinds = cones(p, {"halfline", "octant", "lorentz", "spherical"});
    std::mt19937_64 rng(std::uint64_t(p.integer("seed", 1)));
    for (ConeKind k : kinds) {
        const ConeDescriptor c = ConeDescriptor::of(k);
        const std::string base = "gamma/" + std::string(c.name());
        struct Case {
            double nu, expected;
            const char* note;
        };
        std::vector<Case> cases;
        switch (k) {
            case ConeKind::HalfLine:
                cases = {{2.0, 1.0, "Gamma(2)"}, {0.5, std::sqrt(kPi), "Gamma(1/2)"}};
                break;
            case ConeKind::Octant2: cases = {{2.0, 1.0, "Gamma(2)^2"}, {1.5, std::pow(std::tgamma(1.5), 2), "Gamma(3/2)^2"}}; break;
            case ConeKind::Lorentz3: cases = {{2.0, 4.0 * kPi, "fiber integral (2 pi/3) y1^3, frozen"}}; break;
            case ConeKind::Spherical3: cases = {{2.0, 8.0 * kPi, "fiber integral (pi/2) y1 y2, frozen"}}; break;
        }
        for (const auto& cs : cases)
            rep.add(report::compare(base + "/nu=" + num(cs.nu), anchor, {{"cone", c.name()}, {"nu", cs.nu}}, cs.expected,
                                    gamma_cone(c, cs.nu, 0.01 * tol), tol, cs.note));
        // t-independence of the Laplace integral times det(t)^nu
        const double nu = 2.0;
        std::vector<double> vals;
        std::uniform_real_distribution<double> u(-0.6, 0.6), s(0.5, 2.0);
        for (int i = 0; i < 5; ++i) {
            ConePoint t;
            switch (k) {
                case ConeKind::HalfLine: t = {s(rng)}; break;
                case ConeKind::Octant2: t = {s(rng), s(rng)}; break;
                case ConeKind::Lorentz3: {
                    const double a = s(rng);
                    t = {a, a * u(rng), a * u(rng)};
                    break;
                }
                case ConeKind::Spherical3: {
                    const double a = s(rng);
                    t = lorentz_to_spherical({a, a * u(rng), a * u(rng)});
                    break;
                }
            }
            vals.push_back(laplace_power_integral(c, t, nu - c.dim_over_rank(), 1e-6) * std::pow(det(c, t), nu));
        }
        const double spread = spectral::relative_spread(vals);
        rep.add(report::property(base + "/t-invariance", anchor, {{"cone", c.name()}, {"nu", nu}, {"samples", 5}},
                                 spread < 1e-3, spread, 1e-3, "spread of det(t)^nu times the Laplace integral"));
    }
    return rep;
}

// ---------------------------------------------------------------- Paley-Wiener

VerificationReport paley_wiener_suite(const SuiteParams& p) {
    VerificationReport rep;
    const double tol = p.number("tol", 1e-4);
    const auto kinds = cones(p, {"halfplane"});
    for (ConeKind k : kinds) {
        if (k == ConeKind::HalfLine) {
            const double alpha = p.pair("alpha", {0.0, 0.0})[0];
            const std::string base = "paley-wiener/halfline";
            const std::string hardy_anchor = "Paley-Wiener isometry for the Hardy space of the upper half-plane";
            const std::string berg_anchor = "Paley-Wiener representation of weighted Bergman spaces of the half-plane";
            const SpectralFunction f = power_exp(0.0, 1.0);
            spectral::NormOptions o;
            const Complex Fi = spectral::laplace_at(f, ConePoint{0.0}, ConePoint{1.0});
            rep.add(report::compare(base + "/laplace-at-i", hardy_anchor, {{"f", "e^-t"}}, 0.5, Fi.real(), 1e-8,
                                    "F(z) = 1/(1 - iz)"));
            const auto hs = spectral::hardy_norm(f, spectral::NormSide::Spectral, o);
            rep.add(report::compare(base + "/hardy-spectral", hardy_anchor, {{"f", "e^-t"}}, kPi, hs.value, 1e-8,
                                    "2 pi * integral of e^{-2t}"));
            const auto hp = spectral::hardy_norm(f, spectral::NormSide::Spatial, o);
            rep.add(report::compare(base + "/hardy-spatial", hardy_anchor, {{"f", "e^-t"}, {"levels", o.levels}}, kPi,
                                    hp.value, tol,
                                    "Richardson value over heights 2^-k; raw sup " + num(hp.raw_sup, 10)));
            rep.add(report::property(base + "/hardy-spatial-monotone", hardy_anchor, {{"f", "e^-t"}}, hp.monotone,
                                     hp.raw_sup, 0.0, "slice norms increase as the height decreases"));

            const SpectralFunction g = power_exp(1.0, 1.0);
            const auto w = spectral::BergmanWeight::half_plane(alpha);
            Json in{{"g", "t e^-t"}, {"alpha", alpha}};
            if (alpha < 2.0) {
                const double spatial_exact = 0.5 * kPi * beta_fn(alpha + 1.0, 2.0 - alpha);
                const auto bs = spectral::bergman_norm(g, w, spectral::NormSide::Spatial, o);
                rep.add(report::compare(base + "/bergman-spatial", berg_anchor, in, spatial_exact, bs.value, tol,
                                        "(pi/2) B(alpha+1, 2-alpha)"));
                const double spectral_exact = std::tgamma(2.0 - alpha) / std::pow(2.0, 2.0 - alpha);
                const auto bq = spectral::bergman_norm(g, w, spectral::NormSide::Spectral, o);
                rep.add(report::compare(base + "/bergman-spectral", berg_anchor, in, spectral_exact, bq.value, 1e-10,
                                        "Gamma(2-alpha) / 2^{2-alpha}"));
            }
            std::vector<SpectralFunction> fam;
            for (auto [a, b] : kHalfLineFamily)
                if (a > alpha) fam.push_back(power_exp(a, b));
            const auto cal = spectral::calibrate_bergman(fam, w, o);
            rep.add(report::from_calibration(base + "/kappa", berg_anchor, {{"alpha", alpha}, {"densities", fam.size()}}, cal));
            rep.add(report::property(base + "/kappa-constancy", berg_anchor, {{"alpha", alpha}, {"densities", fam.size()}},
                                     cal.relative_spread < 1e-3, cal.relative_spread, 1e-3,
                                     "spread of spatial / spectral over the family"));
            if (alpha >= 0.0) {
                bool diverged = false;
                try {
                    spectral::bergman_norm(f, w, spectral::NormSide::Spectral, o);
                } catch (const DivergenceError&) {
                    diverged = true;
                }
                rep.add(report::property(base + "/spectral-divergence", berg_anchor, {{"g", "e^-t"}, {"alpha", alpha}},
                                         diverged, diverged ? 1.0 : 0.0, 0.0,
                                         "integral of e^{-2t} t^{-alpha-1} diverges at 0"));
            }
        } else if (k == ConeKind::Octant2) {
            const auto a = p.pair("alpha", {0.0, 0.0});
            const std::string anchor = "Paley-Wiener representation of weighted Bergman spaces of the bi-half-plane";
            std::vector<SpectralFunction> fam;
            const std::vector<std::array<double, 4>> params{{1, 1, 1, 1}, {2, 1, 1, 1}, {1, 2, 1.5, 1}, {2, 2, 1, 2}, {1, 1, 2, 1.5}};
            for (const auto& q : params) {
                if (!(q[0] > a[0] && q[1] > a[1])) continue;
                fam.push_back(make_spectral(
                    ConeDescriptor::octant2(),
                    [q](const ConePoint& t) {
                        return Complex(std::pow(t[0], q[0]) * std::pow(t[1], q[1]) * std::exp(-q[2] * t[0] - q[3] * t[1]));
                    },
                    DecayTag::exponential(std::min(q[2], q[3]))));
            }
            const auto cal = spectral::calibrate_bergman(fam, spectral::BergmanWeight::product(a[0], a[1]));
            rep.add(report::from_calibration("paley-wiener/octant/kappa", anchor,
                                             {{"alpha", {a[0], a[1]}}, {"densities", fam.size()}}, cal));
            rep.add(report::property("paley-wiener/octant/kappa-constancy", anchor, {{"alpha", {a[0], a[1]}}},
                                     cal.relative_spread < 1e-3, cal.relative_spread, 1e-3));
        } else {
            throw ConfigError("paley-wiener: domain must be halfplane or octant");
        }
    }
    return rep;
}

// ---------------------------------------------------------------- kernel

VerificationReport kernel_suite(const SuiteParams& p) {
    VerificationReport rep;
    const double alpha = p.pair("alpha", {1.0, 1.0})[0];
    const double tol = p.number("tol", 1e-4);
    const long n = p.integer("n", 5);
    const std::string anchor = "integral of the Bergman-type kernel over horizontal slices";
    const ConeDescriptor c = ConeDescriptor::half_line();
    std::mt19937_64 rng(std::uint64_t(p.integer("seed", 1)));
    std::uniform_real_distribution<double> h(0.2, 3.0), x(-2.0, 2.0);
    auto check = [&](double a, const std::string& tag) {
        const std::string base = "kernel/halfline/alpha=" + num(a) + tag;
        const bool converges = a > 0.5;
        const double exact = converges ? std::sqrt(kPi) * std::tgamma(a - 0.5) / std::tgamma(a) : 0.0;
        std::vector<double> ratios;
        for (long i = 0; i < (converges ? n : 1); ++i) {
            const ConePoint y{h(rng)}, wre{x(rng)}, wim{h(rng)};
            const auto r = spectral::kernel_integral_check(c, a, y, wre, wim, 1e-10);
            Json in{{"alpha", a}, {"y", y[0]}, {"w", {wre[0], wim[0]}}};
            if (converges) {
                rep.add(report::compare(base + "/sample-" + std::to_string(i + 1), anchor, in, exact, r.derived_value, tol,
                                        "sqrt(pi) Gamma(alpha - 1/2) / Gamma(alpha)"));
                ratios.push_back(r.derived_value);
            } else {
                rep.add(report::from_calibration(base + "/divergence", anchor, in, r, true));
            }
        }
        if (ratios.size() > 1) {
            const double spread = spectral::relative_spread(ratios);
            rep.add(report::property(base + "/constancy", anchor, {{"alpha", a}, {"samples", ratios.size()}},
                                     spread < 1e-6, spread, 1e-6));
        }
    };
    check(alpha, "");
    if (std::abs(alpha - 0.4) > 1e-12) check(0.4, "");
    return rep;
}

// ---------------------------------------------------------------- box

VerificationReport box_suite(const SuiteParams& p) {
    VerificationReport rep;
    const int m = int(p.integer("m", 1));
    if (m < 1) throw ConfigError("box: m must be >= 1 on the half-line");
    for (auto k : cones(p, {"halfline"}))
        if (k != ConeKind::HalfLine) throw ConfigError("box: only the half-line cone is supported");
    const std::string anchor = "box operator maps the Hardy space isomorphically onto a weighted Bergman space";
    std::vector<double> ratios;
    spectral::CalibrationRecord first;
    for (std::size_t i = 0; i < kHalfLineFamily.size(); ++i) {
        const auto [a, b] = kHalfLineFamily[i];
        const auto r = spectral::box_iso_ratio(power_exp(a, b), m, 1e-10);
        if (i == 0) first = r;
        ratios.push_back(r.derived_value);
    }
    const double spread = spectral::relative_spread(ratios);
    rep.add(report::property("box/halfline/m=" + std::to_string(m) + "/constancy", anchor,
                             {{"m", m}, {"densities", ratios.size()}}, spread < 1e-6, spread, 1e-6));
    rep.add(report::from_calibration("box/halfline/m=" + std::to_string(m) + "/paper-constant", anchor, {{"m", m}}, first));
    // independent value: spatial Bergman quadrature of box^m F over the spectral Hardy norm
    const SpectralFunction f = power_exp(1.0, 1.0);
    spectral::NormOptions o;
    const double spatial =
        spectral::bergman_norm(spectral::box_apply(f, m), spectral::BergmanWeight::half_plane(2.0 * m - 1.0),
                               spectral::NormSide::Spatial, o)
            .value;
    const double hardy = spectral::hardy_norm(f, spectral::NormSide::Spectral, o).value;
    rep.add(report::compare("box/halfline/m=" + std::to_string(m) + "/quadrature-oracle", anchor, {{"m", m}, {"f", "t e^-t"}},
                            spatial / hardy, first.derived_value, p.number("tol", 1e-3),
                            "oracle: spatial weighted integral of |box^m F|^2 over the Hardy norm"));
    return rep;
}

// ---------------------------------------------------------------- radial

VerificationReport radial_suite(const SuiteParams& p) {
    VerificationReport rep;
    const std::string anchor = "radial Carleson measures: multiplier, integrability and the necessary inequality";
    const auto kinds = cones(p, {"halfline", "octant", "lorentz"});
    struct Case {
        radial::RadialDensity d;
        double alpha;
        bool integrable;
        double mult, integral;
    };
    std::vector<Case> cases;
    for (ConeKind k : kinds) {
        const ConeDescriptor c = ConeDescriptor::of(k);
        if (k == ConeKind::HalfLine) {
            const double a = p.pair("alpha", {1.0, 1.0})[0];
            cases.push_back({radial::RadialDensity::indicator_below(c, ConePoint{1.0}, "chi(0..1)"), a, true, 1.0, 1.0});
            cases.push_back({{c, [](const ConePoint& y) { return std::exp(-y[0]); }, radial::SupportTag::Unbounded, {}, "exp(-y)"},
                             a, true, 1.0, 1.0});
            cases.push_back({{c, [](const ConePoint&) { return 1.0; }, radial::SupportTag::Unbounded, {}, "one"}, a, false, 0, 0});
        } else if (k == ConeKind::Octant2) {
            cases.push_back({{c, [](const ConePoint& y) { return std::exp(-y[0]); }, radial::SupportTag::Unbounded, {}, "exp(-y1)"},
                             p.pair("alpha", {1.0, 1.0})[0], false, 0, 0});
        } else if (k == ConeKind::Lorentz3) {
            cases.push_back({radial::RadialDensity::indicator_below(c, ConePoint{1.0, 0.0, 0.0}, "order-interval(e)"),
                             p.pair("alpha", {2.0, 2.0})[0], true, kPi / 12.0, kPi / 12.0});
        } else {
            throw ConfigError("radial: cone must be halfline, octant or lorentz");
        }
    }
    const double tol = p.number("tol", 1e-6);
    for (const auto& cs : cases) {
        const std::string base = "radial/" + std::string(cs.d.cone.name()) + "/" + cs.d.label;
        const radial::RadialOptions o;
        const auto m = radial::multiplier_sup(cs.d, o);
        const auto I = radial::radial_integral(cs.d, o);
        const auto N = radial::necessary_sup(cs.d, cs.alpha, o);
        Json in{{"density", cs.d.label}, {"alpha", cs.alpha}};
        // finiteness of the necessary supremum must not depend on the weight exponent
        const double a2 = cs.alpha + 1.0;
        radial::RadialOptions coarse = o;
        coarse.tolerance = 1e-6;
        const auto N2 = radial::necessary_sup(cs.d, a2, coarse);
        rep.add(report::property(base + "/alpha-agreement", anchor, {{"density", cs.d.label}, {"alpha", {cs.alpha, a2}}},
                                 N2.infinite == N.infinite, N2.infinite ? INFINITY : N2.sup_value, 0.0,
                                 std::string("necessary sup ") + (N2.infinite ? "infinite" : "finite") + " at alpha " + num(a2)));
        if (cs.integrable) {
            rep.add(report::compare(base + "/multiplier-sup", anchor, in, cs.mult, m.infinite ? INFINITY : m.sup_value, tol,
                                    m.note));
            rep.add(report::compare(base + "/integral", anchor, in, cs.integral, I.infinite ? INFINITY : I.sup_value, tol,
                                    I.note));
            rep.add(report::property(base + "/necessary-finite", anchor, in, !N.infinite, N.sup_value, 0.0, N.note));
            if (!N.infinite) {
                const auto pts = radial::chain_check(cs.d, cs.alpha, N.sup_value, o);
                bool ok = !pts.empty();
                double worst = 0.0;
                for (const auto& q : pts) {
                    ok = ok && q.holds;
                    if (q.bound > 0.0) worst = std::max(worst, q.mass_below / q.bound);
                }
                rep.add(report::property(base + "/chain", anchor, in, ok, worst, 1.0,
                                         "max over the grid of mass below t over chain_constant * necessary sup"));
            }
        } else {
            rep.add(report::property(base + "/multiplier-infinite", anchor, in, m.infinite, m.sup_value, o.blowup, m.note));
            rep.add(report::property(base + "/integral-infinite", anchor, in, I.infinite, I.sup_value, o.blowup, I.note));
            rep.add(report::property(base + "/necessary-infinite", anchor, in, N.infinite, N.sup_value, o.blowup, N.note));
        }
    }
    return rep;
}

// ---------------------------------------------------------------- moment

VerificationReport moment_suite(const SuiteParams& p) {
    VerificationReport rep;
    const std::string anchor = "half-disc moment identity with the beta function";
    const long kmax = p.integer("n", 5);
    const double tol = p.number("tol", 1e-10);
    for (long k = 0; k <= kmax; ++k) {
        std::vector<double> scaled;
        for (double a : {0.5, 1.0, 2.0}) {
            const double exact = 0.5 * beta_fn(double(k) + 1.0, 0.5) * std::pow(a, double(k) + 0.5);
            const double v = restriction::half_disc_moment(a, int(k));
            scaled.push_back(v / std::pow(a, double(k) + 0.5));
            rep.add(report::compare("moment/k=" + std::to_string(k) + "/a=" + num(a), anchor, {{"k", k}, {"a", a}}, exact, v,
                                    tol, "beta(k+1, 1/2) a^{k+1/2} / 2"));
        }
        const double spread = spectral::relative_spread(scaled);
        rep.add(report::property("moment/k=" + std::to_string(k) + "/scaling", anchor, {{"k", k}}, spread < tol, spread, tol));
    }
    return rep;
}

// ---------------------------------------------------------------- restriction

SpectralFunction lorentz_density(int which) {
    const ConeDescriptor L = ConeDescriptor::lorentz3();
    switch (which) {
        case 0: return make_spectral(L, [](const ConePoint& t) { return Complex(std::exp(-t[0])); }, DecayTag::exponential(1), {}, "e^-t1");
        case 1:
            return make_spectral(L, [](const ConePoint& t) { return Complex(std::exp(-t[0]) * (1.0 + t[1] / t[0])); },
                                 DecayTag::exponential(1), {}, "e^-t1 (1 + t2/t1)");
        default:
            return make_spectral(L, [](const ConePoint& t) { return Complex(std::exp(-2.0 * t[0]) * t[2] * t[2]); },
                                 DecayTag::exponential(2), {}, "e^-2t1 t3^2");
    }
}

SpectralFunction spherical_density(int which) {
    const ConeDescriptor S = ConeDescriptor::spherical3();
    switch (which) {
        case 0:
            return make_spectral(S, [](const ConePoint& t) { return Complex(std::exp(-0.5 * (t[0] + t[1]))); },
                                 DecayTag::exponential(0.5), {}, "e^-(t1+t2)/2");
        default:
            return make_spectral(
                S, [](const ConePoint& t) { return Complex(std::exp(-0.5 * (t[0] + t[1])) * (1.0 + t[2] / (t[0] + t[1]))); },
                DecayTag::exponential(0.5), {}, "e^-(t1+t2)/2 (1 + t3/(t1+t2))");
    }
}

VerificationReport restriction_suite(const SuiteParams& p) {
    VerificationReport rep;
    const std::string rt_anchor = "restriction of box^m on the cone inverts the extension operator";
    const std::string in_anchor = "restriction inequality from the Hardy space of the cone to a Bergman space";
    const std::string ex_anchor = "extension operator norm identity";
    const std::string ch_anchor = "Carleson embedding for box^m of Hardy functions through restriction";
    const auto kinds = cones(p, {"lorentz", "spherical"});
    const std::vector<int> orders = p.has("m") ? std::vector<int>{int(p.integer("m", 0))} : std::vector<int>{0, 1, 2};
    const double tol = p.number("tol", 1e-5);
    for (ConeKind k : kinds) {
        const ConeDescriptor c = ConeDescriptor::of(k);
        if (k != ConeKind::Lorentz3 && k != ConeKind::Spherical3) throw ConfigError("restriction: cone must be lorentz or spherical");
        const std::string base = "restriction/" + std::string(c.name());
        for (int m : orders) {
            const std::string tag = base + "/m=" + std::to_string(m);
            std::vector<SpectralFunction> gs;
            if (k == ConeKind::Lorentz3) {
                for (int a = 0; a < 3; ++a)
                    gs.push_back(make_spectral(
                        ConeDescriptor::half_line(),
                        [m, a](const ConePoint& t) { return Complex(std::pow(t[0], 2 * m + 2 + a) * std::exp(-t[0])); },
                        DecayTag::exponential(1), {}, "t^" + std::to_string(2 * m + 2 + a) + " e^-t"));
            } else {
                for (int a = 0; a < 3; ++a)
                    gs.push_back(make_spectral(
                        ConeDescriptor::octant2(),
                        [m, a](const ConePoint& t) {
                            return Complex(std::pow(t[0] * t[1], m + 1 + 0.5 * a) * std::exp(-t[0] - (1.0 + 0.25 * a) * t[1]));
                        },
                        DecayTag::exponential(1)));
            }
            const double err = restriction::round_trip_error(c, m, gs[0], 1);
            rep.add(report::property(tag + "/round-trip", rt_anchor, {{"m", m}}, err < tol, err, tol,
                                     "max relative |R box^m E g - g| over interior and random points"));
            const auto ex = restriction::verify_extension_identity(c, m, gs);
            rep.add(report::property(tag + "/extension-constancy", ex_anchor, {{"m", m}, {"densities", gs.size()}},
                                     ex.record.relative_spread < 1e-3, ex.record.relative_spread, 1e-3));
            rep.add(report::from_calibration(tag + "/extension-constant", ex_anchor, {{"m", m}}, ex.record));
            for (std::size_t i = 0; i < ex.alternatives.size(); ++i)
                rep.add(report::from_calibration(tag + "/extension-constant-variant-" + std::to_string(i + 1), ex_anchor,
                                                 {{"m", m}}, ex.alternatives[i]));
            rep.add(report::compare(tag + "/extension-derived", ex_anchor, {{"m", m}}, restriction::extension_ratio(c, m),
                                    ex.record.derived_value, 1e-3, "closed form under the transform convention"));

            if (m == 0 || p.has("m")) {
                std::vector<SpectralFunction> fam;
                for (int w = 0; w < (k == ConeKind::Lorentz3 ? 3 : 2); ++w)
                    fam.push_back(k == ConeKind::Lorentz3 ? lorentz_density(w) : spherical_density(w));
                const auto rc = restriction::verify_restriction_inequality(c, m, fam);
                rep.add(report::property(tag + "/restriction-inequality", in_anchor, {{"m", m}, {"densities", fam.size()}},
                                         rc.holds, rc.max_ratio, rc.bound, "max ratio against the derived bound"));
                for (std::size_t i = 0; i < rc.records.size(); ++i)
                    rep.add(report::from_calibration(tag + "/restriction-constant-" + std::to_string(i + 1), in_anchor,
                                                     {{"m", m}}, rc.records[i]));
            }
            if (k == ConeKind::Lorentz3 && m <= 1) {
                const auto ch = restriction::box_hardy_chain(lorentz_density(1), m);
                rep.add(report::property(tag + "/embedding-chain", ch_anchor, {{"m", m}, {"point", "i"}}, ch.holds,
                                         ch.point_value, ch.hardy_rhs,
                                         "|G(i)|^2 = " + num(ch.point_value) + " <= " + num(ch.embedding_rhs) +
                                             " <= " + num(ch.hardy_rhs)));
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------- dyadic

void covering_checks(VerificationReport& rep, long n, std::uint64_t seed) {
    const std::string anchor = "every interval lies in a shifted dyadic interval at most six times longer";
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> e(-10.0, 10.0), x(-100.0, 100.0);
    const int width = int(std::to_string(n).size());
    for (long i = 0; i < n; ++i) {
        const dyadic::Interval I{x(rng), std::exp2(e(rng))};
        const auto J = dyadic::dyadic_cover(I);
        const double ratio = J.length() / I.length;
        rep.add(report::property("dyadic/covering/" + padded(std::size_t(i + 1), width), anchor,
                                 {{"left", I.left}, {"length", I.length}}, ratio <= 6.0 && J.interval().contains(I), ratio, 6.0,
                                 "J = 2^" + std::to_string(J.j) + " shift " + std::string(dyadic::to_string(J.beta))));
    }
}

void tiling_checks(VerificationReport& rep) {
    const std::string anchor = "top halves of dyadic Carleson boxes tile the product of half-planes";
    const dyadic::Window w{0.0, 1.0, 0.0625, 1.0};
    const auto t = dyadic::tiling_check(w, w, 4);
    Json in{{"window", "[0,1)x(2^-4,1) in each factor"}, {"depth", 4}};
    rep.add(report::property("dyadic/tiling/disjoint", anchor, in, t.disjoint(), double(t.overlaps), 0.0,
                             std::to_string(t.tiles) + " tiles, " + std::to_string(t.pairs_checked) + " pairs"));
    rep.add(report::compare("dyadic/tiling/volume", anchor, in, t.window_volume, t.covered_volume, 1e-10));
    const dyadic::Rectangle r1{{0.0, 1.0}, {0.0, 0.5}}, r2{{0.0, 0.5}, {0.0, 1.0}};
    rep.add(report::property("dyadic/tiling/crossing-rectangles", anchor, {{"R1", "[0,1)x[0,1/2)"}, {"R2", "[0,1/2)x[0,1)"}},
                             !dyadic::tops_overlap(r1, r2), 0.0, 0.0, "intersection is neither empty nor one of them"));
}

void carleson_checks(VerificationReport& rep, const dyadic::Weights& alpha, double p, double q) {
    const std::string anchor = "Carleson condition on boxes and its necessity via test functions";
    dyadic::DiscreteMeasure mu;
    mu.add({{0.0, 1.0}, {0.0, 1.0}}, 1.0);
    const auto s = dyadic::carleson_ratio_sup(mu, {0.0, 0.0}, 1.0);
    rep.add(report::compare("dyadic/carleson/point-mass-dyadic", anchor, {{"point", "(i,i)"}}, 1.0 / 16.0, s.ratio, 1e-12,
                            "smallest dyadic squares containing height 1 have side 2"));
    const auto adapted = dyadic::carleson_ratio_sup(mu, {0.0, 0.0}, 1.0, dyadic::point_adapted_family(mu, 20));
    rep.add(report::compare("dyadic/carleson/point-mass-continuous", anchor, {{"point", "(i,i)"}, {"levels", 20}}, 1.0,
                            adapted.ratio, 1e-4, "sides 1 + 2^-l approach the continuous supremum"));
    const double K = dyadic::covering_comparison_constant({0.0, 0.0}, 1.0);
    rep.add(report::property("dyadic/carleson/covering-comparison", anchor, {{"constant", K}}, adapted.ratio <= K * s.ratio,
                             adapted.ratio / s.ratio, K, "continuous sup over dyadic-with-shifts sup"));
    dyadic::DiscreteMeasure two = mu;
    two.add({{100.0, 1.0}, {-50.0, 1.0}}, 1.0);
    rep.add(report::compare("dyadic/carleson/two-far-masses", anchor, {{"points", "(i,i), (100+i,-50+i)"}}, s.ratio,
                            dyadic::carleson_ratio_sup(two, {0.0, 0.0}, 1.0).ratio, 1e-12));
    const auto scaled = dyadic::carleson_ratio_sup(two.scaled(3.0), {0.0, 0.0}, 1.0);
    const auto plain = dyadic::carleson_ratio_sup(two, {0.0, 0.0}, 1.0);
    const bool same = scaled.witness && plain.witness && scaled.witness->i1.left == plain.witness->i1.left &&
                      scaled.witness->i1.length == plain.witness->i1.length &&
                      scaled.witness->i2.left == plain.witness->i2.left && scaled.witness->i2.length == plain.witness->i2.length;
    rep.add(report::compare("dyadic/carleson/scaling", anchor, {{"lambda", 3}}, 3.0, scaled.ratio / plain.ratio, 1e-12));
    rep.add(report::property("dyadic/carleson/scaling-witness", anchor, {{"lambda", 3}}, same, 0.0, 0.0));

    // necessity probe: Carleson sup against the f_w lower bound, across point masses, with refinement
    const std::vector<std::array<double, 4>> pts{{0.1, 1.0, 0.7, 1.3}, {0.3, 0.3, -0.2, 0.39}, {-1.0, 2.7, 0.5, 3.51},
                                                 {2.2, 0.6, 1.0, 0.05}, {0.0, 5.0, 0.0, 0.2}};
    double worst = 0.0, worst_refined = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        dyadic::DiscreteMeasure m;
        m.add({{pts[i][0], pts[i][1]}, {pts[i][2], pts[i][3]}}, 1.0);
        const auto a = dyadic::necessity_probe(m, p, q, alpha, dyadic::default_family(m), 32);
        const auto b = dyadic::necessity_probe(m, p, q, alpha, dyadic::default_family(m, 1), 48);
        worst = std::max(worst, a.ratio);
        worst_refined = std::max(worst_refined, b.ratio);
    }
    Json in{{"alpha", {alpha[0], alpha[1]}}, {"p", p}, {"q", q}, {"point_masses", pts.size()}};
    rep.add(report::property("dyadic/carleson/necessity-constant", anchor, in, worst > 0.0 && std::isfinite(worst), worst, 0.0,
                             "largest Carleson sup / f_w lower bound over the suite"));
    const double drift = std::abs(worst_refined - worst) / worst;
    rep.add(report::property("dyadic/carleson/necessity-stability", anchor, in, drift <= 0.1, drift, 0.1,
                             "refined: one more scale each side, 48 quadrature nodes; constant " + num(worst_refined, 10)));
}

void measure_checks(VerificationReport& rep, const std::string& path, const dyadic::Weights& alpha, double gamma) {
    const std::string anchor = "Carleson condition on boxes and its necessity via test functions";
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open measure file");
    const auto mu = dyadic::read_measure(in, path);
    const auto s = dyadic::carleson_ratio_sup(mu, alpha, gamma);
    std::string where = "no box";
    if (s.witness)
        where = "I1 = [" + num(s.witness->i1.left) + ", " + num(s.witness->i1.right()) + "), I2 = [" +
                num(s.witness->i2.left) + ", " + num(s.witness->i2.right()) + ")";
    rep.add(report::property("dyadic/carleson/measure-file", anchor,
                             {{"file", path}, {"masses", mu.points.size()}, {"total", mu.total()}, {"candidates", s.candidates}},
                             std::isfinite(s.ratio), s.ratio, 0.0, "sup over " + s.family + "; witness " + where));
}

void fw_checks(VerificationReport& rep, std::uint64_t seed) {
    const std::string anchor = "test functions f_w in the weighted Bergman space of the bi-half-plane";
    const dyadic::BiPoint w0{{0.0, 1.0}, {0.0, 1.0}};
    rep.add(report::compare("dyadic/fw/value-at-w", anchor, {{"w", "(i,i)"}, {"p", 2}}, 1.0 / 16.0,
                            std::abs(dyadic::testfn_fw(w0, 2.0, {0.0, 0.0}, w0)), 1e-14));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> x(-3.0, 3.0), y(-2.0, 2.0);
    for (int i = 0; i < 5; ++i) {
        const dyadic::BiPoint w{{x(rng), std::exp(y(rng))}, {x(rng), std::exp(y(rng))}};
        rep.add(report::compare("dyadic/fw/norm-" + std::to_string(i + 1), anchor,
                                {{"w", {w.z1.real(), w.z1.imag(), w.z2.real(), w.z2.imag()}}, {"p", 2}}, kPi * kPi / 16.0,
                                dyadic::fw_norm_p(w, 2.0, {0.0, 0.0}), 1e-4));
    }
    dyadic::DiscreteMeasure mu;
    mu.add(w0, 1.0);
    auto f = [&](const dyadic::BiPoint& z) { return dyadic::testfn_fw(w0, 2.0, {0.0, 0.0}, z); };
    const auto e = dyadic::embedding_test(mu, f, 2.0, 2.0, {0.0, 0.0}, dyadic::half_plane_rule(w0.z1, 0.0, 32),
                                          dyadic::half_plane_rule(w0.z2, 0.0, 32));
    rep.add(report::compare("dyadic/fw/embedding-ratio", anchor, {{"mu", "unit mass at (i,i)"}, {"p", 2}, {"q", 2}},
                            1.0 / (16.0 * kPi * kPi), e.ratio(), 1e-6, "lhs 1/256 over rhs pi^2/16"));
}

dyadic::GridFunction random_sparse(std::mt19937_64& rng, int levels, int top) {
    dyadic::GridFunction g(dyadic::FactorGrid::dyadic(levels, top), dyadic::FactorGrid::dyadic(levels, top));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : g.values)
        if (u(rng) < 0.05) v = std::exp2(8.0 * u(rng));
    return g;
}

void maximal_checks(VerificationReport& rep, const dyadic::Weights& alpha, std::uint64_t seed) {
    const std::string anchor = "strong maximal function is dominated by the iterated one-parameter maximal functions";
    std::mt19937_64 rng(seed);
    const auto g = random_sparse(rng, 2, 5);  // 32 cells per factor
    const dyadic::MaximalOperator D(g, alpha, dyadic::MaximalVariant::dyadic());
    const dyadic::MaximalOperator S(g, alpha, dyadic::MaximalVariant::strong());
    const dyadic::MaximalOperator I(g, alpha, dyadic::MaximalVariant::iterated());
    const auto md = D.on_cells(), ms = S.on_cells(), mi = I.on_cells();
    std::size_t bad = 0;
    double worst = 0.0;
    for (std::size_t c = 0; c < md.size(); ++c) {
        if (md.values[c] > ms.values[c] * (1.0 + 1e-12) || ms.values[c] > mi.values[c] * (1.0 + 1e-12)) ++bad;
        if (mi.values[c] > 0.0) worst = std::max(worst, ms.values[c] / mi.values[c]);
    }
    rep.add(report::property("dyadic/maximal/domination", anchor, {{"grid", "32x32"}, {"alpha", {alpha[0], alpha[1]}}}, bad == 0,
                             double(bad), 0.0, "cells violating dyadic <= strong <= iterated; max strong/iterated " + num(worst)));
}

void levelset_checks(VerificationReport& rep, const dyadic::Weights& alpha, double p, double q, std::uint64_t seed) {
    const std::string anchor = "level-set decomposition of the dyadic strong maximal function";
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double c_ratio = 0.0;
    bool all_hold = true;
    for (int r = 0; r < 10; ++r) {
        const auto g = random_sparse(rng, 3, 4);  // 64 cells per factor
        const auto dec = dyadic::level_set_trace(g, alpha);
        std::size_t cells = 0, missing = 0;
        for (const auto& b : dec.bands) {
            cells += b.cell_count;
            missing += b.uncovered;
        }
        const std::string id = "dyadic/levelset/f" + padded(std::size_t(r + 1), 2);
        rep.add(report::property(id + "/covering", anchor, {{"grid", "64x64"}, {"k", {dec.k_min, dec.k_max}}},
                                 dec.all_covered() && dec.disjoint && dec.nested, double(missing), 0.0,
                                 std::to_string(cells) + " cells checked"));
        dyadic::DiscreteMeasure mu;
        for (int i = 0; i < 12; ++i)
            mu.add({{u(rng), std::exp2(-3.0 + 7.0 * u(rng))}, {u(rng), std::exp2(-3.0 + 7.0 * u(rng))}}, 0.1 + u(rng));
        const auto ch = dyadic::embedding_chain(mu, g, p, q, alpha);
        all_hold = all_hold && ch.holds;
        c_ratio = std::max(c_ratio, ch.lhs / (ch.carleson_constant * std::pow(ch.norm_pp, q / p)));
        rep.add(report::property(id + "/chain", anchor, {{"p", p}, {"q", q}, {"masses", mu.points.size()}}, ch.holds,
                                 ch.lhs, ch.rhs, "C' = " + num(ch.c_prime) + ", Carleson constant " + num(ch.carleson_constant)));
    }
    const double cp = std::pow(2.0, q) *
                      std::pow(dyadic::carleson_volume({{0, 1}, {0, 1}}, alpha) / dyadic::top_volume({{0, 1}, {0, 1}}, alpha),
                               q / p) *
                      std::pow(p / (p - 1.0), 2.0 * q);
    rep.add(report::property("dyadic/levelset/single-constant", anchor, {{"p", p}, {"q", q}}, all_hold && c_ratio <= cp, c_ratio, cp,
                             "largest lhs / (C ||f||^q) against C' = 2^q rho^{q/p} (p')^{2q}"));
}

VerificationReport dyadic_suite(const SuiteParams& p) {
    VerificationReport rep;
    const auto checks = p.words("check", {"covering", "tiling", "carleson", "fw", "maximal", "levelset"});
    const auto a = p.pair("alpha", {0.0, 0.0});
    const dyadic::Weights alpha{a[0], a[1]};
    const double pp = p.number("p", 2.0), qq = p.number("q", 2.0);
    if (!(pp > 1.0) || !(qq >= pp)) throw ConfigError("dyadic: need 1 < p <= q");
    const auto seed = std::uint64_t(p.integer("seed", 7));
    for (const auto& c : checks) {
        if (c == "covering") covering_checks(rep, p.integer("n", 10000), seed);
        else if (c == "tiling") tiling_checks(rep);
        else if (c == "carleson") {
            carleson_checks(rep, alpha, pp, qq);
            if (p.has("measure")) measure_checks(rep, p.text("measure", ""), alpha, qq / pp);
        }
        else if (c == "fw") fw_checks(rep, seed);
        else if (c == "maximal") maximal_checks(rep, alpha, seed);
        else if (c == "levelset") levelset_checks(rep, alpha, pp, std::max(qq, 3.0 * pp / 2.0), seed);
        else throw ConfigError("dyadic: unknown check '" + c + "'");
    }
    return rep;
}

}  // namespace

report::VerificationReport run_suite(const std::string& suite, const SuiteParams& params) {
    if (suite == "gamma") return gamma_suite(params);
    if (suite == "paley-wiener") return paley_wiener_suite(params);
    if (suite == "kernel") return kernel_suite(params);
    if (suite == "box") return box_suite(params);
    if (suite == "radial") return radial_suite(params);
    if (suite == "moment") return moment_suite(params);
    if (suite == "restriction") return restriction_suite(params);
    if (suite == "dyadic") return dyadic_suite(params);
    throw ConfigError("unknown suite '" + suite + "'");
}

report::VerificationReport run(const RunConfig& config) {
    config.validate();
    std::vector<std::future<report::VerificationReport>> jobs;
    for (const auto& s : config.suites)
        jobs.push_back(std::async(std::launch::async, [&config, s] {
            try {
                return run_suite(s, config.params_for(s));
            } catch (const DomainError&) {
                throw;
            } catch (const std::exception& e) {
                // numerical failure inside a suite: one failed record instead of aborting the run
                report::VerificationReport r;
                CheckRecord c;
                c.id = s + "/error";
                c.anchor = "suite " + s + " ran to completion";
                c.verdict = report::Verdict::Fail;
                c.note = e.what();
                r.add(std::move(c));
                return r;
            }
        }));
    report::VerificationReport all;
    for (auto& j : jobs) all.merge(j.get());
    all.finalize();
    return all;
}

}  // namespace carleson::cli
