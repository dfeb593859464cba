// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "carleson/cli.hpp"
#include "carleson/cone.hpp"
#include "carleson/dyadic.hpp"
#include "carleson/radial.hpp"
#include "carleson/restriction.hpp"
#include "carleson/spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace carleson;
constexpr double kPi = std::numbers::pi;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

SpectralFunction power_exp(double a, double b) {
    return make_spectral(ConeDescriptor::half_line(),
                         [a, b](const ConePoint& t) { return Complex(std::pow(t[0], a) * std::exp(-b * t[0])); },
                         DecayTag::exponential(b));
}

const std::vector<std::pair<double, double>> kFamily{{1, 1}, {2, 1}, {1, 2}, {3, 1.5}, {1.5, 0.75}};

std::vector<report::CheckRecord> g_records;

Outcome ac1() {
    Outcome o;
    const auto f =
        make_spectral(ConeDescriptor::half_line(), [](const ConePoint& t) { return Complex(std::exp(-t[0])); },
                      DecayTag::exponential(1.0));
    const auto spectral = spectral::hardy_norm(f, spectral::NormSide::Spectral);
    const auto spatial = spectral::hardy_norm(f, spectral::NormSide::Spatial);
    o.require(rel(spectral.value, kPi) < 1e-4, "spectral " + fmt(spectral.value));
    o.require(rel(spatial.value, kPi) < 1e-4, "spatial " + fmt(spatial.value));
    o.detail = o.ok ? "spatial " + fmt(spatial.value) + ", spectral " + fmt(spectral.value) : o.detail;
    return o;
}

Outcome ac2() {
    Outcome o;
    const auto g = power_exp(1, 1);
    const auto w = spectral::BergmanWeight::half_plane(0.0);
    const double sp = spectral::bergman_norm(g, w, spectral::NormSide::Spatial).value;
    const double sc = spectral::bergman_norm(g, w, spectral::NormSide::Spectral).value;
    o.require(std::abs(sp - kPi / 4) < 1e-4, "spatial " + fmt(sp));
    o.require(std::abs(sc - 0.25) < 1e-12, "spectral " + fmt(sc));
    std::vector<SpectralFunction> fam;
    for (auto [a, b] : kFamily) fam.push_back(power_exp(a, b));
    const auto k = spectral::calibrate_bergman(fam, w);
    o.require(k.relative_spread < 1e-3, "kappa spread " + fmt(k.relative_spread));
    o.require(k.paper_value.has_value() && (k.verdict == spectral::Verdict::Match || k.verdict == spectral::Verdict::Mismatch),
              "no verdict against the stated constant");
    if (o.ok)
        o.detail = "spatial " + fmt(sp) + ", spectral " + fmt(sc) + ", kappa " + fmt(k.derived_value) + " (spread " +
                   fmt(k.relative_spread) + ") vs stated " + fmt(k.paper_value.value_or(0)) + ": " +
                   std::string(spectral::to_string(k.verdict));
    return o;
}

Outcome ac3() {
    Outcome o;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> h(0.2, 3.0), x(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const auto r = spectral::kernel_integral_check(ConeDescriptor::half_line(), 1.0, {h(rng)}, {x(rng)}, {h(rng)}, 1e-10);
        worst = std::max(worst, rel(r.derived_value, kPi));
    }
    o.require(worst < 1e-4, "worst relative error " + fmt(worst));
    const auto d = spectral::kernel_integral_check(ConeDescriptor::half_line(), 0.4, {1.0}, {0.0}, {1.0});
    o.require(d.verdict == spectral::Verdict::Divergent, "alpha = 0.4 not flagged divergent");
    if (o.ok) o.detail = "worst relative error " + fmt(worst) + "; alpha 0.4 divergent";
    return o;
}

Outcome ac4() {
    Outcome o;
    std::vector<double> r;
    double worst_oracle = 0.0;
    for (auto [a, b] : kFamily) {
        const auto f = power_exp(a, b);
        r.push_back(spectral::box_iso_ratio(f, 1).derived_value);
        const double spatial =
            spectral::bergman_norm(spectral::box_apply(f, 1), spectral::BergmanWeight::half_plane(1.0), spectral::NormSide::Spatial)
                .value;
        const double oracle = spatial / spectral::hardy_norm(f, spectral::NormSide::Spectral).value;
        worst_oracle = std::max(worst_oracle, rel(r.back(), oracle));
    }
    const double spread = spectral::relative_spread(r);
    o.require(spread < 1e-6, "spread " + fmt(spread));
    o.require(worst_oracle < 1e-3, "quadrature gap " + fmt(worst_oracle));
    if (o.ok) o.detail = "ratio " + fmt(r[0]) + ", spread " + fmt(spread) + ", quadrature gap " + fmt(worst_oracle);
    return o;
}

Outcome ac5() {
    Outcome o;
    cli::SuiteParams p;
    const auto rep = cli::run_suite("radial", p);
    for (const auto& r : rep.records()) g_records.push_back(r);
    auto find = [&](const std::string& id) -> const report::CheckRecord* {
        for (const auto& r : rep.records())
            if (r.id == id) return &r;
        return nullptr;
    };
    struct Want {
        std::string base;
        double mult;
    };
    for (const auto& w : {Want{"radial/halfline/chi(0..1)", 1.0}, Want{"radial/halfline/exp(-y)", 1.0},
                          Want{"radial/lorentz/order-interval(e)", kPi / 12}}) {
        const auto* m = find(w.base + "/multiplier-sup");
        o.require(m && std::abs(m->derived - w.mult) <= 1e-6 * w.mult, w.base + " multiplier sup");
        for (const char* s : {"/integral", "/necessary-finite"}) {
            const auto* r = find(w.base + s);
            o.require(r && r->verdict == report::Verdict::Pass && std::isfinite(r->derived), w.base + s);
        }
    }
    for (const std::string base : {"radial/halfline/one", "radial/octant/exp(-y1)"})
        for (const char* s : {"/multiplier-infinite", "/integral-infinite", "/necessary-infinite"}) {
            const auto* r = find(base + s);
            o.require(r && r->verdict == report::Verdict::Pass, base + s);
        }
    o.require(rep.passed(), "suite has failing records");
    if (o.ok) o.detail = std::to_string(rep.records().size()) + " records, multiplier sups 1, 1, pi/12";
    return o;
}

Outcome ac6() {
    Outcome o;
    double worst = 0.0;
    for (int k = 0; k <= 5; ++k)
        for (double a : {0.5, 1.0, 2.0}) {
            const double want = 0.5 * std::beta(k + 1.0, 0.5) * std::pow(a, k + 0.5);
            worst = std::max(worst, rel(restriction::half_disc_moment(a, k), want));
        }
    o.require(worst < 1e-10, "worst relative error " + fmt(worst));
    if (o.ok) o.detail = "18 cases, worst relative error " + fmt(worst);
    return o;
}

Outcome ac7() {
    Outcome o;
    double worst = 0.0;
    const auto L = ConeDescriptor::lorentz3(), S = ConeDescriptor::spherical3();
    for (int m = 0; m <= 2; ++m) {
        std::vector<SpectralFunction> lf, sf;
        for (double a : {0.0, 0.5, 1.0, 2.0, 3.0}) {
            lf.push_back(power_exp(2 * m + 2 + a, 1.0));
            sf.push_back(make_spectral(ConeDescriptor::octant2(),
                                       [m, a](const ConePoint& t) {
                                           return Complex(std::pow(t[0] * t[1], m + 1 + a / 2) *
                                                          std::exp(-t[0] - (1 + a / 4) * t[1]));
                                       },
                                       DecayTag::exponential(1.0)));
        }
        worst = std::max({worst, restriction::round_trip_error(L, m, lf[0]), restriction::round_trip_error(S, m, sf[0])});
        for (const auto* fam : {&lf, &sf}) {
            const auto& cone = fam == &lf ? L : S;
            const auto e = restriction::verify_extension_identity(cone, m, *fam);
            o.require(e.record.relative_spread < 1e-3,
                      std::string(cone.name()) + " m=" + std::to_string(m) + " spread " + fmt(e.record.relative_spread));
            o.require(e.record.paper_value.has_value(), std::string(cone.name()) + " no stated-constant comparison");
        }
    }
    o.require(worst < 1e-5, "round trip error " + fmt(worst));
    if (o.ok) o.detail = "worst round trip error " + fmt(worst) + ", extension ratios constant, stated constants compared";
    return o;
}

Outcome ac8() {
    Outcome o;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> e(-10.0, 10.0), x(-100.0, 100.0);
    double worst = 0.0;
    std::size_t uncovered = 0;
    for (int i = 0; i < 10000; ++i) {
        const dyadic::Interval I{x(rng), std::exp2(e(rng))};
        const auto J = dyadic::dyadic_cover(I);
        uncovered += !J.interval().contains(I);
        worst = std::max(worst, J.length() / I.length);
    }
    o.require(uncovered == 0, std::to_string(uncovered) + " intervals not covered");
    o.require(worst <= 6.0, "ratio " + fmt(worst));
    if (o.ok) o.detail = "10000 intervals, max |J|/|I| = " + fmt(worst);
    return o;
}

Outcome ac9() {
    Outcome o;
    const dyadic::Window w{0.0, 1.0, 0.0625, 1.0};
    const auto t = dyadic::tiling_check(w, w, 4);
    o.require(t.disjoint(), std::to_string(t.overlaps) + " overlapping pairs");
    o.require(t.relative_error < 1e-10, "volume error " + fmt(t.relative_error));
    if (o.ok)
        o.detail = std::to_string(t.tiles) + " tiles, " + std::to_string(t.pairs_checked) + " pairs, volume error " +
                   fmt(t.relative_error);
    return o;
}

Outcome ac10() {
    Outcome o;
    const dyadic::Weights a{0.0, 0.0};
    const std::vector<std::array<double, 4>> pts{{0.1, 1.0, 0.7, 1.3}, {0.3, 0.3, -0.2, 0.39}, {-1.0, 2.7, 0.5, 3.51},
                                                 {2.2, 0.6, 1.0, 0.05}, {0.0, 5.0, 0.0, 0.2}};
    double c = 0.0, c_fine = 0.0, lo = INFINITY;
    for (const auto& q : pts) {
        dyadic::DiscreteMeasure mu;
        mu.add({{q[0], q[1]}, {q[2], q[3]}}, 1.0);
        const auto p1 = dyadic::necessity_probe(mu, 2.0, 2.0, a, dyadic::default_family(mu), 32);
        const auto p2 = dyadic::necessity_probe(mu, 2.0, 2.0, a, dyadic::default_family(mu, 1), 48);
        c = std::max(c, p1.ratio);
        c_fine = std::max(c_fine, p2.ratio);
        lo = std::min(lo, p1.ratio);
    }
    o.require(std::isfinite(c) && lo > 0.0, "ratio not finite and positive");
    o.require(std::abs(c_fine - c) <= 0.1 * c, "constant drifts " + fmt(c) + " -> " + fmt(c_fine));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> x(-3.0, 3.0), y(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const dyadic::BiPoint w{{x(rng), std::exp(y(rng))}, {x(rng), std::exp(y(rng))}};
        worst = std::max(worst, rel(dyadic::fw_norm_p(w, 2.0, a), kPi * kPi / 16));
    }
    o.require(worst < 1e-4, "f_w norm error " + fmt(worst));
    if (o.ok)
        o.detail = "ratios in [" + fmt(lo) + ", " + fmt(c) + "], refined constant " + fmt(c_fine) + "; f_w norm error " + fmt(worst);
    return o;
}

Outcome ac11() {
    Outcome o;
    const dyadic::Weights a{0.0, 0.0};
    const double p = 2.0, q = 3.0;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto grid = dyadic::FactorGrid::dyadic(3, 4);
    double c_prime = -1.0, worst = 0.0;
    std::size_t cells = 0;
    for (int r = 0; r < 10; ++r) {
        dyadic::GridFunction f(grid, grid);
        for (auto& v : f.values)
            if (u(rng) < 0.05) v = std::exp2(8.0 * u(rng));
        const auto d = dyadic::level_set_trace(f, a);
        o.require(d.all_covered() && d.disjoint && d.nested, "f" + std::to_string(r + 1) + " certificate");
        for (const auto& b : d.bands) cells += b.cell_count;
        dyadic::DiscreteMeasure mu;
        for (int i = 0; i < 12; ++i)
            mu.add({{u(rng), std::exp2(-3.0 + 7.0 * u(rng))}, {u(rng), std::exp2(-3.0 + 7.0 * u(rng))}}, 0.1 + u(rng));
        const auto ch = dyadic::embedding_chain(mu, f, p, q, a);
        o.require(ch.holds, "f" + std::to_string(r + 1) + " chain");
        if (c_prime < 0) c_prime = ch.c_prime;
        o.require(ch.c_prime == c_prime, "C' varies");
        worst = std::max(worst, ch.lhs / (ch.carleson_constant * std::pow(ch.norm_pp, q / p)));
    }
    o.require(grid.cells() == 64, "grid is not 64 cells per factor");
    o.require(worst <= c_prime, "embedding ratio " + fmt(worst) + " exceeds C' " + fmt(c_prime));
    if (o.ok)
        o.detail = std::to_string(cells) + " level-set cells certified; C' = " + fmt(c_prime) + ", largest ratio " + fmt(worst);
    return o;
}

Outcome anchors() {
    Outcome o;
    for (const std::string s : {"gamma", "paley-wiener", "kernel", "box", "moment", "restriction", "dyadic"}) {
        const auto rep = cli::run_suite(s, cli::SuiteParams{});
        for (const auto& r : rep.records()) g_records.push_back(r);
    }
    std::size_t missing = 0;
    for (const auto& r : g_records)
        if (r.anchor.empty()) ++missing;
    o.require(missing == 0, std::to_string(missing) + " records without an anchor");
    if (o.ok) o.detail = std::to_string(g_records.size()) + " records from every suite carry an anchor";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* name;
        double seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {"AC1", "Hardy norm of e^-t equals pi on both sides", 5, ac1},
        {"AC2", "Bergman norms of t e^-t and the fitted kappa", 30, ac2},
        {"AC3", "kernel integral constant at alpha = 1, divergence at 0.4", 10, ac3},
        {"AC4", "box isomorphism ratio is constant and matches quadrature", 0, ac4},
        {"AC5", "radial Carleson certificates", 60, ac5},
        {"AC6", "half-disc moment identity", 0, ac6},
        {"AC7", "restriction/extension round trip and extension ratios", 0, ac7},
        {"AC8", "dyadic covering of 10^4 random intervals", 1, ac8},
        {"AC9", "top halves tile a depth-4 window", 0, ac9},
        {"AC10", "Carleson supremum against the f_w lower bound", 0, ac10},
        {"AC11", "level-set covering certificates and the traced embedding", 0, ac11},
        {"anchors", "every check record carries an anchor", 0, anchors},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.seconds > 0 && secs >= c.seconds) {
            o.ok = false;
            o.detail += "; took " + fmt(secs) + " s, limit " + fmt(c.seconds) + " s";
        }
        std::printf("%s %s: %s (%s; %.2f s)\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.ok;
    }
    return failed == 0 ? 0 : 1;
}
