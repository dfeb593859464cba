#include "carleson/dyadic.hpp"
#include "carleson/errors.hpp"
#include "carleson/kernels/maximal.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace carleson;
using namespace carleson::dyadic;
constexpr double kPi = std::numbers::pi;

namespace {

Rectangle unit_rect() { return {{0.0, 1.0}, {0.0, 1.0}}; }

DiscreteMeasure point_mass(Complex z1, Complex z2, double m = 1.0) {
    DiscreteMeasure mu;
    mu.add({z1, z2}, m);
    return mu;
}

GridFunction unit_indicator(const FactorGrid& g) {
    return GridFunction::sample(g, g, [](const BiPoint& z) {
        auto in = [](Complex w) { return w.real() >= 0.0 && w.real() < 1.0 && w.imag() < 1.0; };
        return in(z.z1) && in(z.z2) ? 1.0 : 0.0;
    });
}

GridFunction random_sparse(const FactorGrid& g, std::mt19937_64& rng, double fill = 0.1) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GridFunction f(g, g);
    for (auto& v : f.values)
        if (u(rng) < fill) v = std::ldexp(u(rng), int(8 * u(rng)));
    return f;
}

// Weighted average of f over Q_{I1} x Q_{I2} from cell overlaps, without the kernels.
double brute_average(const GridFunction& f, const Interval& i1, const Interval& i2, const Weights& a) {
    double s = 0.0;
    for (std::size_t c1 = 0; c1 < f.g1.cells(); ++c1) {
        const double o1 = f.g1.overlap(c1, i1, a[0]);
        if (o1 == 0.0) continue;
        for (std::size_t c2 = 0; c2 < f.g2.cells(); ++c2) s += o1 * f.g2.overlap(c2, i2, a[1]) * f.at(c1, c2);
    }
    return s / (square_volume(i1.length, a[0]) * square_volume(i2.length, a[1]));
}

bool in_square(const Interval& i, Complex z) { return i.contains(z.real()) && z.imag() > 0.0 && z.imag() < i.length; }

double brute_strong(const MaximalOperator& op, const GridFunction& f, const Weights& a, const BiPoint& z) {
    double best = 0.0;
    for (const auto& i1 : op.family(0).intervals)
        if (in_square(i1, z.z1))
            for (const auto& i2 : op.family(1).intervals)
                if (in_square(i2, z.z2)) best = std::max(best, brute_average(f, i1, i2, a));
    return best;
}

}  // namespace

TEST_CASE("shifted dyadic intervals") {
    const DyadicInterval d{-1, 2, Shift::OneThird};
    CHECK(d.length() == 0.5);
    CHECK(d.left() == doctest::Approx(0.5 * (2.0 - 1.0 / 3.0)));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        for (int j : {-4, 0, 3})
            for (Shift b : {Shift::Zero, Shift::OneThird}) CHECK(DyadicInterval::containing(x, j, b).interval().contains(x));
    }
}

TEST_CASE("dyadic cover examples") {
    const auto a = dyadic_cover({0.0, 0.5});
    CHECK(a.beta == Shift::Zero);
    CHECK(a.left() == 0.0);
    CHECK(a.length() == 0.5);
    const auto b = dyadic_cover({0.9, 0.2});
    CHECK(b.beta == Shift::OneThird);
    CHECK(b.j == -1);
    CHECK(b.left() == doctest::Approx(5.0 / 6.0));
    CHECK(b.interval().right() == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("dyadic cover is the shortest covering interval of either grid") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lg(-10.0, 10.0), pos(-100.0, 100.0);
    for (int n = 0; n < 2000; ++n) {
        const Interval I{pos(rng), std::exp2(lg(rng))};
        const auto J = dyadic_cover(I);
        CHECK(J.interval().contains(I));
        CHECK(J.length() <= 6.0 * I.length);
        // scan scales upward from below |I|; the first scale with a covering interval in either grid wins
        int best = 1000;
        for (int j = std::ilogb(I.length) - 1; j <= std::ilogb(I.length) + 4 && best == 1000; ++j)
            for (Shift s : {Shift::Zero, Shift::OneThird})
                if (DyadicInterval::containing(I.left, j, s).interval().contains(I)) best = j;
        CHECK(J.j == best);
    }
}

TEST_CASE("Carleson volumes") {
    CHECK(carleson_volume(unit_rect(), {0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(square_volume(2.0, 1.0) == doctest::Approx(4.0));
    CHECK(top_volume(unit_rect(), {0.0, 0.0}) == doctest::Approx(0.25));
    for (double a : {0.0, 0.5, 2.0}) {
        const Rectangle r{{0.0, 1.5}, {2.0, 0.25}};
        CHECK(top_volume(r, {a, a}) / carleson_volume(r, {a, a}) ==
              doctest::Approx(std::pow(1.0 - std::exp2(-(a + 1.0)), 2)));
    }
    CHECK(height_weight(0.5, 1.0, 0.0) == doctest::Approx(0.5));
    CHECK(height_weight(0.0, 2.0, 2.0) == doctest::Approx(8.0 / 3.0));
    CHECK_THROWS_AS(carleson_volume(unit_rect(), {-1.0, 0.0}), DomainError);
}

TEST_CASE("Carleson boxes and tops") {
    const CarlesonBox q{unit_rect()};
    CHECK(q.contains({{0.5, 0.5}, {0.1, 0.99}}));
    CHECK_FALSE(q.contains({{0.5, 1.0}, {0.1, 0.5}}));
    CHECK(q.top_contains({{0.5, 0.75}, {0.9, 0.6}}));
    CHECK_FALSE(q.top_contains({{0.5, 0.25}, {0.9, 0.6}}));
}

TEST_CASE("measures") {
    auto mu = point_mass({0.5, 0.5}, {0.5, 0.5}, 2.0);
    mu.add({{5.0, 1.0}, {0.0, 1.0}}, 1.0);
    CHECK(mu.total() == 3.0);
    CHECK(mu.mass_in(CarlesonBox{unit_rect()}) == 2.0);
    const auto s = mu.scaled(0.5);
    CHECK(s.total() == 1.5);
    CHECK_THROWS_AS(mu.add({{0.0, 0.0}, {0.0, 1.0}}, 1.0), DomainError);
    CHECK_THROWS_AS(mu.add({{0.0, 1.0}, {0.0, 1.0}}, -1.0), DomainError);
}

TEST_CASE("measure files") {
    std::istringstream in("# two masses\n0 1 0 1 0.5\n\n  2.5 0.25 -1 3 2 # trailing\n");
    const auto mu = read_measure(in, "m.txt");
    REQUIRE(mu.points.size() == 2);
    CHECK(mu.points[1].z.z1 == Complex(2.5, 0.25));
    CHECK(mu.points[1].z.z2 == Complex(-1.0, 3.0));
    CHECK(mu.points[1].mass == 2.0);

    auto error_of = [](const std::string& text) {
        std::istringstream s(text);
        try {
            read_measure(s, "m.txt");
        } catch (const DomainError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(error_of("0 1 0 1 1\n0 1 0 1\n").find("m.txt:2") != std::string::npos);
    CHECK(error_of("0 1 0 1 1 7\n").find("m.txt:1") != std::string::npos);
    CHECK(error_of("0 1 0 x 1\n").find("m.txt:1") != std::string::npos);
    CHECK(error_of("\n\n0 -1 0 1 1\n").find("m.txt:3") != std::string::npos);
}

TEST_CASE("grid functions") {
    const auto g = FactorGrid::dyadic(2, 2);
    CHECK(g.nx == 4);
    CHECK(g.rows() == 5);
    CHECK(g.y_top() == 4.0);
    REQUIRE(g.locate({0.3, 0.1}));
    CHECK(g.column(*g.locate({0.3, 0.1})) == 1);
    CHECK_FALSE(g.locate({1.0, 0.1}));
    CHECK_FALSE(g.locate({0.5, 4.0}));
    double total = 0.0;
    for (std::size_t c = 0; c < g.cells(); ++c) {
        total += g.cell_volume(c, 1.0);
        CHECK(g.overlap(c, {-10.0, 20.0}, 1.0) == doctest::Approx(g.cell_volume(c, 1.0)));
    }
    CHECK(total == doctest::Approx(8.0));  // [0,1) x (0,4) against y dy

    GridFunction one(g, g);
    for (auto& v : one.values) v = 1.0;
    CHECK(one.norm_p(3.0, {1.0, 0.0}) == doctest::Approx(std::cbrt(8.0 * 4.0)));
    CHECK(one({{0.5, 0.5}, {0.5, 5.0}}) == 0.0);

    std::istringstream vals("0.3 0.1 0.6 2.5 4\n# c\n0.9 3.9 0.0 0.01 1.5\n");
    GridFunction f(g, g);
    read_grid_values(vals, f, "f.txt");
    CHECK(f({{0.3, 0.1}, {0.6, 2.5}}) == 4.0);
    CHECK(f({{0.8, 3.0}, {0.1, 0.2}}) == 1.5);
    std::istringstream bad("0.3 0.1 0.6 2.5 4\n2 0.1 0.5 0.5 1\n");
    try {
        read_grid_values(bad, f, "f.txt");
        FAIL("expected an error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("f.txt:2") != std::string::npos);
    }
}

TEST_CASE("strong maximal function of the unit indicator") {
    const auto g = FactorGrid::dyadic(2, 3);
    const auto f = unit_indicator(g);
    const Weights a{0.0, 0.0};
    const MaximalOperator strong(f, a, MaximalVariant::strong());
    CHECK(strong({{0.5, 0.5}, {0.5, 0.5}}) == doctest::Approx(1.0));
    const BiPoint far{{0.5, 2.5}, {0.5, 2.5}};
    const double v = strong(far);
    CHECK(v < 1.0);
    CHECK(v == doctest::Approx(brute_strong(strong, f, a, far)).epsilon(1e-12));
    // the best box over (x, 2.5i) is Q_[0,3) or shorter: at most (1 / 2.5^2)^2
    CHECK(v <= std::pow(1.0 / 6.25, 2) * (1 + 1e-12));
    CHECK_THROWS_AS(strong({{0.5, 9.0}, {0.5, 0.5}}), DomainError);
}

TEST_CASE("maximal operators against brute force, and their order") {
    std::mt19937_64 rng(23);
    const auto g = FactorGrid::dyadic(2, 2);
    const auto f = random_sparse(g, rng, 0.3);
    for (const Weights& a : {Weights{0.0, 0.0}, Weights{1.0, 0.5}}) {
        const MaximalOperator strong(f, a, MaximalVariant::strong());
        const MaximalOperator dy(f, a, MaximalVariant::dyadic());
        const MaximalOperator it(f, a, MaximalVariant::iterated());
        const auto ms = strong.on_cells(), md = dy.on_cells(), mi = it.on_cells();
        for (std::size_t c1 = 0; c1 < g.cells(); c1 += 3)
            for (std::size_t c2 = 0; c2 < g.cells(); c2 += 2) {
                const BiPoint z = f.center(c1, c2);
                CHECK(ms.at(c1, c2) == doctest::Approx(brute_strong(strong, f, a, z)).epsilon(1e-12));
                CHECK(md.at(c1, c2) == doctest::Approx(brute_strong(dy, f, a, z)).epsilon(1e-12));
            }
        for (std::size_t k = 0; k < f.size(); ++k) {
            CHECK(md.values[k] <= ms.values[k] * (1 + 1e-12));
            CHECK(ms.values[k] <= mi.values[k] * (1 + 1e-12));
        }
    }
}

TEST_CASE("serial and OpenMP backends agree bitwise") {
    std::mt19937_64 rng(29);
    const auto g = FactorGrid::dyadic(3, 3);
    const auto f = random_sparse(g, rng);
    for (auto var : {MaximalVariant::strong(), MaximalVariant::dyadic(Shift::OneThird, Shift::Zero),
                     MaximalVariant::iterated(), MaximalVariant::one_param(1)}) {
        const MaximalOperator op(f, {0.5, 0.0}, var);
        CHECK(op.on_cells(Backend::Serial).values == op.on_cells(Backend::OpenMP).values);
        std::vector<BiPoint> pts;
        std::uniform_real_distribution<double> x(0.0, 1.0), y(0.01, 7.9);
        for (int i = 0; i < 64; ++i) pts.push_back({{x(rng), y(rng)}, {x(rng), y(rng)}});
        const auto a = op.field(pts, Backend::Serial);
        CHECK(a == op.field(pts, Backend::OpenMP));
        for (std::size_t i = 0; i < pts.size(); i += 9) CHECK(a[i] == op(pts[i]));
    }

    const MaximalOperator op(f, {0.0, 0.0}, MaximalVariant::strong());
    const auto& w1 = op.family(0).weights;
    const auto& w2 = op.family(1).weights;
    const auto t1 = kernels::serial::box_averages(f.values, g.cells(), w1, w2);
    CHECK(t1 == kernels::omp::box_averages(f.values, g.cells(), w1, w2));
    kernels::IndexLists in1(40), in2(40);
    std::uniform_int_distribution<std::uint32_t> p1(0, std::uint32_t(w1.size() - 1)), p2(0, std::uint32_t(w2.size() - 1));
    for (std::size_t p = 0; p < in1.size(); ++p)
        for (std::size_t k = 0; k < p % 7; ++k) {
            in1[p].push_back(p1(rng));
            in2[p].push_back(p2(rng));
        }
    const auto m1 = kernels::serial::pair_max(t1, w2.size(), in1, in2);
    CHECK(m1 == kernels::omp::pair_max(t1, w2.size(), in1, in2));
    CHECK(m1[0] == 0.0);
    double want = 0.0;
    for (auto a : in1[6])
        for (auto b : in2[6]) want = std::max(want, t1[a * w2.size() + b]);
    CHECK(m1[6] == want);
}

TEST_CASE("Carleson ratio of point masses") {
    const Weights a{0.0, 0.0};
    const auto mu = point_mass({0.0, 1.0}, {0.0, 1.0});
    CHECK(carleson_ratio_sup(mu, a, 1.0).ratio == doctest::Approx(1.0 / 16.0));
    // centred boxes of length y (1 + 2^-l): ratio (1 + 2^-l)^-4
    for (int l : {2, 6, 12})
        CHECK(carleson_ratio_sup(mu, a, 1.0, point_adapted_family(mu, l)).ratio ==
              doctest::Approx(std::pow(1.0 + std::exp2(-l), -4)).epsilon(1e-12));
    CHECK(carleson_ratio_sup(DiscreteMeasure{}, a, 1.0).ratio == 0.0);

    auto two = mu;
    two.add({{1000.0, 1.0}, {-1000.0, 1.0}}, 1.0);
    CHECK(carleson_ratio_sup(two, a, 1.0).ratio == doctest::Approx(1.0 / 16.0));

    const auto base = carleson_ratio_sup(two, a, 1.5);
    const auto scaled = carleson_ratio_sup(two.scaled(3.0), a, 1.5);
    CHECK(scaled.ratio == doctest::Approx(3.0 * base.ratio));
    REQUIRE(base.witness);
    REQUIRE(scaled.witness);
    CHECK(scaled.witness->i1.left == base.witness->i1.left);
    CHECK(scaled.witness->i2.length == base.witness->i2.length);

    CHECK(covering_comparison_constant(a, 1.0) == doctest::Approx(1296.0));
    CHECK_THROWS_AS(carleson_ratio_sup(mu, a, 0.5), DomainError);
}

TEST_CASE("test functions f_w") {
    const BiPoint w{{0.0, 1.0}, {0.0, 1.0}};
    CHECK(std::abs(testfn_fw(w, 2.0, {0.0, 0.0}, w) - 1.0 / 16.0) < 1e-15);
    CHECK(std::abs(testfn_fw(w, 4.0, {0.0, 0.0}, w) - 0.25) < 1e-15);
    CHECK_THROWS_AS(testfn_fw(w, 2.0, {0.0, 0.0}, {{0.0, -1.0}, {0.0, 1.0}}), DomainError);

    // per factor: s^{2+a} int dx dy y^a / |z - conj w|^{4+2a} = sqrt(pi) G(3/2+a) / G(2+a) B(a+1, a+2)
    auto factor = [](double a) {
        return std::sqrt(kPi) * std::tgamma(1.5 + a) / std::tgamma(2.0 + a) * std::tgamma(a + 1) * std::tgamma(a + 2) /
               std::tgamma(2 * a + 3);
    };
    for (const BiPoint& v : {w, BiPoint{{3.0, 0.2}, {-1.0, 5.0}}}) {
        CHECK(fw_norm_p(v, 2.0, {0.0, 0.0}) == doctest::Approx(kPi * kPi / 16.0).epsilon(1e-10));
        CHECK(fw_norm_p(v, 3.0, {0.5, -0.5}, 96) == doctest::Approx(factor(0.5) * factor(-0.5)).epsilon(1e-12));
        CHECK(fw_norm_p(v, 3.0, {0.5, -0.5}) == doctest::Approx(factor(0.5) * factor(-0.5)).epsilon(1e-6));
    }
    CHECK(factor(0.5) * factor(-0.5) == doctest::Approx(0.822467033424));
}

TEST_CASE("embedding test values") {
    const Weights a{0.0, 0.0};
    const BiPoint w{{0.0, 1.0}, {0.0, 1.0}};
    const auto mu = point_mass(w.z1, w.z2);
    auto fw = [&](const BiPoint& z) { return testfn_fw(w, 2.0, a, z); };
    const auto r = half_plane_rule(w.z1, 0.0, 32);
    const auto e = embedding_test(mu, fw, 2.0, 2.0, a, r, r);
    CHECK(e.lhs == doctest::Approx(1.0 / 256.0));
    CHECK(e.rhs == doctest::Approx(kPi * kPi / 16.0).epsilon(1e-8));
    CHECK(embedding_test(mu.scaled(4.0), fw, 2.0, 2.0, a, r, r).lhs == doctest::Approx(4.0 * e.lhs));
    CHECK_THROWS_AS(embedding_test(mu, fw, 2.0, 2.0, {1.0, 0.0}, r, r), DomainError);

    const auto g = FactorGrid::dyadic(2, 2);
    const GridFunction zero(g, g);
    const auto z = embedding_test(mu, zero, 2.0, 3.0, a);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
    GridFunction one(g, g);
    for (auto& v : one.values) v = 1.0;
    const auto o = embedding_test(point_mass({0.5, 0.5}, {0.5, 0.5}, 2.0), one, 2.0, 4.0, a);
    CHECK(o.lhs == doctest::Approx(2.0));
    CHECK(o.rhs == doctest::Approx(256.0));  // (4 * 4)^{4/2}
}

TEST_CASE("necessity probe bounds the embedding constant below") {
    const Weights a{0.0, 0.0};
    auto mu = point_mass({0.0, 1.0}, {0.0, 1.0});
    mu.add({{2.0, 0.5}, {1.0, 2.0}}, 0.5);
    const auto n = necessity_probe(mu, 2.0, 2.0, a, default_family(mu));
    CHECK(n.carleson_sup == doctest::Approx(carleson_ratio_sup(mu, a, 1.0).ratio));
    CHECK(n.fw_lower > 0.0);
    CHECK(n.ratio == doctest::Approx(n.carleson_sup / n.fw_lower));
}

TEST_CASE("level sets of the dyadic maximal function") {
    std::mt19937_64 rng(31);
    const auto g = FactorGrid::dyadic(3, 3);
    for (int rep = 0; rep < 3; ++rep) {
        const auto f = random_sparse(g, rng);
        const auto d = level_set_trace(f, {0.0, 0.5});
        CHECK(d.all_covered());
        CHECK(d.disjoint);
        CHECK(d.nested);
        std::vector<int> hits(f.size(), 0);
        for (const auto& b : d.bands)
            for (std::size_t k = 0; k < f.size(); ++k)
                if (b.mask[k]) {
                    ++hits[k];
                    CHECK(d.maximal.values[k] > std::ldexp(1.0, b.k));
                    CHECK(d.maximal.values[k] <= std::ldexp(1.0, b.k + 1));
                }
        for (std::size_t k = 0; k < f.size(); ++k) CHECK(hits[k] == (d.maximal.values[k] > 0.0 ? 1 : 0));
        const MaximalOperator dy(f, {0.0, 0.5}, MaximalVariant::dyadic());
        CHECK(d.maximal.values == dy.on_cells().values);
    }
}

TEST_CASE("embedding chain holds step by step") {
    std::mt19937_64 rng(37);
    const auto g = FactorGrid::dyadic(3, 3);
    const auto f = random_sparse(g, rng);
    auto mu = point_mass({0.3, 0.2}, {0.6, 0.7});
    mu.add({{0.8, 1.5}, {0.1, 0.05}}, 2.0);
    const auto c = embedding_chain(mu, f, 2.0, 3.0, {0.0, 0.0});
    CHECK(c.holds);
    CHECK(c.lhs <= c.steps[0] * (1 + 1e-12));
    for (std::size_t i = 1; i < c.steps.size(); ++i) CHECK(c.steps[i - 1] <= c.steps[i] * (1 + 1e-12));
    CHECK(c.tops_sum <= c.tops_bound * (1 + 1e-12));
    CHECK(c.rhs == doctest::Approx(c.c_prime * c.carleson_constant * std::pow(c.norm_pp, 1.5)));
}

TEST_CASE("top halves tile the window") {
    const Window w;
    const auto r = tiling_check(w, w, 4);
    CHECK(r.ok());
    CHECK(r.tiles > 0);
    CHECK(r.window_volume == doctest::Approx(std::pow(0.9375, 2)));
    // crossing rectangles keep disjoint tops
    const Rectangle a{{0.0, 1.0}, {0.0, 0.25}}, b{{0.0, 0.5}, {0.0, 1.0}};
    CHECK_FALSE(tops_overlap(a, b));
    CHECK(tops_overlap(a, a));
    CHECK_FALSE(tops_overlap(a, {{1.0, 1.0}, {0.0, 0.25}}));
    CHECK(top_volume({{0.0, 1.0}, {0.0, 2.0}}, {0.0, 0.0}) == doctest::Approx(0.5 * 2.0));
}
