#include "carleson/dyadic.hpp"

#include "carleson/errors.hpp"
#include "carleson/kernels/maximal.hpp"
#include "carleson/numerics/gauss_legendre.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>
#include <tuple>

namespace carleson::dyadic {

std::string_view to_string(Shift b) { return b == Shift::Zero ? "0" : "1/3"; }

double shift_value(Shift b) { return b == Shift::Zero ? 0.0 : 1.0 / 3.0; }

namespace {

double signed_shift(int j, Shift b) { return (j % 2 == 0 ? 1.0 : -1.0) * shift_value(b); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

double DyadicInterval::length() const { return std::ldexp(1.0, j); }

double DyadicInterval::left() const { return std::ldexp(double(m) + signed_shift(j, beta), j); }

DyadicInterval DyadicInterval::containing(double x, int j, Shift beta) {
    DyadicInterval d{j, std::int64_t(std::floor(std::ldexp(x, -j) - signed_shift(j, beta))), beta};
    while (d.left() > x) --d.m;
    while (d.left() + d.length() <= x) ++d.m;
    return d;
}

bool CarlesonBox::contains(const BiPoint& z) const {
    return base.i1.contains(z.z1.real()) && z.z1.imag() > 0.0 && z.z1.imag() < base.i1.length &&
           base.i2.contains(z.z2.real()) && z.z2.imag() > 0.0 && z.z2.imag() < base.i2.length;
}

bool CarlesonBox::top_contains(const BiPoint& z) const {
    return contains(z) && z.z1.imag() > 0.5 * base.i1.length && z.z2.imag() > 0.5 * base.i2.length;
}

void validate_weights(const Weights& alpha) {
    for (double a : alpha)
        if (!(a > -1.0) || !std::isfinite(a)) throw DomainError("weight exponent must be > -1, got " + fmt(a));
}

double square_volume(double length, double alpha) {
    if (!(alpha > -1.0)) throw DomainError("weight exponent must be > -1, got " + fmt(alpha));
    return std::pow(length, alpha + 2.0) / (alpha + 1.0);
}

double carleson_volume(const Rectangle& r, const Weights& alpha) {
    validate_weights(alpha);
    if (!(r.i1.length > 0.0) || !(r.i2.length > 0.0)) throw DomainError("carleson_volume: empty rectangle");
    return square_volume(r.i1.length, alpha[0]) * square_volume(r.i2.length, alpha[1]);
}

double top_volume(const Rectangle& r, const Weights& alpha) {
    return carleson_volume(r, alpha) * (1.0 - std::pow(2.0, -(alpha[0] + 1.0))) *
           (1.0 - std::pow(2.0, -(alpha[1] + 1.0)));
}

double height_weight(double lo, double hi, double alpha) {
    if (!(hi > lo)) return 0.0;
    return (std::pow(hi, alpha + 1.0) - std::pow(lo, alpha + 1.0)) / (alpha + 1.0);
}

DyadicInterval dyadic_cover(const Interval& i) {
    if (!(i.length > 0.0) || !std::isfinite(i.left)) throw DomainError("dyadic_cover: need |I| > 0");
    for (int j = std::ilogb(i.length);; ++j)
        for (Shift b : {Shift::Zero, Shift::OneThird}) {
            const DyadicInterval d = DyadicInterval::containing(i.left, j, b);
            if (d.left() + d.length() >= i.right()) return d;
        }
}

// ---------------------------------------------------------------- measures

void DiscreteMeasure::add(const BiPoint& z, double mass) {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("DiscreteMeasure: masses must be positive");
    if (!(z.z1.imag() > 0.0) || !(z.z2.imag() > 0.0))
        throw DomainError("DiscreteMeasure: points need positive imaginary parts");
    points.push_back({z, mass});
}

double DiscreteMeasure::total() const {
    double s = 0.0;
    for (const auto& p : points) s += p.mass;
    return s;
}

double DiscreteMeasure::mass_in(const CarlesonBox& q) const {
    double s = 0.0;
    for (const auto& p : points)
        if (q.contains(p.z)) s += p.mass;
    return s;
}

DiscreteMeasure DiscreteMeasure::scaled(double lambda) const {
    if (!(lambda > 0.0)) throw DomainError("DiscreteMeasure::scaled: need lambda > 0");
    DiscreteMeasure m = *this;
    for (auto& p : m.points) p.mass *= lambda;
    return m;
}

namespace {

struct NumberedRecord {
    int line;
    MassPoint rec;
};

std::vector<NumberedRecord> parse_records(std::istream& in, const std::string& source) {
    std::vector<NumberedRecord> out;
    std::string line;
    for (int no = 1; std::getline(in, line); ++no) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::array<double, 5> v{};
        int n = 0;
        std::string tok;
        const std::string where = source + ":" + std::to_string(no) + ": ";
        while (ls >> tok) {
            if (n == 5) throw DomainError(where + "more than 5 fields");
            try {
                std::size_t used = 0;
                v[n] = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw DomainError(where + "field " + std::to_string(n + 1) + " is not a number: '" + tok + "'");
            }
            ++n;
        }
        if (n == 0) continue;
        if (n != 5)
            throw DomainError(where + "expected 'x1 y1 x2 y2 value', got " + std::to_string(n) + " fields");
        out.push_back({no, {{{v[0], v[1]}, {v[2], v[3]}}, v[4]}});
    }
    return out;
}

}  // namespace

std::vector<MassPoint> read_records(std::istream& in, const std::string& source) {
    std::vector<MassPoint> out;
    for (const auto& r : parse_records(in, source)) out.push_back(r.rec);
    return out;
}

DiscreteMeasure read_measure(std::istream& in, const std::string& source) {
    DiscreteMeasure mu;
    for (const auto& r : parse_records(in, source)) {
        try {
            mu.add(r.rec.z, r.rec.mass);
        } catch (const DomainError& e) {
            throw DomainError(source + ":" + std::to_string(r.line) + ": " + e.what());
        }
    }
    return mu;
}

// ---------------------------------------------------------------- grids

void FactorGrid::validate() const {
    if (!(dx > 0.0) || nx == 0) throw DomainError("FactorGrid: need dx > 0 and at least one column");
    if (y_edges.size() < 2 || y_edges.front() != 0.0) throw DomainError("FactorGrid: rows must start at height 0");
    for (std::size_t i = 1; i < y_edges.size(); ++i)
        if (!(y_edges[i] > y_edges[i - 1])) throw DomainError("FactorGrid: row edges must increase");
}

std::optional<std::size_t> FactorGrid::locate(Complex z) const {
    const double x = z.real(), y = z.imag();
    if (!(x >= x0) || !(x < x_end()) || !(y > 0.0) || !(y < y_top())) return std::nullopt;
    const std::size_t col = std::min(nx - 1, std::size_t((x - x0) / dx));
    const std::size_t row = std::size_t(std::upper_bound(y_edges.begin(), y_edges.end(), y) - y_edges.begin()) - 1;
    return col * rows() + row;
}

Complex FactorGrid::center(std::size_t c) const {
    const std::size_t r = row(c);
    return {x0 + dx * (double(column(c)) + 0.5), 0.5 * (y_edges[r] + y_edges[r + 1])};
}

double FactorGrid::overlap(std::size_t c, const Interval& i, double alpha) const {
    const double xl = x0 + dx * double(column(c));
    const double w = std::min(xl + dx, i.right()) - std::max(xl, i.left);
    if (!(w > 0.0)) return 0.0;
    const std::size_t r = row(c);
    return w * height_weight(y_edges[r], std::min(y_edges[r + 1], i.length), alpha);
}

double FactorGrid::cell_volume(std::size_t c, double alpha) const {
    const std::size_t r = row(c);
    return dx * height_weight(y_edges[r], y_edges[r + 1], alpha);
}

bool FactorGrid::cell_inside(std::size_t c, const Interval& i) const {
    const double xl = x0 + dx * double(column(c));
    return xl >= i.left && xl + dx <= i.right() && y_edges[row(c) + 1] <= i.length;
}

FactorGrid FactorGrid::dyadic(int levels, int top) {
    if (levels < 0 || top < 0) throw DomainError("FactorGrid::dyadic: need levels, top >= 0");
    FactorGrid g;
    g.x0 = 0.0;
    g.dx = std::ldexp(1.0, -levels);
    g.nx = std::size_t(1) << levels;
    g.y_edges = {0.0};
    for (int j = -levels; j <= top; ++j) g.y_edges.push_back(std::ldexp(1.0, j));
    return g;
}

GridFunction::GridFunction(FactorGrid a, FactorGrid b) : g1(std::move(a)), g2(std::move(b)) {
    g1.validate();
    g2.validate();
    values.assign(g1.cells() * g2.cells(), 0.0);
}

double GridFunction::operator()(const BiPoint& z) const {
    auto a = g1.locate(z.z1), b = g2.locate(z.z2);
    if (!a || !b) return 0.0;
    return at(*a, *b);
}

BiPoint GridFunction::center(std::size_t c1, std::size_t c2) const { return {g1.center(c1), g2.center(c2)}; }

double GridFunction::norm_p(double p, const Weights& alpha) const {
    if (!(p >= 1.0)) throw DomainError("norm_p: need p >= 1");
    validate_weights(alpha);
    double s = 0.0;
    for (std::size_t c1 = 0; c1 < g1.cells(); ++c1) {
        double row = 0.0;
        for (std::size_t c2 = 0; c2 < g2.cells(); ++c2)
            row += std::pow(std::abs(at(c1, c2)), p) * g2.cell_volume(c2, alpha[1]);
        s += row * g1.cell_volume(c1, alpha[0]);
    }
    return std::pow(s, 1.0 / p);
}

void read_grid_values(std::istream& in, GridFunction& f, const std::string& source) {
    for (const auto& r : parse_records(in, source)) {
        auto a = f.g1.locate(r.rec.z.z1), b = f.g2.locate(r.rec.z.z2);
        if (!a || !b) throw DomainError(source + ":" + std::to_string(r.line) + ": point lies outside the grid");
        f.at(*a, *b) = r.rec.mass;
    }
}

// ---------------------------------------------------------------- families

ScaleRange grid_scales(const FactorGrid& g) {
    g.validate();
    const double extent = std::max(g.x_end() - g.x0, g.y_top());
    return {std::ilogb(g.dx), int(std::ceil(std::log2(extent))) + 1};
}

std::vector<Interval> dyadic_intervals(const FactorGrid& g, Shift beta, ScaleRange range) {
    std::vector<Interval> out;
    for (int j = range.j_min; j <= range.j_max; ++j)
        for (DyadicInterval d = DyadicInterval::containing(g.x0, j, beta); d.left() < g.x_end(); ++d.m)
            out.push_back(d.interval());
    return out;
}

std::vector<Interval> lattice_intervals(const FactorGrid& g) {
    const ScaleRange range = grid_scales(g);
    const double max_len = std::ldexp(1.0, range.j_max);
    const std::ptrdiff_t n = std::ptrdiff_t(g.nx);
    const std::ptrdiff_t stride = std::max<std::ptrdiff_t>(1, n / 16);
    const double step = g.dx * double(stride);
    const std::ptrdiff_t k = (n + stride - 1) / stride;
    std::vector<Interval> out;
    for (std::ptrdiff_t a = -k; a < k; ++a)
        for (std::ptrdiff_t b = std::max<std::ptrdiff_t>(a + 1, 1); b <= 2 * k; ++b) {
            const double len = step * double(b - a);
            if (len <= max_len) out.push_back({g.x0 + step * double(a), len});
        }
    return out;
}

FactorFamily make_family(const FactorGrid& g, double alpha, const std::vector<Interval>& intervals,
                         const std::string& tag) {
    FactorFamily fam;
    fam.intervals = intervals;
    fam.tags.assign(intervals.size(), tag);
    fam.weights.resize(intervals.size());
    fam.volumes.resize(intervals.size());
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const Interval& I = intervals[i];
        const double vol = square_volume(I.length, alpha);
        fam.volumes[i] = vol;
        const double lo = std::floor((I.left - g.x0) / g.dx), hi = std::ceil((I.right() - g.x0) / g.dx);
        const std::size_t c_lo = std::size_t(std::clamp(lo, 0.0, double(g.nx)));
        const std::size_t c_hi = std::size_t(std::clamp(hi, 0.0, double(g.nx)));
        for (std::size_t col = c_lo; col < c_hi; ++col)
            for (std::size_t r = 0; r < g.rows() && g.y_edges[r] < I.length; ++r) {
                const std::size_t c = col * g.rows() + r;
                const double w = g.overlap(c, I, alpha);
                if (w > 0.0) fam.weights[i].push_back({std::uint32_t(c), w / vol});
            }
    }
    return fam;
}

namespace {

FactorFamily merge(const FactorFamily& a, const FactorFamily& b) {
    FactorFamily m = a;
    for (std::size_t i = 0; i < b.size(); ++i) {
        m.intervals.push_back(b.intervals[i]);
        m.weights.push_back(b.weights[i]);
        m.volumes.push_back(b.volumes[i]);
        m.tags.push_back(b.tags[i]);
    }
    return m;
}

FactorFamily full_family(const FactorGrid& g, double alpha) {
    const ScaleRange r = grid_scales(g);
    return merge(merge(make_family(g, alpha, lattice_intervals(g), "lattice"),
                       make_family(g, alpha, dyadic_intervals(g, Shift::Zero, r), "D0")),
                 make_family(g, alpha, dyadic_intervals(g, Shift::OneThird, r), "D1/3"));
}

std::vector<std::uint32_t> containing(const FactorFamily& fam, Complex z) {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < fam.size(); ++i)
        if (fam.intervals[i].contains(z.real()) && z.imag() < fam.intervals[i].length) out.push_back(std::uint32_t(i));
    return out;
}

template <class V>
double weighted_sup(const FactorFamily& fam, const std::vector<std::uint32_t>& idx, V&& value) {
    double best = 0.0;
    for (auto i : idx) {
        double s = 0.0;
        for (const auto& [c, w] : fam.weights[i]) s += w * value(c);
        best = std::max(best, s);
    }
    return best;
}

}  // namespace

std::string MaximalVariant::describe() const {
    switch (kind) {
        case Variant::OneParam: return "one-param(axis=" + std::to_string(axis + 1) + ")";
        case Variant::Strong: return "strong";
        case Variant::DyadicStrong:
            return "dyadic-strong(" + std::string(to_string(beta[0])) + "," + std::string(to_string(beta[1])) + ")";
        case Variant::Iterated: return "iterated";
    }
    return "?";
}

MaximalOperator::MaximalOperator(const GridFunction& f, const Weights& alpha, MaximalVariant variant)
    : f_(&f), alpha_(alpha), variant_(variant) {
    validate_weights(alpha);
    if (f.values.size() != f.g1.cells() * f.g2.cells()) throw DomainError("MaximalOperator: malformed grid function");
    if (variant.kind == Variant::OneParam && variant.axis != 0 && variant.axis != 1)
        throw DomainError("MaximalOperator: axis must be 0 or 1");
    if (variant.kind == Variant::DyadicStrong) {
        fam1_ = make_family(f.g1, alpha[0], dyadic_intervals(f.g1, variant.beta[0], grid_scales(f.g1)),
                            "D" + std::string(to_string(variant.beta[0])));
        fam2_ = make_family(f.g2, alpha[1], dyadic_intervals(f.g2, variant.beta[1], grid_scales(f.g2)),
                            "D" + std::string(to_string(variant.beta[1])));
    } else {
        fam1_ = full_family(f.g1, alpha[0]);
        fam2_ = full_family(f.g2, alpha[1]);
    }
    if (variant.kind == Variant::Strong || variant.kind == Variant::DyadicStrong)
        table_ = kernels::omp::box_averages(f.values, f.g2.cells(), fam1_.weights, fam2_.weights);
}

std::string MaximalOperator::family_description() const {
    auto one = [](const FactorFamily& f, const FactorGrid& g) {
        const ScaleRange r = grid_scales(g);
        std::map<std::string, std::size_t> count;
        for (const auto& t : f.tags) ++count[t];
        std::string s;
        for (const auto& [t, n] : count) s += (s.empty() ? "" : "+") + std::to_string(n) + " " + t;
        return s + " (scales 2^" + std::to_string(r.j_min) + "..2^" + std::to_string(r.j_max) + ")";
    };
    return variant_.describe() + ": " + one(fam1_, f_->g1) + " x " + one(fam2_, f_->g2);
}

double MaximalOperator::one_param(const BiPoint& z) const {
    const GridFunction& f = *f_;
    if (variant_.axis == 0) {
        const std::size_t other = *f.g2.locate(z.z2);
        return weighted_sup(fam1_, containing(fam1_, z.z1), [&](std::uint32_t c) { return std::abs(f.at(c, other)); });
    }
    const std::size_t other = *f.g1.locate(z.z1);
    return weighted_sup(fam2_, containing(fam2_, z.z2), [&](std::uint32_t c) { return std::abs(f.at(other, c)); });
}

double MaximalOperator::iterated(const BiPoint& z) const {
    const GridFunction& f = *f_;
    const auto in2 = containing(fam2_, z.z2);
    std::vector<double> inner(f.g1.cells());
    for (std::size_t c1 = 0; c1 < inner.size(); ++c1)
        inner[c1] = weighted_sup(fam2_, in2, [&](std::uint32_t c) { return std::abs(f.at(c1, c)); });
    return weighted_sup(fam1_, containing(fam1_, z.z1), [&](std::uint32_t c) { return inner[c]; });
}

double MaximalOperator::operator()(const BiPoint& z) const {
    if (!f_->g1.locate(z.z1) || !f_->g2.locate(z.z2)) throw DomainError("maximal: point outside the grid");
    switch (variant_.kind) {
        case Variant::OneParam: return one_param(z);
        case Variant::Iterated: return iterated(z);
        default: {
            const auto a = containing(fam1_, z.z1), b = containing(fam2_, z.z2);
            double m = 0.0;
            for (auto i : a)
                for (auto j : b) m = std::max(m, table_[std::size_t(i) * fam2_.size() + j]);
            return m;
        }
    }
}

std::vector<double> MaximalOperator::field(const std::vector<BiPoint>& points, Backend backend) const {
    for (const auto& z : points)
        if (!f_->g1.locate(z.z1) || !f_->g2.locate(z.z2)) throw DomainError("maximal: point outside the grid");
    if (variant_.kind == Variant::Strong || variant_.kind == Variant::DyadicStrong) {
        kernels::IndexLists in1(points.size()), in2(points.size());
        for (std::size_t p = 0; p < points.size(); ++p) {
            in1[p] = containing(fam1_, points[p].z1);
            in2[p] = containing(fam2_, points[p].z2);
        }
        return backend == Backend::Serial ? kernels::serial::pair_max(table_, fam2_.size(), in1, in2)
                                          : kernels::omp::pair_max(table_, fam2_.size(), in1, in2);
    }
    std::vector<double> out(points.size());
    if (backend == Backend::Serial) {
        for (std::size_t p = 0; p < points.size(); ++p) out[p] = (*this)(points[p]);
    } else {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t p = 0; p < std::ptrdiff_t(points.size()); ++p) out[p] = (*this)(points[p]);
    }
    return out;
}

GridFunction MaximalOperator::on_cells(Backend backend) const {
    GridFunction g(f_->g1, f_->g2);
    std::vector<BiPoint> pts;
    pts.reserve(g.size());
    for (std::size_t c1 = 0; c1 < g.g1.cells(); ++c1)
        for (std::size_t c2 = 0; c2 < g.g2.cells(); ++c2) pts.push_back(g.center(c1, c2));
    g.values = field(pts, backend);
    return g;
}

double maximal(const GridFunction& f, const Weights& alpha, MaximalVariant variant, const BiPoint& z) {
    return MaximalOperator(f, alpha, variant)(z);
}

// ---------------------------------------------------------------- Carleson condition

namespace {

struct AxisPoints {
    std::vector<double> x, y;
};

AxisPoints axis_points(const DiscreteMeasure& mu, int axis) {
    AxisPoints a;
    for (const auto& p : mu.points) {
        const Complex z = axis == 0 ? p.z.z1 : p.z.z2;
        a.x.push_back(z.real());
        a.y.push_back(z.imag());
    }
    return a;
}

std::vector<Interval> clamped_dyadic(const AxisPoints& a, int widen) {
    if (a.x.empty()) return {};
    const double ymin = *std::min_element(a.y.begin(), a.y.end());
    const double ymax = *std::max_element(a.y.begin(), a.y.end());
    const auto [xmin, xmax] = std::minmax_element(a.x.begin(), a.x.end());
    const double extent = std::max(*xmax - *xmin, ymax);
    const int j_lo = int(std::floor(std::log2(ymin / 4.0))) - widen;
    const int j_hi = int(std::ceil(std::log2(4.0 * extent))) + widen;
    std::vector<std::tuple<int, int, std::int64_t>> keys;
    for (int j = j_lo; j <= j_hi; ++j)
        for (Shift b : {Shift::Zero, Shift::OneThird})
            for (std::size_t i = 0; i < a.x.size(); ++i)
                if (std::ldexp(1.0, j) > a.y[i])
                    keys.emplace_back(j, int(b), DyadicInterval::containing(a.x[i], j, b).m);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<Interval> out;
    for (const auto& [j, b, m] : keys) out.push_back(DyadicInterval{j, m, Shift(b)}.interval());
    return out;
}

}  // namespace

RectangleFamily default_family(const DiscreteMeasure& mu, int widen) {
    RectangleFamily f;
    f.f1 = clamped_dyadic(axis_points(mu, 0), widen);
    f.f2 = clamped_dyadic(axis_points(mu, 1), widen);
    f.description = "dyadic D0+D1/3, scales clamped to [min height/4, 4 x extent]";
    if (widen != 0) f.description += " widened by " + std::to_string(widen);
    f.description += ", " + std::to_string(f.f1.size()) + " x " + std::to_string(f.f2.size()) + " intervals";
    return f;
}

RectangleFamily default_family(const DiscreteMeasure& mu) { return default_family(mu, 0); }

RectangleFamily point_adapted_family(const DiscreteMeasure& mu, int levels) {
    RectangleFamily f;
    for (int axis = 0; axis < 2; ++axis) {
        auto& out = axis == 0 ? f.f1 : f.f2;
        const AxisPoints a = axis_points(mu, axis);
        for (std::size_t i = 0; i < a.x.size(); ++i)
            for (int l = 0; l <= levels; ++l) {
                const double len = a.y[i] * (1.0 + std::ldexp(1.0, -l));
                out.push_back({a.x[i] - 0.5 * len, len});
            }
    }
    f.description = "point-centered intervals of length y(1+2^-l), l=0.." + std::to_string(levels);
    return f;
}

CarlesonSup carleson_ratio_sup(const DiscreteMeasure& mu, const Weights& alpha, double exponent,
                               const RectangleFamily& family) {
    validate_weights(alpha);
    if (!(exponent >= 1.0)) throw DomainError("carleson_ratio_sup: exponent q/p must be >= 1");
    if (family.size() == 0) throw DomainError("carleson_ratio_sup: empty candidate family");
    CarlesonSup out;
    out.candidates = family.size();
    out.family = family.description;
    const std::size_t n = mu.points.size();
    auto members = [&](const std::vector<Interval>& f, int axis) {
        std::vector<std::vector<char>> in(f.size(), std::vector<char>(n));
        for (std::size_t i = 0; i < f.size(); ++i)
            for (std::size_t p = 0; p < n; ++p) {
                const Complex z = axis == 0 ? mu.points[p].z.z1 : mu.points[p].z.z2;
                in[i][p] = f[i].contains(z.real()) && z.imag() < f[i].length;
            }
        return in;
    };
    const auto in1 = members(family.f1, 0), in2 = members(family.f2, 1);
    std::vector<double> v1(family.f1.size()), v2(family.f2.size());
    for (std::size_t i = 0; i < v1.size(); ++i) v1[i] = std::pow(square_volume(family.f1[i].length, alpha[0]), exponent);
    for (std::size_t i = 0; i < v2.size(); ++i) v2[i] = std::pow(square_volume(family.f2[i].length, alpha[1]), exponent);

    std::vector<double> best(family.f1.size(), 0.0);
    std::vector<std::size_t> arg(family.f1.size(), 0);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t a = 0; a < std::ptrdiff_t(family.f1.size()); ++a) {
        for (std::size_t b = 0; b < family.f2.size(); ++b) {
            double m = 0.0;
            for (std::size_t p = 0; p < n; ++p)
                if (in1[a][p] && in2[b][p]) m += mu.points[p].mass;
            const double r = m / (v1[a] * v2[b]);
            if (r > best[a] * (1.0 + 1e-12)) {
                best[a] = r;
                arg[a] = b;
            }
        }
    }
    for (std::size_t a = 0; a < best.size(); ++a)
        if (best[a] > out.ratio * (1.0 + 1e-12)) {
            out.ratio = best[a];
            out.witness = Rectangle{family.f1[a], family.f2[arg[a]]};
        }
    return out;
}

CarlesonSup carleson_ratio_sup(const DiscreteMeasure& mu, const Weights& alpha, double exponent) {
    if (mu.points.empty()) {
        validate_weights(alpha);
        if (!(exponent >= 1.0)) throw DomainError("carleson_ratio_sup: exponent q/p must be >= 1");
        return {0.0, std::nullopt, 0, "empty measure"};
    }
    return carleson_ratio_sup(mu, alpha, exponent, default_family(mu));
}

double covering_comparison_constant(const Weights& alpha, double exponent) {
    validate_weights(alpha);
    return std::pow(6.0, (alpha[0] + alpha[1] + 4.0) * exponent);
}

// ---------------------------------------------------------------- test functions

Complex testfn_fw(const BiPoint& w, double p, const Weights& alpha, const BiPoint& z) {
    if (!(w.z1.imag() > 0.0) || !(w.z2.imag() > 0.0) || !(z.z1.imag() > 0.0) || !(z.z2.imag() > 0.0))
        throw DomainError("testfn_fw: points must lie in the upper half-planes");
    if (!(p > 0.0)) throw DomainError("testfn_fw: need p > 0");
    auto factor = [](Complex wj, Complex zj, double a) {
        return std::pow(wj.imag(), 1.0 + 0.5 * a) / std::pow(zj - std::conj(wj), 2.0 + a);
    };
    const Complex u = factor(w.z1, z.z1, alpha[0]) * factor(w.z2, z.z2, alpha[1]);
    return p == 2.0 ? u : std::pow(u, 2.0 / p);
}

HalfPlaneRule half_plane_rule(Complex center, double alpha, int nodes) {
    if (!(center.imag() > 0.0) || nodes < 2) throw DomainError("half_plane_rule: need Im c > 0 and 2+ nodes");
    if (!(alpha > -1.0)) throw DomainError("half_plane_rule: weight exponent must be > -1");
    // y = s e^t by the trapezoid rule (the integrand decays exponentially in t both ways),
    // x = Re c + (y + s) tan(theta) by Gauss-Legendre.
    const auto& gl = numerics::gauss_legendre(nodes);
    const double s = center.imag(), h = 0.5 * std::numbers::pi;
    const double t_lo = -36.0 / (alpha + 1.0), t_hi = 36.0 / (alpha + 2.0);
    const int nt = 2 * nodes;
    const double dt = (t_hi - t_lo) / double(nt - 1);
    HalfPlaneRule r;
    r.alpha = alpha;
    r.nodes.reserve(std::size_t(nodes) * std::size_t(nt));
    for (int b = 0; b < nt; ++b) {
        const double y = s * std::exp(t_lo + dt * double(b));
        const double wy = (b == 0 || b == nt - 1 ? 0.5 : 1.0) * dt * std::pow(y, alpha + 1.0);
        for (int a = 0; a < nodes; ++a) {
            const double th = h * gl.nodes[a], ct = std::cos(th);
            r.nodes.emplace_back(center.real() + (y + s) * std::tan(th), y);
            r.weights.push_back(wy * h * gl.weights[a] * (y + s) / (ct * ct));
        }
    }
    return r;
}

double fw_norm_p(const BiPoint& w, double p, const Weights& alpha, int nodes) {
    validate_weights(alpha);
    if (!(p >= 1.0)) throw DomainError("fw_norm_p: need p >= 1");
    double prod = 1.0;
    for (int j = 0; j < 2; ++j) {
        const Complex wj = j == 0 ? w.z1 : w.z2;
        const double a = alpha[j];
        const HalfPlaneRule r = half_plane_rule(wj, a, nodes);
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i)
            s += r.weights[i] * std::pow(wj.imag(), 2.0 + a) / std::pow(std::norm(r.nodes[i] - std::conj(wj)), 2.0 + a);
        prod *= s;
    }
    return prod;
}

EmbeddingValue embedding_test(const DiscreteMeasure& mu, const GridFunction& f, double p, double q,
                              const Weights& alpha) {
    if (!(p > 1.0) || !(q >= p)) throw DomainError("embedding_test: need 1 < p <= q");
    EmbeddingValue e;
    for (const auto& mp : mu.points) e.lhs += mp.mass * std::pow(std::abs(f(mp.z)), q);
    e.rhs = std::pow(f.norm_p(p, alpha), q);
    return e;
}

NecessityProbe necessity_probe(const DiscreteMeasure& mu, double p, double q, const Weights& alpha,
                               const RectangleFamily& family, int nodes) {
    if (!(p > 1.0) || !(q >= p)) throw DomainError("necessity_probe: need 1 < p <= q");
    NecessityProbe out;
    out.carleson_sup = carleson_ratio_sup(mu, alpha, q / p, family).ratio;
    std::map<std::pair<double, double>, double> norm_cache;
    for (const auto& i1 : family.f1)
        for (const auto& i2 : family.f2) {
            const CarlesonBox box{{i1, i2}};
            if (!(mu.mass_in(box) > 0.0)) continue;
            const BiPoint w{{i1.left + 0.5 * i1.length, 0.5 * i1.length}, {i2.left + 0.5 * i2.length, 0.5 * i2.length}};
            auto key = std::pair{i1.length, i2.length};
            auto it = norm_cache.find(key);
            if (it == norm_cache.end()) it = norm_cache.emplace(key, fw_norm_p(w, p, alpha, nodes)).first;
            double lhs = 0.0;
            for (const auto& mp : mu.points) lhs += mp.mass * std::pow(std::abs(testfn_fw(w, p, alpha, mp.z)), q);
            out.fw_lower = std::max(out.fw_lower, lhs / std::pow(it->second, q / p));
        }
    out.ratio = out.fw_lower > 0.0 ? out.carleson_sup / out.fw_lower : 0.0;
    return out;
}

// ---------------------------------------------------------------- level sets

namespace {

// k with 2^k < v <= 2^{k+1}.
int band_of(double v) {
    const int k = std::ilogb(v);
    return std::ldexp(1.0, k) == v ? k - 1 : k;
}

}  // namespace

bool LevelSetDecomposition::all_covered() const {
    for (const auto& b : bands)
        if (!b.covered) return false;
    return true;
}

LevelSetDecomposition level_set_trace(const GridFunction& f, const Weights& alpha,
                                      std::optional<std::pair<int, int>> k_range) {
    for (double v : f.values)
        if (v < 0.0 || !std::isfinite(v)) throw DomainError("level_set_trace: f must be finite and >= 0");
    const MaximalOperator op(f, alpha, MaximalVariant::dyadic());
    LevelSetDecomposition d;
    d.maximal = op.on_cells();
    d.fam1 = op.family(0);
    d.fam2 = op.family(1);
    const std::size_t n1 = d.fam1.size(), n2 = d.fam2.size();
    d.averages.resize(n1 * n2);
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) d.averages[a * n2 + b] = op.average(a, b);

    int lo = 0, hi = -1;
    bool any = false;
    for (double v : d.maximal.values)
        if (v > 0.0) {
            const int k = band_of(v);
            lo = any ? std::min(lo, k) : k;
            hi = any ? std::max(hi, k) : k;
            any = true;
        }
    if (k_range) std::tie(lo, hi) = *k_range;
    d.k_min = lo;
    d.k_max = hi;
    if (hi < lo) return d;

    const std::size_t c1n = f.g1.cells(), c2n = f.g2.cells();
    std::vector<std::vector<char>> inside1(n1, std::vector<char>(c1n)), inside2(n2, std::vector<char>(c2n));
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t c = 0; c < c1n; ++c) inside1[a][c] = f.g1.cell_inside(c, d.fam1.intervals[a]);
    for (std::size_t b = 0; b < n2; ++b)
        for (std::size_t c = 0; c < c2n; ++c) inside2[b][c] = f.g2.cell_inside(c, d.fam2.intervals[b]);

    std::vector<int> seen(d.maximal.size(), 0);
    std::size_t prev_family = std::size_t(-1);
    d.bands.resize(std::size_t(hi - lo + 1));
    for (int k = lo; k <= hi; ++k) {
        LevelBand& band = d.bands[std::size_t(k - lo)];
        band.k = k;
        band.mask.assign(d.maximal.size(), 0);
        for (std::size_t i = 0; i < d.maximal.size(); ++i) {
            const double v = d.maximal.values[i];
            if (v > 0.0 && band_of(v) == k) {
                band.mask[i] = 1;
                ++band.cell_count;
                ++seen[i];
            }
        }
        const double threshold = std::ldexp(1.0, k);
        for (std::size_t r = 0; r < d.averages.size(); ++r) {
            const double v = d.averages[r];
            if (v > threshold) ++band.family_size;
            if (v > 0.0 && band_of(v) == k) band.band.members.push_back({r / n2, r % n2});
        }
        if (band.family_size > prev_family) d.nested = false;
        prev_family = band.family_size;

        std::size_t missing = 0;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : missing)
        for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(band.mask.size()); ++i) {
            if (!band.mask[i]) continue;
            const std::size_t c1 = std::size_t(i) / c2n, c2 = std::size_t(i) % c2n;
            bool ok = false;
            for (const auto& [a, b] : band.band.members)
                if (inside1[a][c1] && inside2[b][c2]) {
                    ok = true;
                    break;
                }
            if (!ok) ++missing;
        }
        band.uncovered = missing;
        band.covered = missing == 0;
    }
    for (int s : seen)
        if (s > 1) d.disjoint = false;
    return d;
}

EmbeddingChain embedding_chain(const DiscreteMeasure& mu, const GridFunction& f, double p, double q,
                               const Weights& alpha) {
    if (!(p > 1.0) || !(q >= p)) throw DomainError("embedding_chain: need 1 < p <= q");
    const MaximalOperator op(f, alpha, MaximalVariant::dyadic());
    const FactorFamily& F1 = op.family(0);
    const FactorFamily& F2 = op.family(1);
    const std::size_t n2 = F2.size();
    const double e = q / p;
    EmbeddingChain c;

    double s0 = 0.0;
    for (const auto& mp : mu.points) {
        const double m = op(mp.z);
        c.lhs += mp.mass * std::pow(m, q);
        if (m > 0.0) s0 += mp.mass * std::pow(2.0, double(band_of(m)) * q);
    }
    c.steps[0] = std::pow(2.0, q) * s0;

    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0, tops = 0.0;
    for (std::size_t a = 0; a < F1.size(); ++a)
        for (std::size_t b = 0; b < n2; ++b) {
            const double avg = op.average(a, b);
            const double vol = F1.volumes[a] * F2.volumes[b];
            const Rectangle R{F1.intervals[a], F2.intervals[b]};
            const double mass = mu.mass_in(CarlesonBox{R});
            if (mass > 0.0) c.carleson_constant = std::max(c.carleson_constant, mass / std::pow(vol, e));
            if (!(avg > 0.0)) continue;
            const double level = std::pow(2.0, double(band_of(avg)) * q);
            s1 += level * mass;
            s2 += level * std::pow(vol, e);
            s3 += std::pow(avg, q) * std::pow(vol, e);
            s4 += std::pow(avg, p) * vol;
            tops += std::pow(avg, p) * top_volume(R, alpha);
        }
    const double two_q = std::pow(2.0, q);
    const double rho = carleson_volume({{0.0, 1.0}, {0.0, 1.0}}, alpha) / top_volume({{0.0, 1.0}, {0.0, 1.0}}, alpha);
    c.steps[1] = two_q * s1;
    c.steps[2] = two_q * c.carleson_constant * s2;
    c.steps[3] = two_q * c.carleson_constant * s3;
    c.steps[4] = two_q * c.carleson_constant * std::pow(s4, e);
    c.steps[5] = two_q * c.carleson_constant * std::pow(rho, e) * std::pow(tops, e);
    const double pp = p / (p - 1.0);
    c.tops_sum = tops;
    c.norm_pp = std::pow(f.norm_p(p, alpha), p);
    c.tops_bound = std::pow(pp, 2.0 * p) * c.norm_pp;
    c.c_prime = two_q * std::pow(rho, e) * std::pow(pp, 2.0 * q);
    c.rhs = c.c_prime * c.carleson_constant * std::pow(c.norm_pp, e);

    const double slack = 1.0 + 1e-9;
    bool ok = c.lhs <= c.steps[0] * slack;
    for (std::size_t i = 0; i + 1 < c.steps.size(); ++i) ok = ok && c.steps[i] <= c.steps[i + 1] * slack;
    ok = ok && c.tops_sum <= c.tops_bound * slack && c.steps[5] <= c.rhs * slack && c.lhs <= c.rhs * slack;
    c.holds = ok;
    return c;
}

// ---------------------------------------------------------------- tiling

bool tops_overlap(const Rectangle& a, const Rectangle& b) {
    auto factor = [](const Interval& i, const Interval& j) {
        const double x = std::min(i.right(), j.right()) - std::max(i.left, j.left);
        const double y = std::min(i.length, j.length) - std::max(0.5 * i.length, 0.5 * j.length);
        return x > 0.0 && y > 0.0;
    };
    return factor(a.i1, b.i1) && factor(a.i2, b.i2);
}

TilingReport tiling_check(const Window& w1, const Window& w2, int depth) {
    for (const Window* w : {&w1, &w2})
        if (!(w->x_hi > w->x_lo) || !(w->y_lo > 0.0) || !(w->y_hi > w->y_lo))
            throw DomainError("tiling_check: window must be a bounded box with positive heights");
    if (depth < 0) throw DomainError("tiling_check: depth must be >= 0");
    auto tiles = [depth](const Window& w) {
        const int top = int(std::ceil(std::log2(w.y_hi)));
        std::vector<Interval> out;
        for (int j = top - depth; j <= top; ++j)
            for (DyadicInterval d = DyadicInterval::containing(w.x_lo, j, Shift::Zero); d.left() < w.x_hi; ++d.m)
                out.push_back(d.interval());
        return out;
    };
    auto clipped = [](const Interval& i, const Window& w) {
        const double x = std::min(i.right(), w.x_hi) - std::max(i.left, w.x_lo);
        const double y = std::min(i.length, w.y_hi) - std::max(0.5 * i.length, w.y_lo);
        return x > 0.0 && y > 0.0 ? x * y : 0.0;
    };
    const auto t1 = tiles(w1), t2 = tiles(w2);
    std::vector<Rectangle> rects;
    TilingReport rep;
    for (const auto& a : t1)
        for (const auto& b : t2) {
            rects.push_back({a, b});
            rep.covered_volume += clipped(a, w1) * clipped(b, w2);
        }
    rep.tiles = rects.size();
    std::size_t overlaps = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : overlaps)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(rects.size()); ++i)
        for (std::size_t j = std::size_t(i) + 1; j < rects.size(); ++j)
            if (tops_overlap(rects[i], rects[j])) ++overlaps;
    rep.overlaps = overlaps;
    rep.pairs_checked = rects.size() * (rects.size() - 1) / 2;
    rep.window_volume = (w1.x_hi - w1.x_lo) * (w1.y_hi - w1.y_lo) * (w2.x_hi - w2.x_lo) * (w2.y_hi - w2.y_lo);
    rep.relative_error = std::abs(rep.covered_volume - rep.window_volume) / rep.window_volume;
    return rep;
}

}  // namespace carleson::dyadic
