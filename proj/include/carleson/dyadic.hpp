#pragma once

#include "carleson/errors.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace carleson::dyadic {

using Complex = std::complex<double>;

enum class Shift { Zero, OneThird };

std::string_view to_string(Shift b);
double shift_value(Shift b);

/// Half-open [left, left + length).
struct Interval {
    double left = 0.0;
    double length = 1.0;

    double right() const { return left + length; }
    bool contains(double x) const { return x >= left && x < right(); }
    bool contains(const Interval& o) const { return o.left >= left && o.right() <= right(); }
};

/// 2^j ([0,1) + m + (-1)^j beta).
struct DyadicInterval {
    int j = 0;
    std::int64_t m = 0;
    Shift beta = Shift::Zero;

    double length() const;
    double left() const;
    Interval interval() const { return {left(), length()}; }
    /// The interval of the grid at scale j that contains x.
    static DyadicInterval containing(double x, int j, Shift beta);
};

struct Rectangle {
    Interval i1, i2;
};

/// A point (x1 + i y1, x2 + i y2) of the product of two upper half-planes.
struct BiPoint {
    Complex z1, z2;
};

/// Q_R = Q_{I1} x Q_{I2} with Q_I = I x (0, |I|); the top half T_I = I x (|I|/2, |I|).
struct CarlesonBox {
    Rectangle base;

    bool contains(const BiPoint& z) const;
    bool top_contains(const BiPoint& z) const;
};

using Weights = std::array<double, 2>;

void validate_weights(const Weights& alpha);

/// V_alpha(Q_I) = |I|^{alpha+2} / (alpha + 1).
double square_volume(double length, double alpha);
double carleson_volume(const Rectangle& r, const Weights& alpha);
double top_volume(const Rectangle& r, const Weights& alpha);
/// Integral of y^alpha over (lo, hi) with 0 <= lo <= hi.
double height_weight(double lo, double hi, double alpha);

/// Smallest J in D^0 or D^{1/3} containing I (ties: beta = 0 first, then the smaller left end).
DyadicInterval dyadic_cover(const Interval& i);

struct MassPoint {
    BiPoint z;
    double mass = 0.0;
};

struct DiscreteMeasure {
    std::vector<MassPoint> points;

    void add(const BiPoint& z, double mass);
    double total() const;
    double mass_in(const CarlesonBox& q) const;
    DiscreteMeasure scaled(double lambda) const;
};

/// Records "x1 y1 x2 y2 value", one per line; '#' starts a comment, blank lines are skipped.
/// Throws DomainError naming the offending line.
std::vector<MassPoint> read_records(std::istream& in, const std::string& source = "input");
DiscreteMeasure read_measure(std::istream& in, const std::string& source = "input");

// ---------------------------------------------------------------- grid functions

/// Cells of one half-plane: nx columns of width dx starting at x0, rows between consecutive y_edges.
struct FactorGrid {
    double x0 = 0.0;
    double dx = 0.125;
    std::size_t nx = 8;
    std::vector<double> y_edges{0.0, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};

    void validate() const;
    std::size_t rows() const { return y_edges.size() - 1; }
    std::size_t cells() const { return nx * rows(); }
    double x_end() const { return x0 + dx * double(nx); }
    double y_top() const { return y_edges.back(); }
    std::size_t column(std::size_t c) const { return c / rows(); }
    std::size_t row(std::size_t c) const { return c % rows(); }
    /// Cell containing x + iy; nullopt outside the grid.
    std::optional<std::size_t> locate(Complex z) const;
    Complex center(std::size_t c) const;
    /// Integral of y^alpha over the part of cell c inside Q_I.
    double overlap(std::size_t c, const Interval& i, double alpha) const;
    double cell_volume(std::size_t c, double alpha) const;
    bool cell_inside(std::size_t c, const Interval& i) const;

    /// Columns of width 2^-levels on [0, 1) and rows (0, 2^-levels), then dyadic rows up to 2^top.
    static FactorGrid dyadic(int levels, int top);
};

/// Piecewise constant on products of cells; value(c1, c2) at values[c1 * cells2 + c2].
struct GridFunction {
    FactorGrid g1, g2;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(FactorGrid a, FactorGrid b);

    std::size_t size() const { return values.size(); }
    double& at(std::size_t c1, std::size_t c2) { return values[c1 * g2.cells() + c2]; }
    double at(std::size_t c1, std::size_t c2) const { return values[c1 * g2.cells() + c2]; }
    /// Value at z; 0 outside the grid.
    double operator()(const BiPoint& z) const;
    BiPoint center(std::size_t c1, std::size_t c2) const;
    double norm_p(double p, const Weights& alpha) const;

    /// Cell midpoint samples of |f|.
    template <class F>
    static GridFunction sample(const FactorGrid& a, const FactorGrid& b, F&& f) {
        GridFunction g(a, b);
        for (std::size_t c1 = 0; c1 < a.cells(); ++c1)
            for (std::size_t c2 = 0; c2 < b.cells(); ++c2) g.at(c1, c2) = std::abs(f(g.center(c1, c2)));
        return g;
    }
};

/// Assigns each record's value to the cell containing its point; records outside the grid are errors.
void read_grid_values(std::istream& in, GridFunction& f, const std::string& source = "input");

// ---------------------------------------------------------------- box families

/// Intervals of one factor with the normalized weights V(cell ∩ Q_I) / V(Q_I) of every cell they meet.
struct FactorFamily {
    std::vector<Interval> intervals;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> weights;
    std::vector<double> volumes;
    std::vector<std::string> tags;

    std::size_t size() const { return intervals.size(); }
};

struct ScaleRange {
    int j_min = 0, j_max = 0;
};

/// Scales from the column width up past the grid's extent and height.
ScaleRange grid_scales(const FactorGrid& g);

/// Dyadic intervals of grid beta at scales in range that meet the grid's columns.
std::vector<Interval> dyadic_intervals(const FactorGrid& g, Shift beta, ScaleRange range);
/// Intervals with endpoints on the column lattice, extended by the grid width on each side.
std::vector<Interval> lattice_intervals(const FactorGrid& g);

FactorFamily make_family(const FactorGrid& g, double alpha, const std::vector<Interval>& intervals,
                         const std::string& tag);

enum class Variant { OneParam, Strong, DyadicStrong, Iterated };

struct MaximalVariant {
    Variant kind = Variant::Strong;
    /// OneParam: the axis (0 or 1) the operator acts on.
    int axis = 0;
    /// DyadicStrong: the grid of each factor.
    std::array<Shift, 2> beta{Shift::Zero, Shift::Zero};

    static MaximalVariant one_param(int axis) { return {Variant::OneParam, axis, {}}; }
    static MaximalVariant strong() { return {Variant::Strong, 0, {}}; }
    static MaximalVariant dyadic(Shift b1 = Shift::Zero, Shift b2 = Shift::Zero) {
        return {Variant::DyadicStrong, 0, {b1, b2}};
    }
    static MaximalVariant iterated() { return {Variant::Iterated, 0, {}}; }
    std::string describe() const;
};

enum class Backend { Serial, OpenMP };

/// Supremum of weighted averages of |f| over a declared box family, with the box tables built once.
class MaximalOperator {
public:
    MaximalOperator(const GridFunction& f, const Weights& alpha, MaximalVariant variant);

    /// Throws DomainError when z is outside the grid.
    double operator()(const BiPoint& z) const;
    std::vector<double> field(const std::vector<BiPoint>& points, Backend backend = Backend::OpenMP) const;
    /// Values at every cell center, indexed like GridFunction::values.
    GridFunction on_cells(Backend backend = Backend::OpenMP) const;

    const FactorFamily& family(int axis) const { return axis == 0 ? fam1_ : fam2_; }
    /// Average over Q_{I1 x I2} for family indices (a, b); Strong and DyadicStrong only.
    double average(std::size_t a, std::size_t b) const { return table_[a * fam2_.size() + b]; }
    std::string family_description() const;

private:
    double one_param(const BiPoint& z) const;
    double iterated(const BiPoint& z) const;

    const GridFunction* f_;
    Weights alpha_;
    MaximalVariant variant_;
    FactorFamily fam1_, fam2_;
    std::vector<double> table_;
};

double maximal(const GridFunction& f, const Weights& alpha, MaximalVariant variant, const BiPoint& z);

// ---------------------------------------------------------------- Carleson condition

/// Rectangle R = I1 x I2 drawn from per-factor interval lists.
struct RectangleFamily {
    std::vector<Interval> f1, f2;
    std::string description;

    std::size_t size() const { return f1.size() * f2.size(); }
};

/// Both shifts, scales clamped to [min height / 4, 4 * extent], intervals whose squares
/// contain at least one mass point.
RectangleFamily default_family(const DiscreteMeasure& mu);
/// Same with `widen` extra scales on each side.
RectangleFamily default_family(const DiscreteMeasure& mu, int widen);
/// Intervals centered at each mass point with length y (1 + 2^-l), l = 0..levels; probes the
/// continuous supremum.
RectangleFamily point_adapted_family(const DiscreteMeasure& mu, int levels);

struct CarlesonSup {
    double ratio = 0.0;
    std::optional<Rectangle> witness;
    std::size_t candidates = 0;
    std::string family;
};

/// max over R of mu(Q_R) / V(Q_R)^exponent; a later candidate replaces the witness only when it
/// beats it by a relative 1e-12.
CarlesonSup carleson_ratio_sup(const DiscreteMeasure& mu, const Weights& alpha, double exponent,
                               const RectangleFamily& family);
CarlesonSup carleson_ratio_sup(const DiscreteMeasure& mu, const Weights& alpha, double exponent);

/// Every interval lies in a shifted dyadic one at most 6 times longer, so the supremum over all
/// rectangles is at most this factor times the shifted dyadic one.
double covering_comparison_constant(const Weights& alpha, double exponent);

// ---------------------------------------------------------------- test functions, embedding

/// ( prod_j (Im w_j)^{1 + a_j/2} / (z_j - conj w_j)^{2 + a_j} )^{2/p}, principal powers.
Complex testfn_fw(const BiPoint& w, double p, const Weights& alpha, const BiPoint& z);

/// Integral of |f_w|^p dV_alpha, by a tensor rule per factor (|f_w|^p factorizes).
double fw_norm_p(const BiPoint& w, double p, const Weights& alpha, int nodes = 48);

/// Rule for functions on the upper half-plane decaying like |z - conj c|^-4; weights include y^alpha.
struct HalfPlaneRule {
    std::vector<Complex> nodes;
    std::vector<double> weights;
    double alpha = 0.0;
};
HalfPlaneRule half_plane_rule(Complex center, double alpha, int nodes);

struct EmbeddingValue {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio() const { return rhs > 0.0 ? lhs / rhs : 0.0; }
};

/// lhs = sum of masses |f(point)|^q, rhs = (exact cell sum of |f|^p dV)^{q/p}.
EmbeddingValue embedding_test(const DiscreteMeasure& mu, const GridFunction& f, double p, double q,
                              const Weights& alpha);

template <class F>
EmbeddingValue embedding_test(const DiscreteMeasure& mu, F&& f, double p, double q, const Weights& alpha,
                              const HalfPlaneRule& r1, const HalfPlaneRule& r2) {
    if (r1.alpha != alpha[0] || r2.alpha != alpha[1]) throw DomainError("embedding_test: rule built for another weight");
    EmbeddingValue e;
    for (const auto& mp : mu.points) e.lhs += mp.mass * std::pow(std::abs(f(mp.z)), q);
    double s = 0.0;
    for (std::size_t a = 0; a < r1.nodes.size(); ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < r2.nodes.size(); ++b)
            row += r2.weights[b] * std::pow(std::abs(f(BiPoint{r1.nodes[a], r2.nodes[b]})), p);
        s += r1.weights[a] * row;
    }
    e.rhs = std::pow(s, q / p);
    return e;
}

/// Necessity probe for the Carleson condition: for each candidate R with mu(Q_R) > 0, f_w with w
/// the centers of the squares gives the lower bound |f_w|^q dmu / ||f_w||_p^q of the embedding
/// constant. `ratio` = Carleson supremum / best lower bound.
struct NecessityProbe {
    double carleson_sup = 0.0;
    double fw_lower = 0.0;
    double ratio = 0.0;
};
NecessityProbe necessity_probe(const DiscreteMeasure& mu, double p, double q, const Weights& alpha,
                               const RectangleFamily& family, int nodes = 48);

// ---------------------------------------------------------------- level sets

struct RectangleSet {
    std::vector<std::pair<std::size_t, std::size_t>> members;
};

struct LevelBand {
    int k = 0;
    /// Cells with 2^k < M f <= 2^{k+1}, indexed like GridFunction::values.
    std::vector<std::uint8_t> mask;
    std::size_t cell_count = 0;
    /// Rectangles (family index pairs) with average in (2^k, 2^{k+1}].
    RectangleSet band;
    std::size_t family_size = 0;
    /// Every cell of the band lies inside Q_R for some R of `band`.
    bool covered = true;
    std::size_t uncovered = 0;
};

struct LevelSetDecomposition {
    int k_min = 0, k_max = -1;
    std::vector<LevelBand> bands;
    GridFunction maximal;
    /// Family of the dyadic maximal function (grid 0 in both factors).
    FactorFamily fam1, fam2;
    std::vector<double> averages;
    bool disjoint = true;
    bool nested = true;
    bool all_covered() const;
};

/// E_k from the dyadic strong maximal function on cells; k_range defaults to the occupied span.
LevelSetDecomposition level_set_trace(const GridFunction& f, const Weights& alpha,
                                      std::optional<std::pair<int, int>> k_range = std::nullopt);

/// Each inequality of the level-set argument evaluated on data: lhs <= steps[0] <= ... and the
/// final constant C' = 2^q rho^{q/p} (p')^{2q} times the Carleson constant of mu on the family.
struct EmbeddingChain {
    double lhs = 0.0;
    /// 2^q sum 2^{kq} mu(E_k); cover by Q_R; Carleson; averages; l^p into l^q; tops.
    std::array<double, 6> steps{};
    /// sum over band rectangles of avg^p V(T_R), and the maximal bound (p')^{2p} ||f||_p^p.
    double tops_sum = 0.0;
    double tops_bound = 0.0;
    double carleson_constant = 0.0;
    double norm_pp = 0.0;
    double c_prime = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

EmbeddingChain embedding_chain(const DiscreteMeasure& mu, const GridFunction& f, double p, double q,
                               const Weights& alpha);

// ---------------------------------------------------------------- tiling

struct Window {
    double x_lo = 0.0, x_hi = 1.0;
    double y_lo = 0.0625, y_hi = 1.0;
};

struct TilingReport {
    std::size_t tiles = 0;
    std::size_t pairs_checked = 0;
    std::size_t overlaps = 0;
    double window_volume = 0.0;
    double covered_volume = 0.0;
    double relative_error = 0.0;
    bool disjoint() const { return overlaps == 0; }
    bool ok(double tol = 1e-10) const { return disjoint() && relative_error < tol; }
};

/// T_R for standard dyadic R at the depth + 1 scales ending at the smallest 2^j >= y_hi,
/// checked pairwise for overlap and for cover of the window in both factors.
TilingReport tiling_check(const Window& w1, const Window& w2, int depth);

/// T_{R1} and T_{R2} meet in a set of positive volume.
bool tops_overlap(const Rectangle& a, const Rectangle& b);

}  // namespace carleson::dyadic
