#include "carleson/numerics/slice.hpp"

#include "carleson/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace carleson::numerics {

namespace {

struct AxisPlan {
    std::size_t stride = 1;
    std::size_t nodes = 0;  // M: samples 0..M
    std::size_t fft = 0;
    double step = 0.0;
    double dx = 0.0;
};

/// Choose subsampling stride and FFT length for one axis, given the last significant index k_last.
AxisPlan plan_axis(std::size_t k_last, std::size_t stored, double h0, double c, const SliceOptions& o,
                   std::size_t min_nodes) {
    AxisPlan p;
    k_last = std::max<std::size_t>(k_last, 7);
    while (k_last / (2 * p.stride) >= min_nodes && (k_last / (2 * p.stride)) >= 7) {
        const double extent = std::numbers::pi / (c * 2.0 * double(p.stride) * h0);
        if (o.min_extent > 0.0 && extent < o.min_extent) break;
        p.stride *= 2;
    }
    p.nodes = (k_last + p.stride - 1) / p.stride;
    while (p.nodes * p.stride > stored - 1) --p.nodes;
    if (p.nodes < 7) throw DomainError("oscillatory_slice: spectral grid too coarse for the cubic rule");
    p.step = double(p.stride) * h0;
    p.fft = next_pow2(std::max<std::size_t>(o.pad * (p.nodes + 1), 16));
    while (o.max_dx > 0.0 && 2.0 * std::numbers::pi / (double(p.fft) * p.step * c) > o.max_dx) p.fft *= 2;
    p.dx = 2.0 * std::numbers::pi / (double(p.fft) * p.step * c);
    return p;
}

SliceAxis spatial_axis(const AxisPlan& p) { return {-double(p.fft / 2) * p.dx, p.dx, p.fft}; }

std::size_t centred(std::size_t i, std::size_t n) { return (i + n / 2) % n; }

/// Damped samples f(t) exp(-<t,y>) on a uniform grid; n2 = 1 in one dimension.
struct Damped {
    std::vector<Complex> v;
    std::size_t n1 = 0, n2 = 1;
    double h1 = 0.0, h2 = 0.0;
    Complex at(std::size_t i, std::size_t j) const { return v[i * n2 + j]; }
};

Damped damp_stored(const SpectralFunction& f, const ConePoint& y) {
    const auto& sc = f.pairing_scale();
    const bool two = f.cone().dim() == 2;
    const auto& axes = f.grid().axes();
    Damped d;
    d.n1 = axes[0].count;
    d.h1 = axes[0].step;
    if (two) {
        d.n2 = axes[1].count;
        d.h2 = axes[1].step;
    }
    auto v = f.values();
    d.v.resize(v.size());
    std::vector<double> w2(d.n2, 1.0);
    if (two)
        for (std::size_t j = 0; j < d.n2; ++j) w2[j] = std::exp(-sc[1] * double(j) * d.h2 * y[1]);
    for (std::size_t i = 0; i < d.n1; ++i) {
        const double w1 = std::exp(-sc[0] * double(i) * d.h1 * y[0]);
        for (std::size_t j = 0; j < d.n2; ++j) d.v[i * d.n2 + j] = v[i * d.n2 + j] * (w1 * w2[j]);
    }
    return d;
}

Damped damp_resampled(const SpectralFunction& f, const ConePoint& y, double t1, double t2, std::size_t m) {
    const auto& sc = f.pairing_scale();
    const bool two = f.cone().dim() == 2;
    Damped d;
    d.n1 = m + 1;
    d.n2 = two ? m + 1 : 1;
    d.h1 = t1 / double(m);
    d.h2 = two ? t2 / double(m) : 0.0;
    d.v.resize(d.n1 * d.n2);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < std::ptrdiff_t(d.n1); ++ii) {
        const double a = double(ii) * d.h1;
        for (std::size_t j = 0; j < d.n2; ++j) {
            const double b = double(j) * d.h2;
            const ConePoint t = two ? ConePoint{a, b} : ConePoint{a};
            const double damp = sc[0] * a * y[0] + (two ? sc[1] * b * y[1] : 0.0);
            d.v[std::size_t(ii) * d.n2 + j] = f(t) * std::exp(-damp);
        }
    }
    return d;
}

struct Extent {
    std::size_t last1 = 0, last2 = 0;
    double dmax = 0.0;
    std::vector<double> row_max, col_max;
};

/// Last index per axis where the damped magnitude exceeds eps * max.
Extent significant_range(const Damped& d, double eps) {
    Extent e;
    e.row_max.assign(d.n1, 0.0);
    e.col_max.assign(d.n2, 0.0);
    for (std::size_t i = 0; i < d.n1; ++i)
        for (std::size_t j = 0; j < d.n2; ++j) {
            const double m = std::abs(d.at(i, j));
            e.row_max[i] = std::max(e.row_max[i], m);
            e.col_max[j] = std::max(e.col_max[j], m);
        }
    e.dmax = *std::max_element(e.row_max.begin(), e.row_max.end());
    for (std::size_t i = 0; i < d.n1; ++i)
        if (e.row_max[i] > eps * e.dmax) e.last1 = i;
    for (std::size_t j = 0; j < d.n2; ++j)
        if (e.col_max[j] > eps * e.dmax) e.last2 = j;
    return e;
}

Slice slice_from(const Damped& d, const ConePoint& y, const std::array<double, 3>& sc, const SliceOptions& o,
                 const Extent& ext) {
    const bool two = d.n2 > 1;
    Slice s;
    s.height = y;
    s.interpolation_error = std::numeric_limits<double>::quiet_NaN();
    const AxisPlan p1 = plan_axis(ext.last1, d.n1, d.h1, sc[0], o, o.min_nodes);
    double dropped = 0.0;
    for (std::size_t i = p1.nodes * p1.stride + 1; i < d.n1; ++i) dropped = std::max(dropped, ext.row_max[i]);
    s.spectral_step[0] = p1.step;
    s.spectral_extent[0] = double(p1.nodes) * p1.step;
    s.axes.push_back(spatial_axis(p1));
    if (!two) {
        s.truncation_level = ext.dmax > 0.0 ? dropped / ext.dmax : 0.0;
        std::vector<Complex> e(p1.nodes + 1);
        for (std::size_t k = 0; k <= p1.nodes; ++k) e[k] = d.v[k * p1.stride];
        auto raw = fourier_integral_grid(e, p1.step, p1.fft, o.backend);
        s.values.resize(p1.fft);
        for (std::size_t i = 0; i < p1.fft; ++i) s.values[i] = raw[centred(i, p1.fft)];
        if (o.estimate_error && p1.nodes / 2 >= 7) {
            std::vector<Complex> e2(p1.nodes / 2 + 1);
            for (std::size_t k = 0; k < e2.size(); ++k) e2[k] = e[2 * k];
            const std::size_t n2 = p1.fft / 2;
            auto coarse = fourier_integral_grid(e2, 2.0 * p1.step, n2, o.backend);
            double diff = 0.0;
            for (std::size_t i = n2 / 4; i < 3 * n2 / 4; ++i)
                diff = std::max(diff, std::abs(coarse[centred(i, n2)] - s.values[i + p1.fft / 4]));
            s.interpolation_error = diff / 15.0;
        }
        return s;
    }
    const AxisPlan p2 = plan_axis(ext.last2, d.n2, d.h2, sc[1], o, o.min_nodes);
    for (std::size_t j = p2.nodes * p2.stride + 1; j < d.n2; ++j) dropped = std::max(dropped, ext.col_max[j]);
    s.truncation_level = ext.dmax > 0.0 ? dropped / ext.dmax : 0.0;
    s.spectral_step[1] = p2.step;
    s.spectral_extent[1] = double(p2.nodes) * p2.step;
    s.axes.push_back(spatial_axis(p2));

    const std::size_t m1 = p1.nodes + 1, m2 = p2.nodes + 1;
    // first axis, one transform per retained column
    std::vector<Complex> partial(p1.fft * m2);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t jj = 0; jj < std::ptrdiff_t(m2); ++jj) {
        const std::size_t j = std::size_t(jj);
        std::vector<Complex> col(m1);
        for (std::size_t i = 0; i < m1; ++i) col[i] = d.at(i * p1.stride, j * p2.stride);
        auto t = fourier_integral_grid(col, p1.step, p1.fft, o.backend);
        for (std::size_t r = 0; r < p1.fft; ++r) partial[r * m2 + j] = t[r];
    }
    // second axis, one transform per spatial row
    s.values.assign(p1.fft * p2.fft, Complex{});
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t rr = 0; rr < std::ptrdiff_t(p1.fft); ++rr) {
        const std::size_t r = std::size_t(rr);
        std::span<const Complex> row(&partial[r * m2], m2);
        auto t = fourier_integral_grid(row, p2.step, p2.fft, o.backend);
        const std::size_t out_row = (r + p1.fft - p1.fft / 2) % p1.fft;
        for (std::size_t q = 0; q < p2.fft; ++q) s.values[out_row * p2.fft + q] = t[centred(q, p2.fft)];
    }
    return s;
}

/// Significant range of the damped stored grid read at a coarse stride, without forming it.
Extent coarse_range(const SpectralFunction& f, const ConePoint& y, double eps, std::size_t stride) {
    const auto& sc = f.pairing_scale();
    const auto& axes = f.grid().axes();
    const bool two = axes.size() == 2;
    const std::size_t n1 = axes[0].count, n2 = two ? axes[1].count : 1;
    auto v = f.values();
    Extent e;
    e.row_max.assign(n1, 0.0);
    e.col_max.assign(n2, 0.0);
    for (std::size_t i = 0; i < n1; i += (i + stride < n1 ? stride : std::max<std::size_t>(n1 - 1 - i, 1))) {
        const double w1 = std::exp(-sc[0] * axes[0].node(i) * y[0]);
        for (std::size_t j = 0; j < n2; j += (j + stride < n2 ? stride : std::max<std::size_t>(n2 - 1 - j, 1))) {
            const double w = two ? w1 * std::exp(-sc[1] * axes[1].node(j) * y[1]) : w1;
            const double m = std::abs(v[i * n2 + j]) * w;
            e.row_max[i] = std::max(e.row_max[i], m);
            e.col_max[j] = std::max(e.col_max[j], m);
        }
    }
    e.dmax = *std::max_element(e.row_max.begin(), e.row_max.end());
    for (std::size_t i = 0; i < n1; ++i)
        if (e.row_max[i] > eps * e.dmax) e.last1 = std::min(i + stride, n1 - 1);
    for (std::size_t j = 0; j < n2; ++j)
        if (e.col_max[j] > eps * e.dmax) e.last2 = std::min(j + stride, n2 - 1);
    return e;
}

Slice make_slice(const SpectralFunction& f, const ConePoint& y, const SliceOptions& o) {
    const bool two = f.cone().dim() == 2;
    const double eps = 0.1 * o.tolerance;
    const auto& axes = f.grid().axes();
    const std::size_t n1 = axes[0].count, n2 = two ? axes[1].count : 1;
    if (two && o.resample) {
        // cheap look first: when damping leaves few stored nodes the stored grid is never transformed
        const Extent c = coarse_range(f, y, eps, 8);
        if (c.dmax > 0.0 && c.last1 < n1 - 1 && c.last2 < n2 - 1 &&
            (c.last1 + 8 < o.min_nodes || c.last2 + 8 < o.min_nodes)) {
            const double t1 = double(std::min(c.last1 + 8, n1 - 1)) * axes[0].step;
            const double t2 = double(std::min(c.last2 + 8, n2 - 1)) * axes[1].step;
            Damped d = damp_resampled(f, y, t1, t2, o.min_nodes + 8);
            Extent ext = significant_range(d, eps);
            ext.last1 = d.n1 - 1;
            ext.last2 = d.n2 - 1;
            return slice_from(d, y, f.pairing_scale(), o, ext);
        }
        if (c.dmax > 0.0 && c.last1 < n1 - 1 && c.last2 < n2 - 1) {
            // damp only the strided block the transform will read
            const AxisPlan p1 = plan_axis(std::min(c.last1 + 8, n1 - 1), n1, axes[0].step, f.pairing_scale()[0], o, o.min_nodes);
            const AxisPlan p2 = plan_axis(std::min(c.last2 + 8, n2 - 1), n2, axes[1].step, f.pairing_scale()[1], o, o.min_nodes);
            const auto& sc = f.pairing_scale();
            auto v = f.values();
            Damped d;
            d.n1 = p1.nodes + 1;
            d.n2 = p2.nodes + 1;
            d.h1 = p1.step;
            d.h2 = p2.step;
            d.v.resize(d.n1 * d.n2);
            for (std::size_t i = 0; i < d.n1; ++i) {
                const double w1 = std::exp(-sc[0] * double(i) * d.h1 * y[0]);
                for (std::size_t j = 0; j < d.n2; ++j)
                    d.v[i * d.n2 + j] = v[i * p1.stride * n2 + j * p2.stride] *
                                        (w1 * std::exp(-sc[1] * double(j) * d.h2 * y[1]));
            }
            Extent ext = significant_range(d, eps);
            ext.last1 = d.n1 - 1;
            ext.last2 = d.n2 - 1;
            Slice s = slice_from(d, y, sc, o, ext);
            double dropped = 0.0;
            for (std::size_t i = p1.nodes * p1.stride + 1; i < n1; ++i) dropped = std::max(dropped, c.row_max[i]);
            for (std::size_t j = p2.nodes * p2.stride + 1; j < n2; ++j) dropped = std::max(dropped, c.col_max[j]);
            s.truncation_level = dropped / c.dmax;
            return s;
        }
    }
    Damped d = damp_stored(f, y);
    Extent ext = significant_range(d, eps);
    if (ext.dmax > 0.0 && (ext.last1 == d.n1 - 1 || (two && ext.last2 == d.n2 - 1)))
        throw ConvergenceError("oscillatory_slice: spectral truncation insufficient for the requested tolerance");
    ext.last1 = std::min(ext.last1 + 8, d.n1 - 1);
    if (two) ext.last2 = std::min(ext.last2 + 8, d.n2 - 1);
    const bool thin = ext.last1 < o.min_nodes || (two && ext.last2 < o.min_nodes);
    if (ext.dmax > 0.0 && thin && o.resample) {
        // damping leaves few stored nodes: resample the density on its significant range
        const double t1 = double(ext.last1) * d.h1, t2 = two ? double(ext.last2) * d.h2 : 0.0;
        d = damp_resampled(f, y, t1, t2, o.min_nodes + 8);
        ext = significant_range(d, eps);
        ext.last1 = d.n1 - 1;
        if (two) ext.last2 = d.n2 - 1;
    }
    return slice_from(d, y, f.pairing_scale(), o, ext);
}

/// Tail of an |F|^2 profile beyond x_edge, assuming power-law decay fitted from (x_half, v_half).
double power_tail(double v_edge, double v_half, double x_edge, double x_half) {
    if (!(v_edge > 0.0)) return 0.0;
    double p = 2.0;
    if (v_half > 0.0) {
        const double fit = std::log(v_half / v_edge) / std::log(std::abs(x_edge) / std::abs(x_half));
        if (fit > 1.2 && std::isfinite(fit)) p = std::min(fit, 12.0);
    }
    return v_edge * std::abs(x_edge) / (p - 1.0);
}

double profile_integral(const std::vector<double>& v, const SliceAxis& ax) {
    double sum = 0.0;
    for (double x : v) sum += x;
    sum *= ax.dx;
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;  // x = 0
    const std::size_t lh = mid / 2, rh = mid + (n - 1 - mid) / 2;
    sum += power_tail(v[0], v[lh], ax.x(0), ax.x(lh));
    sum += power_tail(v[n - 1], v[rh], ax.x(n - 1), ax.x(rh));
    return sum;
}

}  // namespace

Slice oscillatory_slice(const SpectralFunction& f, const ConePoint& y, const SliceOptions& o) {
    if (f.grid().layout() != SpectralGrid::Layout::Box)
        throw DomainError("oscillatory_slice: spatial slices need a box grid (half-line or octant)");
    require_dim(f.cone(), y, "oscillatory_slice");
    if (!contains(f.cone(), y)) throw DomainError("oscillatory_slice: height must lie strictly inside the cone");
    if (!(o.tolerance > 0.0)) throw DomainError("oscillatory_slice: tolerance must be positive");
    return make_slice(f, y, o);
}

double slice_l2(const Slice& s) {
    if (s.axes.size() == 1) {
        std::vector<double> v(s.values.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::norm(s.values[i]);
        return profile_integral(v, s.axes[0]);
    }
    const std::size_t n1 = s.axes[0].count, n2 = s.axes[1].count;
    std::vector<double> rows(n1);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < std::ptrdiff_t(n1); ++ii) {
        std::vector<double> v(n2);
        for (std::size_t j = 0; j < n2; ++j) v[j] = std::norm(s.values[std::size_t(ii) * n2 + j]);
        rows[ii] = profile_integral(v, s.axes[1]);
    }
    return profile_integral(rows, s.axes[0]);
}

}  // namespace carleson::numerics
