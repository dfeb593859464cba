#pragma once

#include "carleson/errors.hpp"
#include "carleson/numerics/gauss_legendre.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace carleson::numerics {

enum class QuadratureRule { GaussLegendre, Uniform };

struct QuadratureSpec {
    QuadratureRule rule = QuadratureRule::GaussLegendre;
    int points_per_axis = 6;
    double tolerance = 1e-10;
    int max_refinements = 4000;
    /// Geometric panel doublings allowed on a half-infinite range.
    int max_doublings = 64;

    void validate() const;
    /// Same spec with tolerance multiplied by factor (used for nested integrals).
    QuadratureSpec scaled(double factor) const;
};

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    /// Integral of |f|; tolerances are relative to it.
    double l1 = 0.0;
    bool converged = true;
    std::size_t evaluations = 0;
};

namespace detail {

template <class T>
double magnitude(const T& v) {
    return std::abs(v);
}

template <class T>
bool finite_value(const T& v) {
    if constexpr (std::is_same_v<T, double>)
        return std::isfinite(v);
    else
        return std::isfinite(v.real()) && std::isfinite(v.imag());
}

template <class T>
struct Panel {
    double a, b;
    T value;
    double err, l1;
};

template <class F>
using value_t = std::decay_t<std::invoke_result_t<F&, double>>;

template <class F>
auto eval_checked(F& f, double x) {
    auto v = f(x);
    if (!finite_value(v))
        throw DomainError("integrand is not finite at x = " + std::to_string(x));
    return v;
}

template <class F>
Panel<value_t<F>> gl_panel(F& f, double a, double b, const GaussRule& lo, const GaussRule& hi) {
    using T = value_t<F>;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T s_lo{}, s_hi{};
    double l1 = 0.0;
    for (std::size_t i = 0; i < lo.nodes.size(); ++i) s_lo += lo.weights[i] * eval_checked(f, c + h * lo.nodes[i]);
    for (std::size_t i = 0; i < hi.nodes.size(); ++i) {
        T v = eval_checked(f, c + h * hi.nodes[i]);
        s_hi += hi.weights[i] * v;
        l1 += hi.weights[i] * magnitude(v);
    }
    return {a, b, h * s_hi, magnitude(h * (s_hi - s_lo)), h * l1};
}

template <class F>
QuadResult<value_t<F>> integrate_gauss(F& f, double a, double b, const QuadratureSpec& spec) {
    using T = value_t<F>;
    const int n = spec.points_per_axis;
    const GaussRule& lo = gauss_legendre(n);
    const GaussRule& hi = gauss_legendre(2 * n);
    const std::size_t per_panel = std::size_t(3 * n);

    std::vector<Panel<T>> heap;
    heap.push_back(gl_panel(f, a, b, lo, hi));
    auto by_err = [](const Panel<T>& x, const Panel<T>& y) { return x.err < y.err; };
    double err = heap[0].err, l1 = heap[0].l1;
    int splits = 0;
    bool converged = true;
    // absolute floor keeps underflowing integrands from refining forever
    constexpr double kFloor = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    while (err > spec.tolerance * l1 + kFloor) {
        if (splits >= spec.max_refinements) {
            converged = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end(), by_err);
        Panel<T> worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), by_err);
            converged = false;
            break;
        }
        Panel<T> left = gl_panel(f, worst.a, mid, lo, hi);
        Panel<T> right = gl_panel(f, mid, worst.b, lo, hi);
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_err);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_err);
        ++splits;
        if (heap.size() < 64) {
            err = 0.0;
            l1 = 0.0;
            for (const auto& p : heap) {
                err += p.err;
                l1 += p.l1;
            }
        } else {
            err += left.err + right.err - worst.err;
            l1 += left.l1 + right.l1 - worst.l1;
        }
    }
    std::sort(heap.begin(), heap.end(), [](const Panel<T>& x, const Panel<T>& y) { return x.a < y.a; });
    QuadResult<T> r;
    for (const auto& p : heap) {
        r.value += p.value;
        r.error += p.err;
        r.l1 += p.l1;
    }
    r.converged = converged;
    r.evaluations = per_panel * (1 + 2 * std::size_t(splits));
    return r;
}

template <class F>
QuadResult<value_t<F>> integrate_trapezoid(F& f, double a, double b, const QuadratureSpec& spec, bool periodic) {
    using T = value_t<F>;
    const double len = b - a;
    std::size_t n = 8;
    T sum{};
    double abs_sum = 0.0;
    std::size_t evals = 0;
    for (std::size_t k = 0; k < n; ++k) {
        T v = eval_checked(f, a + len * double(k) / double(n));
        double w = (!periodic && k == 0) ? 0.5 : 1.0;
        sum += w * v;
        abs_sum += w * magnitude(v);
        ++evals;
    }
    if (!periodic) {
        T v = eval_checked(f, b);
        sum += 0.5 * v;
        abs_sum += 0.5 * magnitude(v);
        ++evals;
    }
    T prev = sum * (len / double(n));
    QuadResult<T> r;
    for (int level = 0;; ++level) {
        T mid{};
        double mid_abs = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            T v = eval_checked(f, a + len * (double(k) + 0.5) / double(n));
            mid += v;
            mid_abs += magnitude(v);
            ++evals;
        }
        sum += mid;
        abs_sum += mid_abs;
        n *= 2;
        T cur = sum * (len / double(n));
        double l1 = abs_sum * (len / double(n));
        double diff = magnitude(cur - prev);
        prev = cur;
        if (diff <= spec.tolerance * l1 || level >= spec.max_refinements || n >= (std::size_t(1) << 22)) {
            r.value = cur;
            r.error = diff;
            r.l1 = l1;
            r.converged = diff <= spec.tolerance * l1;
            r.evaluations = evals;
            return r;
        }
    }
}

}  // namespace detail

/// Integral of f over [a, b]. GaussLegendre: globally adaptive bisection with an (n, 2n) rule pair,
/// nodes never touch the endpoints. Uniform: trapezoid doubling.
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec) {
    if (!(b >= a)) throw DomainError("integrate: need a <= b");
    using T = detail::value_t<F>;
    if (a == b) return QuadResult<T>{};
    if (spec.rule == QuadratureRule::Uniform) return detail::integrate_trapezoid(f, a, b, spec, false);
    return detail::integrate_gauss(f, a, b, spec);
}

/// Integral of a period-L function over one period by trapezoid doubling (spectrally accurate).
template <class F>
auto integrate_periodic(F&& f, double period, const QuadratureSpec& spec) {
    return detail::integrate_trapezoid(f, 0.0, period, spec, true);
}

/// Integral over [a, b] on geometric panels a + scale (2^k - 1), for integrands concentrated near a.
template <class F>
auto integrate_graded(F&& f, double a, double b, const QuadratureSpec& spec, double scale) {
    using T = detail::value_t<F>;
    if (!(scale > 0.0)) throw DomainError("integrate_graded: scale must be positive");
    if (2.0 * scale >= b - a) return integrate(f, a, b, spec);
    QuadResult<T> r;
    double lo = a;
    for (int k = 0; lo < b; ++k) {
        const double hi = std::min(b, a + scale * (std::ldexp(1.0, k + 1) - 1.0));
        auto p = integrate(f, lo, hi, spec);
        r.value += p.value;
        r.error += p.error;
        r.l1 += p.l1;
        r.converged = r.converged && p.converged;
        r.evaluations += p.evaluations;
        lo = hi;
    }
    return r;
}

/// Integral over [a, inf) on panels of geometrically growing width scale * 2^k.
/// Stops once the estimated remaining tail is below a tenth of the tolerance; a stable geometric
/// decay of panel masses is extrapolated. Throws DivergenceError when the panel masses never stop
/// growing within max_doublings.
template <class F>
auto integrate_to_infinity(F&& f, double a, const QuadratureSpec& spec, double scale = 1.0) {
    using T = detail::value_t<F>;
    if (!(scale > 0.0)) throw DomainError("integrate_to_infinity: scale must be positive");
    QuadratureSpec inner = spec.scaled(0.25);
    QuadResult<T> r;
    std::vector<double> masses;
    double prev_ratio = -1.0;
    double lo = a;
    for (int k = 0; k < spec.max_doublings; ++k) {
        double hi = a + scale * (std::ldexp(1.0, k + 1) - 1.0);
        auto p = integrate(f, lo, hi, inner);
        lo = hi;
        r.value += p.value;
        r.error += p.error;
        r.l1 += p.l1;
        r.converged = r.converged && p.converged;
        r.evaluations += p.evaluations;
        masses.push_back(p.l1);
        if (k < 3 || r.l1 == 0.0) continue;
        double last = masses[k], before = masses[k - 1];
        if (last == 0.0) {
            if (before == 0.0) return r;
            continue;
        }
        if (before == 0.0) continue;
        double ratio = last / before;
        if (ratio < 0.9) {
            double tail = last * ratio / (1.0 - ratio);
            if (tail <= 0.1 * spec.tolerance * r.l1) {
                r.error += tail;
                return r;
            }
            if (prev_ratio > 0.0) {
                double drift = std::abs(ratio - prev_ratio);
                double extrap_err = tail * 10.0 * drift / (1.0 - ratio);
                if (drift <= 1e-3 * ratio && extrap_err <= 0.1 * spec.tolerance * r.l1) {
                    r.value += p.value * (ratio / (1.0 - ratio));
                    r.error += extrap_err;
                    return r;
                }
            }
        }
        prev_ratio = ratio;
    }
    const std::size_t k = masses.size();
    bool growing = k >= 6;
    for (std::size_t i = k >= 6 ? k - 5 : 0; growing && i < k; ++i)
        growing = masses[i - 1] > 0.0 && masses[i] / masses[i - 1] >= 0.985;
    if (growing)
        throw DivergenceError("integral over a half-infinite range diverges (panel masses do not decay)",
                              detail::magnitude(r.value));
    r.converged = false;
    return r;
}

/// Integral over the real line, split at center.
template <class F>
auto integrate_real_line(F&& f, double center, const QuadratureSpec& spec, double scale = 1.0) {
    auto right = integrate_to_infinity([&](double u) { return f(center + u); }, 0.0, spec, scale);
    auto left = integrate_to_infinity([&](double u) { return f(center - u); }, 0.0, spec, scale);
    right.value += left.value;
    right.error += left.error;
    right.l1 += left.l1;
    right.converged = right.converged && left.converged;
    right.evaluations += left.evaluations;
    return right;
}

template <class T>
const T& require_converged(const QuadResult<T>& r, const char* what) {
    if (!r.converged) throw ConvergenceError(std::string(what) + ": quadrature did not reach its tolerance");
    return r.value;
}

}  // namespace carleson::numerics
