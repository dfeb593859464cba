#include "carleson/cone.hpp"

#include "carleson/errors.hpp"
#include "carleson/numerics/cone_quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace carleson {

ConePoint::ConePoint(std::initializer_list<double> coords) {
    if (coords.size() > kMaxDim) throw DomainError("ConePoint: at most 3 coordinates");
    n_ = coords.size();
    std::copy(coords.begin(), coords.end(), c_.begin());
}

ConePoint::ConePoint(std::size_t n, double fill) : n_(n) {
    if (n > kMaxDim) throw DomainError("ConePoint: at most 3 coordinates");
    for (std::size_t i = 0; i < n; ++i) c_[i] = fill;
}

ConePoint& ConePoint::operator+=(const ConePoint& o) {
    if (o.n_ != n_) throw DomainError("ConePoint: dimension mismatch");
    for (std::size_t i = 0; i < n_; ++i) c_[i] += o.c_[i];
    return *this;
}

ConePoint& ConePoint::operator-=(const ConePoint& o) {
    if (o.n_ != n_) throw DomainError("ConePoint: dimension mismatch");
    for (std::size_t i = 0; i < n_; ++i) c_[i] -= o.c_[i];
    return *this;
}

ConePoint& ConePoint::operator*=(double s) {
    for (std::size_t i = 0; i < n_; ++i) c_[i] *= s;
    return *this;
}

bool operator==(const ConePoint& a, const ConePoint& b) {
    if (a.n_ != b.n_) return false;
    for (std::size_t i = 0; i < a.n_; ++i)
        if (a.c_[i] != b.c_[i]) return false;
    return true;
}

ConeDescriptor ConeDescriptor::half_line() { return {ConeKind::HalfLine, 1, 1, ConePoint{1.0}, Pairing::Euclidean}; }
ConeDescriptor ConeDescriptor::octant2() { return {ConeKind::Octant2, 2, 2, ConePoint{1.0, 1.0}, Pairing::Euclidean}; }
ConeDescriptor ConeDescriptor::lorentz3() {
    return {ConeKind::Lorentz3, 3, 2, ConePoint{1.0, 0.0, 0.0}, Pairing::Euclidean};
}
ConeDescriptor ConeDescriptor::spherical3() {
    return {ConeKind::Spherical3, 3, 2, ConePoint{1.0, 1.0, 0.0}, Pairing::SphericalHalf};
}

ConeDescriptor ConeDescriptor::of(ConeKind kind) {
    switch (kind) {
        case ConeKind::HalfLine: return half_line();
        case ConeKind::Octant2: return octant2();
        case ConeKind::Lorentz3: return lorentz3();
        case ConeKind::Spherical3: return spherical3();
    }
    throw DomainError("unknown cone kind");
}

std::string_view ConeDescriptor::name() const {
    switch (kind_) {
        case ConeKind::HalfLine: return "halfline";
        case ConeKind::Octant2: return "octant";
        case ConeKind::Lorentz3: return "lorentz";
        case ConeKind::Spherical3: return "spherical";
    }
    return "?";
}

double ConeDescriptor::pairing_weight(std::size_t i) const {
    if (pairing_ == Pairing::SphericalHalf && i < 2) return 0.5;
    return 1.0;
}

double ConeDescriptor::pairing_determinant() const { return pairing_ == Pairing::SphericalHalf ? 0.25 : 1.0; }

double ConeDescriptor::pair(const ConePoint& a, const ConePoint& b) const {
    require_dim(*this, a, "pair");
    require_dim(*this, b, "pair");
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += pairing_weight(i) * a[i] * b[i];
    return s;
}

ConeKind parse_cone_kind(std::string_view name) {
    if (name == "halfline" || name == "halfplane" || name == "half-line") return ConeKind::HalfLine;
    if (name == "octant" || name == "octant2" || name == "product") return ConeKind::Octant2;
    if (name == "lorentz" || name == "lorentz3") return ConeKind::Lorentz3;
    if (name == "spherical" || name == "spherical3" || name == "sigma") return ConeKind::Spherical3;
    throw DomainError("unknown cone '" + std::string(name) + "'");
}

void require_dim(const ConeDescriptor& cone, const ConePoint& y, const char* what) {
    if (y.size() != cone.dim())
        throw DomainError(std::string(what) + ": expected a point of dimension " + std::to_string(cone.dim()) +
                          ", got " + std::to_string(y.size()));
}

double det(const ConeDescriptor& cone, const ConePoint& y) {
    require_dim(cone, y, "det");
    switch (cone.kind()) {
        case ConeKind::HalfLine: return y[0];
        case ConeKind::Octant2: return y[0] * y[1];
        case ConeKind::Lorentz3: return y[0] * y[0] - y[1] * y[1] - y[2] * y[2];
        case ConeKind::Spherical3: return y[0] * y[1] - y[2] * y[2];
    }
    return 0.0;
}

bool contains(const ConeDescriptor& cone, const ConePoint& y) {
    require_dim(cone, y, "contains");
    switch (cone.kind()) {
        case ConeKind::HalfLine: return y[0] > 0.0;
        case ConeKind::Octant2: return y[0] > 0.0 && y[1] > 0.0;
        case ConeKind::Lorentz3: return y[0] + y[1] > 0.0 && det(cone, y) > 0.0;
        case ConeKind::Spherical3: return y[0] > 0.0 && det(cone, y) > 0.0;
    }
    return false;
}

bool precedes(const ConeDescriptor& cone, const ConePoint& x, const ConePoint& y) {
    require_dim(cone, x, "precedes");
    require_dim(cone, y, "precedes");
    return contains(cone, y - x);
}

double laplace_power_integral(const ConeDescriptor& cone, const ConePoint& t, double exponent, double tolerance) {
    require_dim(cone, t, "laplace_power_integral");
    if (!contains(cone, t)) throw DomainError("laplace_power_integral: t must lie in the open cone");
    if (!(exponent > -1.0)) throw DomainError("laplace_power_integral: exponent must exceed -1");
    numerics::QuadratureSpec spec;
    spec.tolerance = tolerance;
    auto integrand = [&](const ConePoint& y) {
        return std::exp(-cone.pair(t, y)) * std::pow(std::max(det(cone, y), 0.0), exponent);
    };
    auto r = numerics::integrate_cone(cone, integrand, numerics::ConeRegion::whole(), spec);
    return numerics::require_converged(r, "laplace_power_integral");
}

double gamma_cone(const ConeDescriptor& cone, double nu, double tolerance) {
    const double threshold = cone.dim_over_rank() - 1.0;
    if (!(nu > threshold))
        throw DomainError("gamma_cone: nu = " + std::to_string(nu) + " must exceed n/r - 1 = " + std::to_string(threshold));
    return laplace_power_integral(cone, cone.base_point(), nu - cone.dim_over_rank(), tolerance);
}

ConePoint lorentz_to_spherical(const ConePoint& y) {
    if (y.size() != 3) throw DomainError("lorentz_to_spherical: expected a 3-vector");
    return {y[0] + y[1], y[0] - y[1], y[2]};
}

ConePoint spherical_to_lorentz(const ConePoint& y) {
    if (y.size() != 3) throw DomainError("spherical_to_lorentz: expected a 3-vector");
    return {0.5 * (y[0] + y[1]), 0.5 * (y[0] - y[1]), y[2]};
}

Matrix3 lorentz_boost_to(const ConePoint& t) {
    const auto cone = ConeDescriptor::lorentz3();
    require_dim(cone, t, "lorentz_boost_to");
    if (!contains(cone, t)) throw DomainError("lorentz_boost_to: t must lie in the Lorentz cone");
    const double lambda = std::sqrt(det(cone, t));
    const double ch = t[0] / lambda;
    const double tp = std::hypot(t[1], t[2]);
    Matrix3 m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    if (tp == 0.0) return m;
    const double sh = tp / lambda;
    const double n[2] = {t[1] / tp, t[2] / tp};
    m[0][0] = ch;
    for (int i = 0; i < 2; ++i) {
        m[0][i + 1] = sh * n[i];
        m[i + 1][0] = sh * n[i];
        for (int j = 0; j < 2; ++j) m[i + 1][j + 1] = (i == j ? 1.0 : 0.0) + (ch - 1.0) * n[i] * n[j];
    }
    return m;
}

ConePoint apply(const Matrix3& m, const ConePoint& v) {
    if (v.size() != 3) throw DomainError("apply: expected a 3-vector");
    ConePoint r(3);
    for (int i = 0; i < 3; ++i) r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    return r;
}

}  // namespace carleson
