#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

namespace carleson {

enum class ConeKind { HalfLine, Octant2, Lorentz3, Spherical3 };
enum class Pairing { Euclidean, SphericalHalf };

/// Point of R^n, n <= 3. Membership in a cone is a predicate, not an invariant.
class ConePoint {
public:
    static constexpr std::size_t kMaxDim = 3;

    ConePoint() = default;
    ConePoint(std::initializer_list<double> coords);
    explicit ConePoint(std::size_t n, double fill = 0.0);

    std::size_t size() const { return n_; }
    double operator[](std::size_t i) const { return c_[i]; }
    double& operator[](std::size_t i) { return c_[i]; }
    std::span<const double> coords() const { return {c_.data(), n_}; }

    ConePoint& operator+=(const ConePoint& o);
    ConePoint& operator-=(const ConePoint& o);
    ConePoint& operator*=(double s);

    friend ConePoint operator+(ConePoint a, const ConePoint& b) { return a += b; }
    friend ConePoint operator-(ConePoint a, const ConePoint& b) { return a -= b; }
    friend ConePoint operator*(double s, ConePoint a) { return a *= s; }
    friend bool operator==(const ConePoint& a, const ConePoint& b);

private:
    std::array<double, kMaxDim> c_{};
    std::size_t n_ = 0;
};

class ConeDescriptor {
public:
    static ConeDescriptor half_line();
    static ConeDescriptor octant2();
    static ConeDescriptor lorentz3();
    static ConeDescriptor spherical3();
    static ConeDescriptor of(ConeKind kind);

    ConeKind kind() const { return kind_; }
    std::size_t dim() const { return n_; }
    std::size_t rank() const { return r_; }
    double dim_over_rank() const { return double(n_) / double(r_); }
    const ConePoint& base_point() const { return e_; }
    Pairing pairing() const { return pairing_; }
    std::string_view name() const;

    /// Weight of coordinate i in the bilinear pairing <z,t> = sum_i w_i z_i t_i.
    double pairing_weight(std::size_t i) const;
    /// |det| of the diagonal pairing matrix.
    double pairing_determinant() const;
    double pair(const ConePoint& a, const ConePoint& b) const;

    friend bool operator==(const ConeDescriptor& a, const ConeDescriptor& b) { return a.kind_ == b.kind_; }

private:
    ConeDescriptor(ConeKind k, std::size_t n, std::size_t r, ConePoint e, Pairing p)
        : kind_(k), n_(n), r_(r), e_(e), pairing_(p) {}

    ConeKind kind_;
    std::size_t n_;
    std::size_t r_;
    ConePoint e_;
    Pairing pairing_;
};

ConeKind parse_cone_kind(std::string_view name);

double det(const ConeDescriptor& cone, const ConePoint& y);
bool contains(const ConeDescriptor& cone, const ConePoint& y);
bool precedes(const ConeDescriptor& cone, const ConePoint& x, const ConePoint& y);

/// Gamma function of the cone: integral over the cone of e^{-<e,y>} det(y)^{nu - n/r}.
double gamma_cone(const ConeDescriptor& cone, double nu, double tolerance = 1e-9);

/// Integral over the cone of e^{-<t,y>} det(y)^{exponent}; t must lie in the cone.
double laplace_power_integral(const ConeDescriptor& cone, const ConePoint& t, double exponent,
                              double tolerance = 1e-9);

/// (y1, y2, y3) -> (y1 + y2, y1 - y2, y3); maps the Lorentz cone onto the spherical cone.
ConePoint lorentz_to_spherical(const ConePoint& y);
ConePoint spherical_to_lorentz(const ConePoint& y);
inline constexpr double kLorentzToSphericalJacobian = 2.0;

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Lorentz boost L with L(sqrt(det t) * (1,0,0)) = t, for t in the Lorentz cone.
Matrix3 lorentz_boost_to(const ConePoint& t);
ConePoint apply(const Matrix3& m, const ConePoint& v);

void require_dim(const ConeDescriptor& cone, const ConePoint& y, const char* what);

}  // namespace carleson
