#pragma once

#include "carleson/spectral.hpp"
#include "carleson/spectral_function.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace carleson::restriction {

/// R box^m F for a density f on the Lorentz or spherical cone.
struct RestrictionTask {
    ConeDescriptor cone = ConeDescriptor::lorentz3();
    int m = 0;
    SpectralFunction f;
};

/// Extension of g (on the half-line for Lorentz, on the octant for spherical) with order m.
struct ExtensionTask {
    ConeDescriptor cone = ConeDescriptor::lorentz3();
    int m = 0;
    SpectralFunction g;
};

/// Integral of f det^m over the fiber above base (t1 for Lorentz, (t1, t2) for spherical).
Complex fiber_integral(const ConeDescriptor& cone, const Density& f, int m, const ConePoint& base,
                       double tolerance = 1e-11);

/// g(t1) = integral over the disc t2^2 + t3^2 < t1^2 of f det^m; grid samples from the fiber nodes.
SpectralFunction restrict_lorentz(const RestrictionTask& task);
/// h(t) = ((m+1)/pi) g(t1) / t1^{2m+2}.
SpectralFunction extend_lorentz(const ExtensionTask& task);
/// g(t1,t2) = integral over t3^2 < t1 t2 of f det^m; the result carries pairing scale (1/2, 1/2).
SpectralFunction restrict_spherical(const RestrictionTask& task);
/// h(t) = g(t1,t2) / (2 c_m (t1 t2)^{m + 1/2}).
SpectralFunction extend_spherical(const ExtensionTask& task);

SpectralFunction restrict_fibers(const RestrictionTask& task);
SpectralFunction extend(const ExtensionTask& task);

/// Integral over (0, sqrt a) of (a - x^2)^k by Gauss-Legendre.
double half_disc_moment(double a, int k);
/// c_k = beta(k+1, 1/2) / 2.
double moment_constant(int k);
/// Integral over the disc of radius t1 of det^k, by quadrature.
double disc_moment(double t1, int k);

/// Bergman weight of the restricted space: 4m+1 on the half-plane, (2m-1/2, 2m-1/2) on the product.
spectral::BergmanWeight restricted_weight(const ConeDescriptor& cone, int m);

/// Sharp constant of ||R box^m F||^2 <= C ||F||^2 under the transform convention (Cauchy-Schwarz on fibers).
double restriction_bound(const ConeDescriptor& cone, int m);
/// ||E g||^2_{H^2} / ||G||^2 under the transform convention.
double extension_ratio(const ConeDescriptor& cone, int m);

struct NormPair {
    double restricted = 0.0;  // ||G||^2 in the restricted Bergman space
    double hardy = 0.0;       // ||F||^2_{H^2}
    double ratio = 0.0;
    bool skipped = false;
    std::string label;
};

struct RestrictionCheck {
    std::vector<NormPair> entries;
    double max_ratio = 0.0;
    double bound = 0.0;
    bool holds = true;
    /// Derived bound against the stated constant(s).
    std::vector<spectral::CalibrationRecord> records;
};

RestrictionCheck verify_restriction_inequality(const ConeDescriptor& cone, int m,
                                               std::span<const SpectralFunction> family, double tolerance = 1e-9);

struct ExtensionCheck {
    std::vector<NormPair> entries;  // ratio = ||F||^2 / ||G||^2
    spectral::CalibrationRecord record;
    std::vector<spectral::CalibrationRecord> alternatives;
};

/// ||E g||^2_{H^2} / ||G||^2 across the family, fitted constant and spread against the stated constant.
ExtensionCheck verify_extension_identity(const ConeDescriptor& cone, int m,
                                         std::span<const SpectralFunction> family, double tolerance = 1e-9);

/// Largest |restrict(box^m extend(g)) - g| relative to max |g| over the interior grid and random points.
double round_trip_error(const ConeDescriptor& cone, int m, const SpectralFunction& g, unsigned seed = 1);

/// sup over intervals I of mu(Q_I) / V_alpha(Q_I) for a unit point mass at i * height on the half-plane.
double point_mass_box_sup(double height, double alpha);

struct ChainResult {
    int m = 0;
    double carleson_sup = 0.0;
    double embedding_constant = 0.0;
    double point_value = 0.0;   // |box^m F(i e1)|^2
    double embedding_rhs = 0.0; // embedding_constant * ||G||^2
    double hardy_rhs = 0.0;     // embedding_constant * restriction_bound * ||F||^2
    bool holds = false;
};

/// Point mass at z1 = i: |G(i)|^2 <= (sup/4pi) ||G||^2 <= (sup/4pi) B ||F||^2 with G = R box^m F.
ChainResult box_hardy_chain(const SpectralFunction& f, int m, double tolerance = 1e-9);

}  // namespace carleson::restriction
