#pragma once

#include "carleson/cone.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace carleson::radial {

enum class SupportTag { Bounded, Unbounded };
enum class Condition { Multiplier, Integral, NecessaryIneq };

std::string_view to_string(Condition c);

/// dmu = phi(y) dx dy on the tube. With `bound` set, phi vanishes outside {y < bound} and is smooth inside.
struct RadialDensity {
    ConeDescriptor cone = ConeDescriptor::half_line();
    std::function<double(const ConePoint&)> phi;
    SupportTag support = SupportTag::Unbounded;
    std::optional<ConePoint> bound;
    std::string label;

    static RadialDensity indicator_below(const ConeDescriptor& cone, const ConePoint& upper, std::string label = {});
};

/// Sample points of the cone: t = 2^k * ray_j, k in [k_min, k_max], ray 0 the base direction and
/// rays j = 1..depth approaching the boundary as 2^{-j}.
struct TGrid {
    int k_min = -10, k_max = 10;
    int ray_depth = 4;
    /// Levels added per refinement toward the witness.
    int refine_step = 12;
    int refinements = 2;

    std::vector<ConePoint> points(const ConeDescriptor& cone) const;
    std::size_t index(int k, int j) const { return std::size_t(k - k_min) * std::size_t(ray_depth + 1) + std::size_t(j); }
};

/// Direction of ray j (j = 0 is the base point).
ConePoint ray_direction(const ConeDescriptor& cone, int j);

struct CarlesonCertificate {
    Condition condition = Condition::Multiplier;
    double sup_value = 0.0;
    bool infinite = false;
    ConePoint witness;
    /// Constant C of the condition: the sup (multiplier, necessary) or the integral.
    double constant = 0.0;
    double reference_value = 0.0;
    /// Sup after each grid refinement, starting with the unrefined grid.
    std::vector<double> refinement_sups;
    std::string note;
};

struct RadialOptions {
    double tolerance = 1e-9;
    TGrid grid{};
    /// +infinity protocol: sup exceeds blowup * reference under every refinement.
    double blowup = 1e6;
};

/// m(t) = integral of phi(y) exp(-2 <t,y>) over the cone.
double multiplier(const RadialDensity& d, const ConePoint& t, double tolerance = 1e-9);
CarlesonCertificate multiplier_sup(const RadialDensity& d, const RadialOptions& opts = {});

/// Integral of phi over {y < N e}: exhaustion by N = 2^k.
CarlesonCertificate radial_integral(const RadialDensity& d, const RadialOptions& opts = {});

/// N(t) = integral of det(y+t)^b phi(y) dy / det(t)^b with b = -2 alpha + n/r; +inf on divergence.
double necessary_ratio(const RadialDensity& d, double alpha, const ConePoint& t, double tolerance = 1e-9);
CarlesonCertificate necessary_sup(const RadialDensity& d, double alpha, const RadialOptions& opts = {});

/// Integral of phi over {y < t}.
double mass_below(const RadialDensity& d, const ConePoint& t, double tolerance = 1e-9);

/// For y < t, det(y+t)^b >= c det(t)^b, hence mass_below(t) <= N(t) / c; returns 1 / c.
double chain_constant(const ConeDescriptor& cone, double alpha);

struct ChainPoint {
    ConePoint t;
    double mass_below = 0.0;
    double bound = 0.0;
    bool holds = false;
};

/// mass_below(t) <= chain_constant * necessary_sup at every grid point.
std::vector<ChainPoint> chain_check(const RadialDensity& d, double alpha, double necessary_sup_value,
                                    const RadialOptions& opts = {});

}  // namespace carleson::radial
