#pragma once

#include "carleson/cone.hpp"
#include "carleson/numerics/quadrature.hpp"
#include "carleson/numerics/slice.hpp"
#include "carleson/spectral_function.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace carleson::spectral {

enum class NormSide { Spectral, Spatial };
enum class Verdict { Match, Mismatch, Unstated, Divergent };

std::string_view to_string(Verdict v);

struct CalibrationRecord {
    std::string constant_name;
    std::optional<double> paper_value;
    double derived_value = 0.0;
    double relative_spread = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::Unstated;
    std::vector<double> samples;
    std::string note;
};

/// Verdict from the relative gap |paper - derived| / |derived| against tolerance.
CalibrationRecord make_record(std::string name, std::optional<double> paper, double derived,
                              double relative_spread, double tolerance);

/// (max - min) / |mean|.
double relative_spread(std::span<const double> values);

struct WeightExponents {
    double alpha = 0.0;
    std::array<double, 2> alpha_vec{0.0, 0.0};
    double nu = 2.0;
    int m = 0;
    double p = 2.0, q = 2.0;

    void validate(const ConeDescriptor& cone) const;
};

/// Spatial weight of a Bergman norm: prod_i y_i^{a_i} on box cones, or det(y)^{nu - n/r}.
struct BergmanWeight {
    std::vector<double> axis_powers;
    std::optional<double> nu;

    static BergmanWeight half_plane(double alpha) { return {{alpha}, std::nullopt}; }
    static BergmanWeight product(double a1, double a2) { return {{a1, a2}, std::nullopt}; }
    static BergmanWeight cone(double nu) { return {{}, nu}; }
    /// nu expressed as axis powers where the cone is a product (half-line, octant).
    static BergmanWeight from_nu(const ConeDescriptor& cone, double nu);
    std::string describe() const;
};

struct FieldGrid {
    ConeDescriptor cone;
    std::vector<numerics::Slice> slices;
};

struct NormOptions {
    double tolerance = 1e-10;
    numerics::SliceOptions slice{};
    /// Hardy sup heights y0 * 2^{-k} e, k = 0..levels.
    double y0 = 1.0;
    int levels = 12;
    /// Relative tolerance of height quadrature in spatial Bergman norms.
    double height_tolerance = 1e-8;
    /// Octant spatial Bergman: Gauss nodes per panel of each height axis.
    int height_nodes = 4;
};

FieldGrid laplace_eval(const SpectralFunction& f, std::span<const ConePoint> heights,
                       const numerics::SliceOptions& opts = {});

/// F(x + iy) by direct quadrature over the cone.
Complex laplace_at(const SpectralFunction& f, const ConePoint& x, const ConePoint& y, double tolerance = 1e-10);

struct HardyNorm {
    NormSide side;
    double value = 0.0;
    /// Spatial: the sup had not stabilised at the smallest height, value is a lower bound.
    bool lower_bound = false;
    bool monotone = true;
    double richardson = 0.0;
    /// Largest sampled slice norm.
    double raw_sup = 0.0;
    std::vector<double> heights;
    std::vector<double> slice_norms;
};

HardyNorm hardy_norm(const SpectralFunction& f, NormSide side, const NormOptions& opts = {});

struct BergmanNorm {
    NormSide side;
    /// Spatial: the weighted integral of |F|^2. Spectral: the weighted spectral integral.
    double value = 0.0;
    /// Spectral side only: constant kappa with spatial = kappa * spectral under the fixed convention.
    double kappa_derived = 0.0;
    double kappa_paper = 0.0;
};

BergmanNorm bergman_norm(const SpectralFunction& f, const BergmanWeight& w, NormSide side,
                         const NormOptions& opts = {});

/// kappa derived from Plancherel and the Laplace integral of the weight.
double bergman_kappa_derived(const SpectralFunction& f, const BergmanWeight& w, double tolerance = 1e-10);
/// Reference constant (2 pi)^n prod Gamma(a_i + 1), or (2 pi)^n gamma_cone(nu): no 2^{-(weight)} factor.
double bergman_kappa_paper(const SpectralFunction& f, const BergmanWeight& w, double tolerance = 1e-10);

/// Least-squares kappa over a family (spatial = kappa * spectral), its spread and the verdict against the paper.
CalibrationRecord calibrate_bergman(std::span<const SpectralFunction> family, const BergmanWeight& w,
                                    const NormOptions& opts = {});

SpectralFunction box_apply(const SpectralFunction& f, int m);

/// ||box^m F||^2_{A^2_{2m}} / ||F||^2_{H^2} from the spectral side, against gamma_cone(2m).
CalibrationRecord box_iso_ratio(const SpectralFunction& f, int m, double tolerance = 1e-10);

/// I(y,w) = integral over x of |det((x + iy - conj w)/i)|^{-2 alpha}, divided by det(y + Im w)^{-2 alpha + n/r}.
CalibrationRecord kernel_integral_check(const ConeDescriptor& cone, double alpha, const ConePoint& y,
                                        const ConePoint& w_re, const ConePoint& w_im, double tolerance = 1e-10);

}  // namespace carleson::spectral
