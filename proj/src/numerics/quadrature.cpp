#include "carleson/numerics/quadrature.hpp"

#include <algorithm>

namespace carleson::numerics {

void QuadratureSpec::validate() const {
    if (!(tolerance > 0.0)) throw DomainError("QuadratureSpec: tolerance must be positive");
    if (points_per_axis < 2) throw DomainError("QuadratureSpec: points_per_axis must be at least 2");
    if (max_refinements < 1) throw DomainError("QuadratureSpec: max_refinements must be positive");
}

QuadratureSpec QuadratureSpec::scaled(double factor) const {
    QuadratureSpec s = *this;
    s.tolerance = std::max(tolerance * factor, 1e-14);
    return s;
}

}  // namespace carleson::numerics
