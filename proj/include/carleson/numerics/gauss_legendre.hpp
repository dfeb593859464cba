#pragma once

#include <vector>

namespace carleson::numerics {

/// Nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached n-point Gauss-Legendre rule; safe for concurrent callers.
const GaussRule& gauss_legendre(int n);

GaussRule compute_gauss_legendre(int n);

}  // namespace carleson::numerics
