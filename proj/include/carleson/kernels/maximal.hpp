#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

// Box averages of piecewise constant data on a product of two cell grids, and their pointwise suprema.
namespace carleson::kernels {

/// Per interval: (cell, weight) with weight = V(cell ∩ Q_I) / V(Q_I).
using SparseRows = std::vector<std::vector<std::pair<std::uint32_t, double>>>;
/// Per query point: the family indices whose boxes contain it.
using IndexLists = std::vector<std::vector<std::uint32_t>>;

namespace serial {
/// out[a * |w2| + b] = sum over cells of w1[a](c1) w2[b](c2) |f(c1, c2)|, f row-major with cells2 columns.
std::vector<double> box_averages(std::span<const double> f, std::size_t cells2, const SparseRows& w1,
                                 const SparseRows& w2);
/// out[p] = max over a in in1[p], b in in2[p] of table[a * n2 + b] (0 for empty lists).
std::vector<double> pair_max(std::span<const double> table, std::size_t n2, const IndexLists& in1,
                             const IndexLists& in2);
}  // namespace serial

namespace omp {
std::vector<double> box_averages(std::span<const double> f, std::size_t cells2, const SparseRows& w1,
                                 const SparseRows& w2);
std::vector<double> pair_max(std::span<const double> table, std::size_t n2, const IndexLists& in1,
                             const IndexLists& in2);
}  // namespace omp

}  // namespace carleson::kernels
