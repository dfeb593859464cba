#include "carleson/kernels/maximal.hpp"

#include "carleson/errors.hpp"

#include <algorithm>
#include <cmath>

namespace carleson::kernels {

namespace {

void check(std::span<const double> f, std::size_t cells2, const SparseRows& w1, const SparseRows& w2) {
    if (cells2 == 0 || f.size() % cells2 != 0) throw DomainError("box_averages: data is not a product grid");
    const std::size_t cells1 = f.size() / cells2;
    for (const auto& r : w1)
        for (const auto& [c, w] : r)
            if (c >= cells1) throw DomainError("box_averages: first-factor cell out of range");
    for (const auto& r : w2)
        for (const auto& [c, w] : r)
            if (c >= cells2) throw DomainError("box_averages: second-factor cell out of range");
}

// One row of the table; both backends share it so their results agree bit for bit.
void average_row(std::span<const double> f, std::size_t cells2, const std::vector<std::pair<std::uint32_t, double>>& r1,
                 const SparseRows& w2, std::vector<double>& h, double* out) {
    std::fill(h.begin(), h.end(), 0.0);
    for (const auto& [c1, a] : r1) {
        const double* row = f.data() + std::size_t(c1) * cells2;
        for (std::size_t c2 = 0; c2 < cells2; ++c2) h[c2] += a * std::abs(row[c2]);
    }
    for (std::size_t b = 0; b < w2.size(); ++b) {
        double s = 0.0;
        for (const auto& [c2, w] : w2[b]) s += w * h[c2];
        out[b] = s;
    }
}

double point_max(std::span<const double> table, std::size_t n2, const std::vector<std::uint32_t>& a,
                 const std::vector<std::uint32_t>& b) {
    double m = 0.0;
    for (auto i : a) {
        const double* row = table.data() + std::size_t(i) * n2;
        for (auto j : b) m = std::max(m, row[j]);
    }
    return m;
}

}  // namespace

namespace serial {

std::vector<double> box_averages(std::span<const double> f, std::size_t cells2, const SparseRows& w1,
                                 const SparseRows& w2) {
    check(f, cells2, w1, w2);
    std::vector<double> out(w1.size() * w2.size());
    std::vector<double> h(cells2);
    for (std::size_t a = 0; a < w1.size(); ++a) average_row(f, cells2, w1[a], w2, h, out.data() + a * w2.size());
    return out;
}

std::vector<double> pair_max(std::span<const double> table, std::size_t n2, const IndexLists& in1,
                             const IndexLists& in2) {
    if (in1.size() != in2.size()) throw DomainError("pair_max: index lists differ in length");
    std::vector<double> out(in1.size());
    for (std::size_t p = 0; p < in1.size(); ++p) out[p] = point_max(table, n2, in1[p], in2[p]);
    return out;
}

}  // namespace serial

namespace omp {

std::vector<double> box_averages(std::span<const double> f, std::size_t cells2, const SparseRows& w1,
                                 const SparseRows& w2) {
    check(f, cells2, w1, w2);
    std::vector<double> out(w1.size() * w2.size());
#pragma omp parallel
    {
        std::vector<double> h(cells2);
#pragma omp for schedule(dynamic, 4)
        for (std::ptrdiff_t a = 0; a < std::ptrdiff_t(w1.size()); ++a)
            average_row(f, cells2, w1[a], w2, h, out.data() + std::size_t(a) * w2.size());
    }
    return out;
}

std::vector<double> pair_max(std::span<const double> table, std::size_t n2, const IndexLists& in1,
                             const IndexLists& in2) {
    if (in1.size() != in2.size()) throw DomainError("pair_max: index lists differ in length");
    std::vector<double> out(in1.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < std::ptrdiff_t(in1.size()); ++p) out[p] = point_max(table, n2, in1[p], in2[p]);
    return out;
}

}  // namespace omp

}  // namespace carleson::kernels
