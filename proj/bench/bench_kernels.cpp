// Serial reference kernels against their OpenMP (and FFT) counterparts.
#include "carleson/dyadic.hpp"
#include "carleson/kernels/fourier_sums.hpp"
#include "carleson/kernels/maximal.hpp"

#include <benchmark/benchmark.h>

#include <complex>
#include <map>
#include <random>
#include <vector>

using namespace carleson;

namespace {

std::vector<std::complex<double>> samples(std::size_t n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<std::complex<double>> h(n);
    for (auto& v : h) v = {g(rng), g(rng)};
    return h;
}

template <auto Sums>
void fourier(benchmark::State& s) {
    const auto h = samples(std::size_t(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(Sums(h, std::size_t(s.range(0))));
    s.SetItemsProcessed(s.iterations() * s.range(0));
}

struct Boxes {
    dyadic::GridFunction f;
    dyadic::FactorFamily w1, w2;
    kernels::IndexLists in1, in2;
    std::vector<double> table;
};

const Boxes& boxes(int levels) {
    static std::map<int, Boxes> cache;
    auto [it, fresh] = cache.try_emplace(levels);
    if (!fresh) return it->second;
    Boxes& b = it->second;
    const auto g = dyadic::FactorGrid::dyadic(levels, 3);
    b.f = dyadic::GridFunction(g, g);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : b.f.values) v = u(rng) < 0.2 ? u(rng) : 0.0;
    const dyadic::MaximalOperator op(b.f, {0.0, 0.0}, dyadic::MaximalVariant::strong());
    b.w1 = op.family(0);
    b.w2 = op.family(1);
    b.table = kernels::serial::box_averages(b.f.values, g.cells(), b.w1.weights, b.w2.weights);
    std::uniform_int_distribution<std::uint32_t> i1(0, std::uint32_t(b.w1.size() - 1)), i2(0, std::uint32_t(b.w2.size() - 1));
    b.in1.resize(4096);
    b.in2.resize(4096);
    for (std::size_t p = 0; p < b.in1.size(); ++p)
        for (int k = 0; k < 24; ++k) {
            b.in1[p].push_back(i1(rng));
            b.in2[p].push_back(i2(rng));
        }
    return b;
}

template <auto Kernel>
void box_averages(benchmark::State& s) {
    const auto& b = boxes(int(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(Kernel(b.f.values, b.f.g2.cells(), b.w1.weights, b.w2.weights));
    s.SetItemsProcessed(s.iterations() * std::int64_t(b.w1.size() * b.w2.size()));
}

template <auto Kernel>
void pair_max(benchmark::State& s) {
    const auto& b = boxes(int(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(Kernel(b.table, b.w2.size(), b.in1, b.in2));
    s.SetItemsProcessed(s.iterations() * std::int64_t(b.in1.size()));
}

}  // namespace

BENCHMARK(fourier<kernels::serial::fourier_sums>)->Name("fourier_sums/serial")->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(fourier<kernels::omp::fourier_sums>)->Name("fourier_sums/omp")->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(fourier<kernels::fft::fourier_sums>)->Name("fourier_sums/fft")->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(box_averages<kernels::serial::box_averages>)->Name("box_averages/serial")->DenseRange(2, 3);
BENCHMARK(box_averages<kernels::omp::box_averages>)->Name("box_averages/omp")->DenseRange(2, 3);
BENCHMARK(pair_max<kernels::serial::pair_max>)->Name("pair_max/serial")->DenseRange(2, 3);
BENCHMARK(pair_max<kernels::omp::pair_max>)->Name("pair_max/omp")->DenseRange(2, 3);

BENCHMARK_MAIN();
