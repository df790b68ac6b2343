// Microbenchmarks for the dense kernels across storage precisions.

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "mpnum/covariance.hpp"
#include "mpnum/linalg.hpp"
#include "mpnum/rng.hpp"

namespace {

using namespace mpnum;

MPArray random_matrix(std::size_t n, Precision p) {
    Rng rng(1234 + n);
    std::vector<double> v(n * n);
    for (auto& x : v) x = rng.uniform();
    return MPArray::from_doubles(v, n, n, p);
}

MPArray covariance_matrix(std::size_t n, Precision p) {
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(double(n))));
    const auto grid = stats::grid_locations(side < 2 ? 2 : side);
    MPArray cov = MPArray::zeros_matrix(n, n, p);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            cov.set(i, j, std::exp(-grid.distances.get(i, j)));
    return cov;
}

Precision precision_arg(const benchmark::State& state) {
    switch (state.range(1)) {
        case 0: return Precision::Half;
        case 1: return Precision::Single;
        default: return Precision::Double;
    }
}

void BM_gemm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Precision p = precision_arg(state);
    const MPArray a = random_matrix(n, p);
    const MPArray b = random_matrix(n, p);
    MPArray c = MPArray::zeros_matrix(n, n, p);
    for (auto _ : state) {
        linalg::gemm(a, b, c, {});
        benchmark::DoNotOptimize(c);
    }
    state.SetComplexityN(state.range(0));
}

void BM_crossprod(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Precision p = precision_arg(state);
    const MPArray a = random_matrix(n, p);
    for (auto _ : state) {
        MPArray c = linalg::crossprod(a);
        benchmark::DoNotOptimize(c);
    }
    state.SetComplexityN(state.range(0));
}

void BM_chol(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Precision p = precision_arg(state);
    const MPArray a = covariance_matrix(n, p);
    for (auto _ : state) {
        MPArray u = linalg::chol(a);
        benchmark::DoNotOptimize(u);
    }
    state.SetComplexityN(state.range(0));
}

BENCHMARK(BM_gemm)
    ->ArgsProduct({{64, 128, 256}, {0, 1, 2}})
    ->Complexity(benchmark::oNCubed);
BENCHMARK(BM_crossprod)
    ->ArgsProduct({{64, 128, 256}, {0, 1, 2}})
    ->Complexity(benchmark::oNCubed);
BENCHMARK(BM_chol)
    ->ArgsProduct({{64, 128, 256}, {1, 2}})
    ->Complexity(benchmark::oNCubed);

}  // namespace

BENCHMARK_MAIN();
