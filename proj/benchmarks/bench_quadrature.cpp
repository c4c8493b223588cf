#include <benchmark/benchmark.h>

#include <cmath>

#include "polya/quadrature.hpp"

namespace {

void BM_integrate_gaussian(benchmark::State& state) {
    const polya::Interval iv{-12.0, 12.0};
    for (auto _ : state) {
        auto q = polya::integrate(
            [](double x) { return std::exp(-0.5 * x * x); }, iv);
        benchmark::DoNotOptimize(q.value);
    }
}
BENCHMARK(BM_integrate_gaussian);

void BM_integrate_kinked(benchmark::State& state) {
    // Laplace-style kink at the origin stresses the bisection path.
    const polya::Interval iv{-30.0, 30.0};
    for (auto _ : state) {
        auto q = polya::integrate(
            [](double x) { return std::exp(-std::fabs(x)); }, iv);
        benchmark::DoNotOptimize(q.value);
    }
}
BENCHMARK(BM_integrate_kinked);

void BM_tensor_integrate_3d(benchmark::State& state) {
    const polya::Interval iv{0.0, 1.0};
    for (auto _ : state) {
        auto q = polya::tensor_integrate(
            3,
            [](std::span<const double> x) {
                return x[0] * x[1] * x[1] * x[2] * x[2] * x[2];
            },
            iv);
        benchmark::DoNotOptimize(q.value);
    }
}
BENCHMARK(BM_tensor_integrate_3d);

} // namespace

BENCHMARK_MAIN();
