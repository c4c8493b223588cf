#include <benchmark/benchmark.h>

#include "polya/conditional.hpp"

namespace {

void BM_conditional_expectation_smooth(benchmark::State& state) {
    const auto f = polya::Density::gaussian(0.0, 1.0);
    const auto phi = polya::phi::product();
    for (auto _ : state) {
        auto c = polya::conditional_expectation_2d(phi, f, f, 1.5);
        benchmark::DoNotOptimize(c.phi_value);
    }
}
BENCHMARK(BM_conditional_expectation_smooth);

void BM_conditional_expectation_staircase(benchmark::State& state) {
    const auto f = polya::Density::gaussian(0.0, 1.0);
    const auto phi = polya::phi::staircase(42, 8);
    for (auto _ : state) {
        auto c = polya::conditional_expectation_2d(phi, f, f, 0.5);
        benchmark::DoNotOptimize(c.phi_value);
    }
}
BENCHMARK(BM_conditional_expectation_staircase);

} // namespace
