#include <benchmark/benchmark.h>

#include "polya/pf_checks.hpp"

namespace {

void BM_check_pf_n(benchmark::State& state) {
    const auto f = polya::Density::laplace(0.0, 1.0);
    polya::SamplingPlan plan;
    plan.count = 200;
    for (auto _ : state) {
        auto rep = polya::check_pf_n(f, static_cast<int>(state.range(0)), plan);
        benchmark::DoNotOptimize(rep.min_normalized_det);
    }
}
BENCHMARK(BM_check_pf_n)->Arg(2)->Arg(4);

} // namespace
