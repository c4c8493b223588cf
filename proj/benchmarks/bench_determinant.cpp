#include <benchmark/benchmark.h>

#include <cmath>

#include "polya/determinant.hpp"

namespace {

polya::SquareMatrix gaussian_kernel(int n) {
    polya::SquareMatrix m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double d = 0.7 * i - 0.4 * j;
            m.at(i, j) = std::exp(-0.5 * d * d);
        }
    }
    return m;
}

void BM_det_sign_scaled(benchmark::State& state) {
    const auto m = gaussian_kernel(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto d = polya::det_sign_scaled(m);
        benchmark::DoNotOptimize(d.normalized_det);
    }
}
BENCHMARK(BM_det_sign_scaled)->Arg(2)->Arg(4)->Arg(8);

} // namespace
