#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "polya/interval.hpp"

namespace polya {

/// Deterministic RNG wrapper. Doubles are produced by the 53-bit shift
/// construction so results never depend on library distribution internals.
class SeededRng {
public:
    explicit SeededRng(uint64_t seed) : eng_(seed) {}

    uint64_t raw() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(eng_() % span);
    }

private:
    std::mt19937_64 eng_;
};

/// Strictly increasing tuple with every consecutive gap >= min_gap.
struct OrderedTuple {
    std::vector<double> values;
    double min_gap = 0.0;

    int n() const { return static_cast<int>(values.size()); }
};

/// One tuple drawn from an explicit generator state. Uniform-then-sort on the
/// interval squeezed by (n-1)*min_gap, then the i-th point is shifted by
/// i*min_gap. Throws std::invalid_argument when the gap is infeasible.
OrderedTuple sample_ordered_tuple(SeededRng& rng, int n, Interval domain, double min_gap);

/// Seeded batch: a pure function of its arguments.
std::vector<OrderedTuple> sample_ordered_tuples(int n, Interval domain, int count,
                                                uint64_t seed, double min_gap);

/// phi(x, y) = sum_k c_k 1[x >= u_k] + sum_k d_k 1[y >= v_k] with all rises
/// nonnegative, hence nondecreasing in each variable by construction.
struct BivariateStaircase {
    std::vector<double> x_thresholds; // u, strictly increasing
    std::vector<double> x_rises;      // c, nonnegative
    std::vector<double> y_thresholds; // v, strictly increasing
    std::vector<double> y_rises;      // d, nonnegative

    double operator()(double x, double y) const;
};

/// Seeded staircase with `steps` jumps per variable on [-3, 3].
BivariateStaircase monotone_staircase(uint64_t seed, int steps);

} // namespace polya
