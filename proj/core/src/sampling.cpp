#include "polya/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace polya {

OrderedTuple sample_ordered_tuple(SeededRng& rng, int n, Interval domain, double min_gap) {
    if (n < 1)
        throw std::invalid_argument("ordered tuple size must be positive");
    if (!(min_gap > 0.0))
        throw std::invalid_argument("min_gap must be positive");
    const double squeeze = domain.width() - static_cast<double>(n - 1) * min_gap;
    if (!(squeeze > 0.0))
        throw std::invalid_argument("infeasible gap: domain too narrow for n points at min_gap");

    OrderedTuple t;
    t.min_gap = min_gap;
    t.values.resize(static_cast<size_t>(n));
    for (auto& v : t.values)
        v = domain.lo + squeeze * rng.uniform01();
    std::sort(t.values.begin(), t.values.end());
    for (int i = 0; i < n; ++i)
        t.values[static_cast<size_t>(i)] += static_cast<double>(i) * min_gap;
    return t;
}

std::vector<OrderedTuple> sample_ordered_tuples(int n, Interval domain, int count,
                                                uint64_t seed, double min_gap) {
    if (count < 0)
        throw std::invalid_argument("tuple count must be nonnegative");
    SeededRng rng(seed);
    std::vector<OrderedTuple> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(sample_ordered_tuple(rng, n, domain, min_gap));
    return out;
}

double BivariateStaircase::operator()(double x, double y) const {
    double v = 0.0;
    for (size_t k = 0; k < x_thresholds.size(); ++k)
        if (x >= x_thresholds[k])
            v += x_rises[k];
    for (size_t k = 0; k < y_thresholds.size(); ++k)
        if (y >= y_thresholds[k])
            v += y_rises[k];
    return v;
}

BivariateStaircase monotone_staircase(uint64_t seed, int steps) {
    if (steps < 1)
        throw std::invalid_argument("staircase needs at least one step");
    SeededRng rng(seed);
    const Interval domain{-3.0, 3.0};
    const double gap = 1e-3 * domain.width();

    BivariateStaircase st;
    st.x_thresholds = sample_ordered_tuple(rng, steps, domain, gap).values;
    st.x_rises.resize(static_cast<size_t>(steps));
    for (auto& c : st.x_rises)
        c = rng.uniform01();
    st.y_thresholds = sample_ordered_tuple(rng, steps, domain, gap).values;
    st.y_rises.resize(static_cast<size_t>(steps));
    for (auto& d : st.y_rises)
        d = rng.uniform01();
    return st;
}

} // namespace polya
