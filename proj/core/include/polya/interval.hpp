#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace polya {

/// Closed interval with extended-real endpoints.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static Interval whole_line() {
        return {-std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity()};
    }

    bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
    bool empty() const { return !(lo < hi); }
    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }

    Interval intersect(const Interval& other) const {
        return {std::max(lo, other.lo), std::min(hi, other.hi)};
    }

    /// {s - hi, s - lo}: the reflection used for convolution windows.
    Interval reflect_about(double s) const { return {s - hi, s - lo}; }
};

} // namespace polya
