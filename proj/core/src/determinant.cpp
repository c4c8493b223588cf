#include "polya/determinant.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace polya {

namespace {

// LU with partial pivoting on a working copy. Returns {sign of permutation
// and pivots, sum of log|pivot|}; sign 0 when a pivot is exactly zero.
std::pair<int, double> lu_log_det(SquareMatrix w) {
    const int n = w.n;
    int sign = 1;
    double log_sum = 0.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(w.at(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::fabs(w.at(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0)
            return {0, -std::numeric_limits<double>::infinity()};
        if (piv != k) {
            for (int j = 0; j < n; ++j)
                std::swap(w.at(k, j), w.at(piv, j));
            sign = -sign;
        }
        const double pivot = w.at(k, k);
        if (pivot < 0.0)
            sign = -sign;
        log_sum += std::log(std::fabs(pivot));
        for (int i = k + 1; i < n; ++i) {
            const double factor = w.at(i, k) / pivot;
            w.at(i, k) = 0.0;
            for (int j = k + 1; j < n; ++j)
                w.at(i, j) -= factor * w.at(k, j);
        }
    }
    return {sign, log_sum};
}

} // namespace

ScaledDet det_sign_scaled(const SquareMatrix& m) {
    const int n = m.n;
    ScaledDet out;
    if (n == 0) {
        out.sign = 1;
        out.log_magnitude = 0.0;
        out.normalized_det = 1.0;
        return out;
    }

    SquareMatrix w = m;
    double log_scale = 0.0;

    // Row equilibration by max |entry|. A zero row forces det = 0.
    for (int i = 0; i < n; ++i) {
        double mx = 0.0;
        for (int j = 0; j < n; ++j)
            mx = std::max(mx, std::fabs(w.at(i, j)));
        if (mx == 0.0) {
            out.sign = 0;
            out.log_magnitude = -std::numeric_limits<double>::infinity();
            out.normalized_det = 0.0;
            return out;
        }
        for (int j = 0; j < n; ++j)
            w.at(i, j) /= mx;
        log_scale += std::log(mx);
    }
    // Column equilibration on the row-scaled matrix.
    for (int j = 0; j < n; ++j) {
        double mx = 0.0;
        for (int i = 0; i < n; ++i)
            mx = std::max(mx, std::fabs(w.at(i, j)));
        if (mx == 0.0) {
            out.sign = 0;
            out.log_magnitude = -std::numeric_limits<double>::infinity();
            out.normalized_det = 0.0;
            return out;
        }
        for (int i = 0; i < n; ++i)
            w.at(i, j) /= mx;
        log_scale += std::log(mx);
    }

    auto [sign, log_norm] = lu_log_det(w);
    out.sign = sign;
    if (sign == 0) {
        out.log_magnitude = -std::numeric_limits<double>::infinity();
        out.normalized_det = 0.0;
        return out;
    }
    out.log_magnitude = log_norm + log_scale;
    out.normalized_det = sign * std::exp(log_norm);
    return out;
}

double det_plain(const SquareMatrix& m) {
    if (m.n == 0)
        return 1.0;
    auto [sign, log_sum] = lu_log_det(m);
    if (sign == 0)
        return 0.0;
    return sign * std::exp(log_sum);
}

} // namespace polya
