#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace polya {

/// Dense square matrix, row-major.
struct SquareMatrix {
    int n = 0;
    std::vector<double> a;

    SquareMatrix() = default;
    explicit SquareMatrix(int size) : n(size), a(static_cast<size_t>(size) * size, 0.0) {}

    double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

/// Determinant sign computed on a positively rescaled copy of the matrix.
///
/// sign and normalized_det describe the rescaled matrix (each row, then each
/// column, divided by its max |entry|); positive rescaling preserves the sign
/// of the original determinant. log_magnitude restores the original scale:
/// det(original) = sign * exp(log_magnitude).
struct ScaledDet {
    int sign = 0;                 // -1, 0, +1
    double log_magnitude = 0.0;   // -inf when sign == 0
    double normalized_det = 0.0;  // determinant of the rescaled matrix
};

ScaledDet det_sign_scaled(const SquareMatrix& m);

/// Plain LU determinant, no rescaling. Used where entries are O(1).
double det_plain(const SquareMatrix& m);

} // namespace polya
