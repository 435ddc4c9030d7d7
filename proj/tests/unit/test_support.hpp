#pragma once

#include "randstab/linalg.hpp"
#include "randstab/rng.hpp"

#include <cmath>
#include <random>

namespace randstab::testing {

inline Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    return m;
}

inline Matrix random_orthogonal(Rng& rng, Eigen::Index n) {
    Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rng, n, n));
    return qr.householderQ() * Matrix::Identity(n, n);
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace randstab::testing
