#pragma once

#include <Eigen/Dense>

#include <string_view>

namespace randstab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest singular value.
[[nodiscard]] double operator_norm(const Matrix& m);

[[nodiscard]] bool all_finite(const Matrix& m);

/// Smallest eigenvalue of the symmetric part of a square matrix.
[[nodiscard]] double min_symmetric_eigenvalue(const Matrix& m);

[[nodiscard]] bool is_symmetric(const Matrix& m, double tol = 0.0);

/// Throws DimensionMismatch with `what` unless rows/cols match.
void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, std::string_view what);

}  // namespace randstab
