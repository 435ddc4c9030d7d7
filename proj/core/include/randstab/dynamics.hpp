#pragma once

#include "randstab/linalg.hpp"

namespace randstab {

/// theta = [A, B]: state matrix A (p x p) and input matrix B (p x r).
class DynamicsParameter {
public:
    DynamicsParameter() = default;
    /// Throws DimensionMismatch if A is not square or B has the wrong row count,
    /// NonFinite on NaN/Inf entries.
    DynamicsParameter(Matrix a, Matrix b);

    /// Splits a p x (p + r) matrix into [A, B].
    [[nodiscard]] static DynamicsParameter from_joined(const Matrix& theta, Eigen::Index p);

    [[nodiscard]] const Matrix& a() const noexcept { return a_; }
    [[nodiscard]] const Matrix& b() const noexcept { return b_; }
    [[nodiscard]] Eigen::Index state_dim() const noexcept { return a_.rows(); }
    [[nodiscard]] Eigen::Index input_dim() const noexcept { return b_.cols(); }
    /// q = p + r.
    [[nodiscard]] Eigen::Index joined_cols() const noexcept { return a_.cols() + b_.cols(); }

    /// The p x q matrix [A, B].
    [[nodiscard]] Matrix joined() const;

    /// A + B * gain.
    [[nodiscard]] Matrix closed_loop(const Matrix& gain) const;

private:
    Matrix a_;
    Matrix b_;
};

}  // namespace randstab
