#pragma once

#include "randstab/dynamics.hpp"
#include "randstab/linalg.hpp"

#include <cstddef>

namespace randstab {

/// Quadratic cost weights; both must be symmetric positive definite.
class CostPair {
public:
    /// Throws InvalidArgument unless Q and R are square, symmetric and have
    /// smallest eigenvalue above 1e-10.
    CostPair(Matrix q, Matrix r);

    [[nodiscard]] const Matrix& q() const noexcept { return q_; }
    [[nodiscard]] const Matrix& r() const noexcept { return r_; }

private:
    Matrix q_;
    Matrix r_;
};

struct SolverOptions {
    /// Successive iterates closer than tolerance * max(1, ||K||) stop the iteration.
    double tolerance = 1e-12;
    std::size_t max_iterations = 10'000;
    /// ||K|| above this is treated as divergence.
    double divergence_cap = 1e12;
};

struct RiccatiSolution {
    Matrix k;
    Matrix gain;
    std::size_t iterations = 0;
    double residual = 0.0;
};

/// Solves K = Q + A'KA - A'KB(B'KB + R)^-1 B'KA by value iteration from K = Q
/// and returns K together with the gain L = -(B'KB + R)^-1 B'KA.
///
/// Throws NoConvergence when the iteration exceeds max_iterations, leaves the
/// finite range, or grows past divergence_cap; this is the expected outcome for
/// parameters without a stabilizing solution.
[[nodiscard]] RiccatiSolution solve_dare(const DynamicsParameter& theta, const CostPair& costs,
                                         const SolverOptions& opts = {});

/// L = -(B'KB + R)^-1 B'KA.
[[nodiscard]] Matrix feedback_gain(const Matrix& k, const DynamicsParameter& theta, const Matrix& r);

/// Operator norm of K - (Q + A'KA - A'KB(B'KB + R)^-1 B'KA).
[[nodiscard]] double riccati_residual(const Matrix& k, const DynamicsParameter& theta,
                                      const CostPair& costs);

/// max |lambda| over the (complex) spectrum of a square matrix.
[[nodiscard]] double spectral_radius(const Matrix& m);

}  // namespace randstab
