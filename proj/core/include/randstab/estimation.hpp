#pragma once

#include "randstab/dynamics.hpp"
#include "randstab/linalg.hpp"
#include "randstab/system.hpp"

#include <cstddef>
#include <vector>

namespace randstab {

struct ClosedLoopEstimate {
    Matrix d_hat;
    std::size_t sample_count = 0;
    std::size_t regressor_rank = 0;
    /// Global index of the first transition used.
    std::size_t first_transition = 0;
};

/// Regressor blocks [I_p; L_i] for the episodes of one run.
class GainBasis {
public:
    /// Throws DimensionMismatch if the gains do not all share one r x p shape,
    /// InvalidArgument if the list is empty.
    explicit GainBasis(std::vector<Matrix> gains);

    [[nodiscard]] std::size_t k() const noexcept { return gains_.size(); }
    [[nodiscard]] Eigen::Index state_dim() const noexcept { return gains_.front().cols(); }
    [[nodiscard]] Eigen::Index input_dim() const noexcept { return gains_.front().rows(); }
    [[nodiscard]] const std::vector<Matrix>& gains() const noexcept { return gains_; }
    /// [I_p; L_i], q x p.
    [[nodiscard]] Matrix block(std::size_t i) const;
    /// [block_1 ... block_k], q x kp.
    [[nodiscard]] Matrix stacked() const;

private:
    std::vector<Matrix> gains_;
};

/// Smallest episode count that can identify theta: 1 + ceil(r / p).
[[nodiscard]] std::size_t min_episodes(Eigen::Index p, Eigen::Index r) noexcept;

/// Least-squares closed-loop matrix of one episode:
///   argmin_D sum_l || x(l+1) - D x(l) ||^2,  D in R^{p x p}.
/// Second moments are accumulated in extended precision. A rank-deficient
/// regressor Gram matrix yields the minimum-norm minimizer; eigenvalues below
/// 2^-64 of the largest one (relative to the working precision) count as zero.
/// Throws EmptyTrajectory if the log holds no transition.
[[nodiscard]] ClosedLoopEstimate closed_loop_ls(const TrajectoryLog& traj);

/// argmin_theta sum_i || D_i - theta [I; L_i] ||^2 as one joint least-squares solve.
/// Throws DimensionMismatch on count/shape mismatch, RankDeficientBasis if the
/// stacked regressor has row rank below q.
[[nodiscard]] DynamicsParameter recover_theta(const std::vector<ClosedLoopEstimate>& estimates,
                                              const GainBasis& basis);

/// Operator norm of theta_hat - theta_true.
[[nodiscard]] double estimation_error(const DynamicsParameter& theta_hat, const DynamicsParameter& theta_true);

}  // namespace randstab
