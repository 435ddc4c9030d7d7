#include "randstab/estimation.hpp"

#include "randstab/errors.hpp"
#include "randstab/ext_real.hpp"

#include <algorithm>
#include <climits>
#include <string>
#include <utility>

namespace randstab {

namespace {

constexpr double kBasisRankTolerance = 1e-10;
// Eigenvalues of the Gram matrix below 2^-(precision - kRankMarginBits) of the
// largest one are treated as zero.
constexpr mpfr_prec_t kRankMarginBits = 64;
constexpr int kMaxJacobiSweeps = 64;

// Dense square matrix of extended reals, row-major.
class ExtMatrix {
public:
    ExtMatrix(std::size_t n, mpfr_prec_t bits) : n_(n), data_(n * n, ExtReal(bits)) {}

    ExtReal& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const ExtReal& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_;
    std::vector<ExtReal> data_;
};

ExtMatrix identity(std::size_t n, mpfr_prec_t bits) {
    ExtMatrix m(n, bits);
    for (std::size_t i = 0; i < n; ++i) mpfr_set_ui(m(i, i).get(), 1, MPFR_RNDN);
    return m;
}

// Cyclic Jacobi on a symmetric matrix: g <- diag(lambda), v holds the eigenvectors
// as columns. Rotations are skipped once |g_ij| is negligible next to
// sqrt(|g_ii g_jj|), which keeps small eigenvalues of graded matrices accurate.
void jacobi_eigen(ExtMatrix& g, ExtMatrix& v, mpfr_prec_t bits) {
    const std::size_t n = g.size();
    const ExtReal one(1.0, bits);
    ExtReal negligible(1.0, bits);
    mpfr_mul_2si(negligible.get(), negligible.get(), -static_cast<long>(bits), MPFR_RNDN);

    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (g(i, j).is_zero()) continue;
                const ExtReal scale = (g(i, i) * g(j, j)).abs().sqrt();
                if (!(g(i, j).abs() > negligible * scale)) {
                    mpfr_set_zero(g(i, j).get(), 1);
                    mpfr_set_zero(g(j, i).get(), 1);
                    continue;
                }
                rotated = true;
                const ExtReal two_gij = g(i, j) + g(i, j);
                const ExtReal theta = (g(j, j) - g(i, i)) / two_gij;
                ExtReal t = one / (theta.abs() + (theta * theta + one).sqrt());
                if (mpfr_sgn(theta.get()) < 0) t = -t;
                const ExtReal c = one / (t * t + one).sqrt();
                const ExtReal s = t * c;

                for (std::size_t m = 0; m < n; ++m) {
                    const ExtReal gmi = g(m, i);
                    const ExtReal gmj = g(m, j);
                    g(m, i) = c * gmi - s * gmj;
                    g(m, j) = s * gmi + c * gmj;
                }
                for (std::size_t m = 0; m < n; ++m) {
                    const ExtReal gim = g(i, m);
                    const ExtReal gjm = g(j, m);
                    g(i, m) = c * gim - s * gjm;
                    g(j, m) = s * gim + c * gjm;
                }
                for (std::size_t m = 0; m < n; ++m) {
                    const ExtReal vmi = v(m, i);
                    const ExtReal vmj = v(m, j);
                    v(m, i) = c * vmi - s * vmj;
                    v(m, j) = s * vmi + c * vmj;
                }
                mpfr_set_zero(g(i, j).get(), 1);
                mpfr_set_zero(g(j, i).get(), 1);
            }
        }
        if (!rotated) return;
    }
}

}  // namespace

GainBasis::GainBasis(std::vector<Matrix> gains) : gains_(std::move(gains)) {
    if (gains_.empty()) throw Error(ErrorCode::InvalidArgument, "gain basis needs at least one gain");
    const Eigen::Index r = gains_.front().rows();
    const Eigen::Index p = gains_.front().cols();
    if (p == 0) throw Error(ErrorCode::InvalidArgument, "gains must have at least one column");
    for (const auto& g : gains_) require_shape(g, r, p, "gain basis entry");
}

Matrix GainBasis::block(std::size_t i) const {
    const Matrix& gain = gains_.at(i);
    Matrix out(gain.cols() + gain.rows(), gain.cols());
    out << Matrix::Identity(gain.cols(), gain.cols()), gain;
    return out;
}

Matrix GainBasis::stacked() const {
    const Eigen::Index p = state_dim();
    Matrix out(p + input_dim(), p * static_cast<Eigen::Index>(k()));
    for (std::size_t i = 0; i < k(); ++i) out.middleCols(static_cast<Eigen::Index>(i) * p, p) = block(i);
    return out;
}

std::size_t min_episodes(Eigen::Index p, Eigen::Index r) noexcept {
    return 1 + static_cast<std::size_t>((r + p - 1) / p);
}

ClosedLoopEstimate closed_loop_ls(const TrajectoryLog& traj) {
    const std::size_t n = traj.transitions();
    if (n == 0) throw Error(ErrorCode::EmptyTrajectory, "trajectory has no transitions");
    const std::size_t p = traj.states.front().size();

    long top = 0;
    for (const auto& x : traj.states) {
        if (x.size() != p) throw Error(ErrorCode::DimensionMismatch, "trajectory states differ in size");
        const long e = max_exponent(x);
        if (e != LONG_MIN) top = std::max(top, e);
    }
    const mpfr_prec_t bits = round_precision(2 * top + kMomentGuardBits);

    // gram = sum x x', cross = sum x(l+1) x(l)'.
    ExtMatrix gram(p, bits);
    ExtMatrix cross(p, bits);
    for (std::size_t l = 0; l < n; ++l) {
        const ExtVector& x = traj.states[l];
        const ExtVector& y = traj.states[l + 1];
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = i; j < p; ++j) {
                mpfr_fma(gram(i, j).get(), x[i].get(), x[j].get(), gram(i, j).get(), MPFR_RNDN);
            }
            for (std::size_t j = 0; j < p; ++j) {
                mpfr_fma(cross(i, j).get(), y[i].get(), x[j].get(), cross(i, j).get(), MPFR_RNDN);
            }
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < i; ++j) gram(i, j) = gram(j, i);
    }

    ExtMatrix vecs = identity(p, bits);
    jacobi_eigen(gram, vecs, bits);

    ExtReal largest(bits);
    for (std::size_t i = 0; i < p; ++i) {
        if (gram(i, i) > largest) largest = gram(i, i);
    }
    ExtReal threshold = largest;
    mpfr_mul_2si(threshold.get(), threshold.get(), -static_cast<long>(bits - kRankMarginBits), MPFR_RNDN);

    // pinv = V diag(1/lambda) V' over the retained eigenvalues.
    std::size_t rank = 0;
    std::vector<ExtReal> inv_lambda(p, ExtReal(bits));
    const ExtReal one(1.0, bits);
    for (std::size_t i = 0; i < p; ++i) {
        if (gram(i, i) > threshold && !gram(i, i).is_zero()) {
            inv_lambda[i] = one / gram(i, i);
            ++rank;
        }
    }
    ExtMatrix pinv(p, bits);
    ExtReal term(bits);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t m = 0; m < p; ++m) {
                if (inv_lambda[m].is_zero()) continue;
                mpfr_mul(term.get(), vecs(i, m).get(), vecs(j, m).get(), MPFR_RNDN);
                mpfr_fma(pinv(i, j).get(), term.get(), inv_lambda[m].get(), pinv(i, j).get(), MPFR_RNDN);
            }
        }
    }

    ClosedLoopEstimate est;
    est.d_hat = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    ExtReal acc(bits);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            mpfr_set_zero(acc.get(), 1);
            for (std::size_t m = 0; m < p; ++m) {
                mpfr_fma(acc.get(), cross(i, m).get(), pinv(m, j).get(), acc.get(), MPFR_RNDN);
            }
            est.d_hat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc.to_double();
        }
    }
    est.sample_count = n;
    est.regressor_rank = rank;
    est.first_transition = traj.first_step;
    return est;
}

DynamicsParameter recover_theta(const std::vector<ClosedLoopEstimate>& estimates, const GainBasis& basis) {
    if (estimates.size() != basis.k()) {
        throw Error(ErrorCode::DimensionMismatch, "need one closed-loop estimate per gain (" +
                                                      std::to_string(basis.k()) + "), got " +
                                                      std::to_string(estimates.size()));
    }
    const Eigen::Index p = basis.state_dim();
    const Eigen::Index q = p + basis.input_dim();
    const Matrix m = basis.stacked();

    Matrix targets(p, p * static_cast<Eigen::Index>(basis.k()));
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        require_shape(estimates[i].d_hat, p, p, "closed-loop estimate");
        targets.middleCols(static_cast<Eigen::Index>(i) * p, p) = estimates[i].d_hat;
    }
    if (!targets.allFinite()) throw Error(ErrorCode::NonFinite, "closed-loop estimates are not finite");

    // theta M = targets  <=>  M' theta' = targets'.
    Eigen::JacobiSVD<Matrix> svd(m.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = kBasisRankTolerance * (sv.size() > 0 ? sv(0) : 0.0);
    const auto rank = (sv.array() > cutoff).count();
    if (rank < q || sv.size() < q) {
        throw Error(ErrorCode::RankDeficientBasis,
                    "stacked gain basis has rank " + std::to_string(rank) + " < q = " + std::to_string(q));
    }
    const Matrix theta = svd.solve(targets.transpose()).transpose();
    return DynamicsParameter::from_joined(theta, p);
}

double estimation_error(const DynamicsParameter& theta_hat, const DynamicsParameter& theta_true) {
    if (theta_hat.state_dim() != theta_true.state_dim() || theta_hat.input_dim() != theta_true.input_dim()) {
        throw Error(ErrorCode::DimensionMismatch, "parameters have different shapes");
    }
    return operator_norm(theta_hat.joined() - theta_true.joined());
}

}  // namespace randstab
