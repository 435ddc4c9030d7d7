#include "randstab/riccati.hpp"

#include "randstab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace randstab {

namespace {

constexpr double kDefinitenessFloor = 1e-10;

void require_spd(const Matrix& m, const char* name) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be square and nonempty");
    }
    if (!m.allFinite()) throw Error(ErrorCode::NonFinite, std::string(name) + " has non-finite entries");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (!is_symmetric(m, 1e-12 * scale)) {
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be symmetric");
    }
    if (min_symmetric_eigenvalue(m) <= kDefinitenessFloor) {
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be positive definite");
    }
}

// Operator norm of a symmetric matrix.
double symmetric_norm(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

// (B'KB + R)^-1 B'KA, or nullopt-like failure via the bool.
bool inner_solve(const Matrix& k, const DynamicsParameter& theta, const Matrix& r, Matrix& out) {
    const Matrix& a = theta.a();
    const Matrix& b = theta.b();
    const Matrix bk = b.transpose() * k;
    const Matrix inner = bk * b + r;
    Eigen::FullPivLU<Matrix> lu(inner);
    if (!lu.isInvertible()) return false;
    out = lu.solve(bk * a);
    return out.allFinite();
}

Matrix riccati_map(const Matrix& k, const DynamicsParameter& theta, const CostPair& costs,
                   const Matrix& solved) {
    const Matrix& a = theta.a();
    const Matrix akb = a.transpose() * k * theta.b();
    Matrix next = costs.q() + a.transpose() * k * a - akb * solved;
    return 0.5 * (next + next.transpose());
}

}  // namespace

CostPair::CostPair(Matrix q, Matrix r) : q_(std::move(q)), r_(std::move(r)) {
    require_spd(q_, "Q");
    require_spd(r_, "R");
}

Matrix feedback_gain(const Matrix& k, const DynamicsParameter& theta, const Matrix& r) {
    const Eigen::Index p = theta.state_dim();
    const Eigen::Index m = theta.input_dim();
    require_shape(k, p, p, "K");
    require_shape(r, m, m, "R");
    Matrix solved;
    if (!inner_solve(k, theta, r, solved)) {
        throw Error(ErrorCode::SingularInnerMatrix, "B'KB + R is singular");
    }
    return -solved;
}

double riccati_residual(const Matrix& k, const DynamicsParameter& theta, const CostPair& costs) {
    Matrix solved;
    if (!inner_solve(k, theta, costs.r(), solved)) {
        throw Error(ErrorCode::SingularInnerMatrix, "B'KB + R is singular");
    }
    return operator_norm(k - riccati_map(k, theta, costs, solved));
}

RiccatiSolution solve_dare(const DynamicsParameter& theta, const CostPair& costs,
                           const SolverOptions& opts) {
    const Eigen::Index p = theta.state_dim();
    require_shape(costs.q(), p, p, "Q");
    require_shape(costs.r(), theta.input_dim(), theta.input_dim(), "R");

    Matrix k = costs.q();
    Matrix solved;
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        if (!inner_solve(k, theta, costs.r(), solved)) {
            throw Error(ErrorCode::NoConvergence, "inner matrix became singular");
        }
        Matrix next = riccati_map(k, theta, costs, solved);
        if (!next.allFinite()) throw Error(ErrorCode::NoConvergence, "iterate left the finite range");
        const double next_norm = symmetric_norm(next);
        if (next_norm > opts.divergence_cap) {
            throw Error(ErrorCode::NoConvergence, "iterate exceeded divergence cap");
        }
        const double step = symmetric_norm(next - k);
        k = std::move(next);
        if (step < opts.tolerance * std::max(1.0, next_norm)) {
            RiccatiSolution sol;
            sol.gain = feedback_gain(k, theta, costs.r());
            sol.iterations = it;
            sol.residual = riccati_residual(k, theta, costs);
            sol.k = std::move(k);
            return sol;
        }
    }
    throw Error(ErrorCode::NoConvergence,
                "no convergence within " + std::to_string(opts.max_iterations) + " iterations");
}

double spectral_radius(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "spectral radius needs a square matrix");
    if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");
    if (m.size() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw Error(ErrorCode::NoConvergence, "eigenvalue iteration did not converge");
    }
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace randstab
