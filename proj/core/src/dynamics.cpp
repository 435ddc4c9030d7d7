#include "randstab/dynamics.hpp"

#include "randstab/errors.hpp"

#include <string>
#include <utility>

namespace randstab {

DynamicsParameter::DynamicsParameter(Matrix a, Matrix b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() != a_.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "A must be square, got " +
                                                      std::to_string(a_.rows()) + "x" +
                                                      std::to_string(a_.cols()));
    }
    if (b_.rows() != a_.rows()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "B must have " + std::to_string(a_.rows()) + " rows, got " +
                        std::to_string(b_.rows()));
    }
    if (!a_.allFinite() || !b_.allFinite()) {
        throw Error(ErrorCode::NonFinite, "dynamics parameter has non-finite entries");
    }
}

DynamicsParameter DynamicsParameter::from_joined(const Matrix& theta, Eigen::Index p) {
    if (p <= 0 || theta.rows() != p || theta.cols() < p) {
        throw Error(ErrorCode::DimensionMismatch,
                    "joined parameter must be p x (p + r) with p = " + std::to_string(p));
    }
    return DynamicsParameter(theta.leftCols(p), theta.rightCols(theta.cols() - p));
}

Matrix DynamicsParameter::joined() const {
    Matrix out(a_.rows(), joined_cols());
    out << a_, b_;
    return out;
}

Matrix DynamicsParameter::closed_loop(const Matrix& gain) const {
    require_shape(gain, input_dim(), state_dim(), "feedback gain");
    return a_ + b_ * gain;
}

}  // namespace randstab
