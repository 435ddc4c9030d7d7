#include "randstab/system.hpp"

#include "randstab/errors.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <string>

namespace randstab {

NoiseModel::NoiseModel(NoiseKind kind, Matrix covariance)
    : kind_(kind), covariance_(std::move(covariance)) {
    if (covariance_.rows() == 0 || covariance_.rows() != covariance_.cols()) {
        throw Error(ErrorCode::InvalidArgument, "noise covariance must be square and nonempty");
    }
    if (!covariance_.allFinite()) throw Error(ErrorCode::NonFinite, "noise covariance is not finite");
    const double scale = std::max(1.0, covariance_.cwiseAbs().maxCoeff());
    if (!is_symmetric(covariance_, 1e-12 * scale) || min_symmetric_eigenvalue(covariance_) <= 1e-10) {
        throw Error(ErrorCode::InvalidArgument, "noise covariance must be symmetric positive definite");
    }
    factor_ = Eigen::LLT<Matrix>(covariance_).matrixL();
}

Vector NoiseModel::sample(Rng& rng) const {
    Vector z(dim());
    if (kind_ == NoiseKind::Gaussian) {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
    } else {
        const double half_width = std::sqrt(3.0);
        std::uniform_real_distribution<double> uniform(-half_width, half_width);
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = uniform(rng);
    }
    return factor_ * z;
}

MagnitudeCap MagnitudeCap::value(double cap) {
    if (!(cap > 0.0)) throw Error(ErrorCode::InvalidArgument, "overflow cap must be positive");
    return MagnitudeCap(std::log2(cap));
}

MagnitudeCap MagnitudeCap::pow2(double exponent) {
    if (std::isnan(exponent)) throw Error(ErrorCode::InvalidArgument, "overflow cap exponent is NaN");
    return MagnitudeCap(exponent);
}

MagnitudeCap MagnitudeCap::pow10(double exponent) {
    if (std::isnan(exponent)) throw Error(ErrorCode::InvalidArgument, "overflow cap exponent is NaN");
    return MagnitudeCap(exponent * std::log2(10.0));
}

double MagnitudeCap::log10() const noexcept {
    return log2_ / std::log2(10.0);
}

MagnitudeCap default_overflow_cap() {
    constexpr double kPrecisionBudget = 16384.0;
    return MagnitudeCap::pow2((kPrecisionBudget - static_cast<double>(kMomentGuardBits)) / 2.0);
}

Vector step(const DynamicsParameter& sys, const Vector& x, const Vector& u, const Vector& xi) {
    const Eigen::Index p = sys.state_dim();
    if (x.size() != p || xi.size() != p || u.size() != sys.input_dim()) {
        throw Error(ErrorCode::DimensionMismatch, "step: vector sizes do not match the system");
    }
    return sys.a() * x + sys.b() * u + xi;
}

namespace {

// Smallest integer e with max_i sum_j |m_ij| <= 2^e (0 for the zero matrix).
long row_sum_exponent(const Matrix& m) {
    const double s = m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
    if (s <= 0.0) return 0;
    return static_cast<long>(std::ceil(std::log2(s)));
}

long exponent_or_zero(long e) {
    return e == LONG_MIN ? 0 : e;
}

// out = m * v, each entry computed at `bits` precision.
void apply(const Matrix& m, const ExtVector& v, ExtVector& out, mpfr_prec_t bits, mpfr_ptr scratch) {
    out = zero_ext_vector(m.rows(), bits);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double c = m(i, j);
            if (c == 0.0) continue;
            mpfr_mul_d(scratch, v[static_cast<std::size_t>(j)].get(), c, MPFR_RNDN);
            mpfr_add(out[static_cast<std::size_t>(i)].get(), out[static_cast<std::size_t>(i)].get(),
                     scratch, MPFR_RNDN);
        }
    }
}

bool all_finite(const ExtVector& v) {
    return std::all_of(v.begin(), v.end(), [](const ExtReal& x) { return x.is_finite(); });
}

}  // namespace

TrajectoryLog simulate_episode(const DynamicsParameter& sys, const Matrix& gain, const ExtVector& x0,
                               std::size_t n_steps, const NoiseSource& noise, MagnitudeCap cap,
                               std::size_t first_step) {
    const Eigen::Index p = sys.state_dim();
    require_shape(gain, sys.input_dim(), p, "feedback gain");
    if (static_cast<Eigen::Index>(x0.size()) != p) {
        throw Error(ErrorCode::DimensionMismatch, "initial state has wrong dimension");
    }
    if (n_steps == 0) throw Error(ErrorCode::InvalidArgument, "episode needs at least one step");

    TrajectoryLog log;
    log.first_step = first_step;
    log.states.reserve(n_steps + 1);
    log.inputs.reserve(n_steps);
    log.states.push_back(x0);
    if (cap.exceeded_by(log2_norm(x0))) {
        log.overflow = true;
        return log;
    }

    const long gain_growth = row_sum_exponent(gain);
    const long a_growth = row_sum_exponent(sys.a());
    const long b_growth = row_sum_exponent(sys.b());
    ExtReal scratch(kMinPrecision);

    for (std::size_t t = 0; t < n_steps; ++t) {
        const ExtVector& x = log.states.back();
        const long ex = exponent_or_zero(max_exponent(x));

        const long eu = ex + gain_growth + 1;
        const mpfr_prec_t u_bits = round_precision(eu + kStateGuardBits);
        mpfr_set_prec(scratch.get(), u_bits);
        ExtVector u;
        apply(gain, x, u, u_bits, scratch.get());

        const Vector xi = noise();
        if (xi.size() != p) throw Error(ErrorCode::DimensionMismatch, "noise sample has wrong dimension");
        const double xi_max = xi.cwiseAbs().maxCoeff();
        const long exi = xi_max > 0.0 ? static_cast<long>(std::ceil(std::log2(xi_max))) + 1 : 0;
        const long enext = std::max({ex + a_growth, eu + b_growth, exi}) + 2;
        const mpfr_prec_t x_bits = round_precision(enext + kStateGuardBits);
        mpfr_set_prec(scratch.get(), x_bits);

        ExtVector ax;
        apply(sys.a(), x, ax, x_bits, scratch.get());
        ExtVector bu;
        apply(sys.b(), u, bu, x_bits, scratch.get());
        ExtVector next = zero_ext_vector(p, x_bits);
        for (Eigen::Index i = 0; i < p; ++i) {
            auto& out = next[static_cast<std::size_t>(i)];
            mpfr_add(out.get(), ax[static_cast<std::size_t>(i)].get(), bu[static_cast<std::size_t>(i)].get(),
                     MPFR_RNDN);
            mpfr_add_d(out.get(), out.get(), xi(i), MPFR_RNDN);
        }

        if (!all_finite(next)) {
            log.overflow = true;
            break;
        }
        const bool exceeded = cap.exceeded_by(log2_norm(next));
        log.inputs.push_back(std::move(u));
        log.states.push_back(std::move(next));
        if (exceeded) {
            log.overflow = true;
            break;
        }
    }
    return log;
}

TrajectoryLog simulate_episode(const DynamicsParameter& sys, const Matrix& gain, const Vector& x0,
                               std::size_t n_steps, const NoiseModel& noise, Rng& rng, MagnitudeCap cap) {
    if (noise.dim() != sys.state_dim()) {
        throw Error(ErrorCode::DimensionMismatch, "noise dimension does not match the system");
    }
    if (!x0.allFinite()) throw Error(ErrorCode::NonFinite, "initial state is not finite");
    return simulate_episode(sys, gain, make_ext_vector(x0), n_steps,
                            [&noise, &rng] { return noise.sample(rng); }, cap);
}

std::pair<DynamicsParameter, CostPair> preset_benchmark() {
    Matrix a(3, 3);
    a << 1.07, 0.0, -0.37,
         0.48, -0.88, 0.85,
         0.0, 0.03, -0.92;
    Matrix b(3, 3);
    b << -0.48, 0.44, -0.29,
         -0.51, 0.59, 0.26,
         0.29, 0.0, -0.74;
    Matrix q(3, 3);
    q << 1.31, -0.17, -0.28,
         -0.17, 1.14, 0.51,
         -0.28, 0.51, 5.01;
    Matrix r(3, 3);
    r << 2.01, 0.54, 0.77,
         0.54, 1.38, 0.42,
         0.77, 0.42, 2.38;
    return {DynamicsParameter(std::move(a), std::move(b)), CostPair(std::move(q), std::move(r))};
}

}  // namespace randstab
