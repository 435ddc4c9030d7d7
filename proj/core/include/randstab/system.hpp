#pragma once

#include "randstab/dynamics.hpp"
#include "randstab/ext_real.hpp"
#include "randstab/linalg.hpp"
#include "randstab/riccati.hpp"
#include "randstab/rng.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <utility>

namespace randstab {

enum class NoiseKind { Gaussian, Uniform };

/// Mean-zero process noise with covariance Sigma = C C'.
class NoiseModel {
public:
    /// Throws InvalidArgument unless covariance is symmetric with smallest eigenvalue > 1e-10.
    NoiseModel(NoiseKind kind, Matrix covariance);

    [[nodiscard]] static NoiseModel standard(Eigen::Index p) {
        return NoiseModel(NoiseKind::Gaussian, Matrix::Identity(p, p));
    }

    [[nodiscard]] NoiseKind kind() const noexcept { return kind_; }
    [[nodiscard]] const Matrix& covariance() const noexcept { return covariance_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return covariance_.rows(); }

    /// One draw. Gaussian: C z with z ~ N(0, I). Uniform: C u with u_i ~ U(-sqrt3, sqrt3).
    [[nodiscard]] Vector sample(Rng& rng) const;

private:
    NoiseKind kind_;
    Matrix covariance_;
    Matrix factor_;
};

/// Noise supplier used by the simulator; lets tests inject exact sequences.
using NoiseSource = std::function<Vector()>;

/// Upper bound on the state norm, stored as log2 so it can exceed the double range.
class MagnitudeCap {
public:
    [[nodiscard]] static MagnitudeCap value(double cap);
    [[nodiscard]] static MagnitudeCap pow2(double exponent);
    [[nodiscard]] static MagnitudeCap pow10(double exponent);
    [[nodiscard]] static MagnitudeCap unbounded() {
        return MagnitudeCap(std::numeric_limits<double>::infinity());
    }

    [[nodiscard]] double log2() const noexcept { return log2_; }
    [[nodiscard]] double log10() const noexcept;
    [[nodiscard]] bool exceeded_by(double log2_norm) const noexcept { return log2_norm > log2_; }

private:
    explicit MagnitudeCap(double log2_value) : log2_(log2_value) {}
    double log2_;
};

/// Default explosion threshold: the largest state norm for which the episode
/// second moments still fit a 16384-bit working precision (about 10^2446).
[[nodiscard]] MagnitudeCap default_overflow_cap();

/// One episode of the history: x(0..n) and u(0..n-1).
struct TrajectoryLog {
    std::vector<ExtVector> states;
    std::vector<ExtVector> inputs;
    bool overflow = false;
    /// Global time index of states.front().
    std::size_t first_step = 0;

    [[nodiscard]] std::size_t transitions() const noexcept {
        return states.empty() ? 0 : states.size() - 1;
    }
    /// x(i) rounded to double.
    [[nodiscard]] Vector state(std::size_t i) const { return to_double(states.at(i)); }
    [[nodiscard]] Vector input(std::size_t i) const { return to_double(inputs.at(i)); }
};

/// x' = A x + B u + xi.
[[nodiscard]] Vector step(const DynamicsParameter& sys, const Vector& x, const Vector& u, const Vector& xi);

/// Applies u(t) = gain x(t) for n_steps transitions of x(t+1) = A x + B u + xi(t+1).
///
/// Stops early with overflow = true as soon as a stored state has norm above
/// `cap`; that state is the last one kept.
[[nodiscard]] TrajectoryLog simulate_episode(const DynamicsParameter& sys, const Matrix& gain,
                                             const ExtVector& x0, std::size_t n_steps,
                                             const NoiseSource& noise, MagnitudeCap cap,
                                             std::size_t first_step = 0);

[[nodiscard]] TrajectoryLog simulate_episode(const DynamicsParameter& sys, const Matrix& gain,
                                             const Vector& x0, std::size_t n_steps,
                                             const NoiseModel& noise, Rng& rng, MagnitudeCap cap);

/// Benchmark plant (A0, B0) and costs (Q, R).
[[nodiscard]] std::pair<DynamicsParameter, CostPair> preset_benchmark();

}  // namespace randstab
