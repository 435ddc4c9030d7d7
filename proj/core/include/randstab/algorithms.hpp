#pragma once

#include "randstab/dynamics.hpp"
#include "randstab/estimation.hpp"
#include "randstab/riccati.hpp"
#include "randstab/rng.hpp"
#include "randstab/system.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace randstab {

enum class Algorithm { StochasticFeedback, StochasticParameter };

[[nodiscard]] std::string_view to_string(Algorithm algo) noexcept;
/// "sf" / "sp" (case-insensitive); throws ConfigError otherwise.
[[nodiscard]] Algorithm parse_algorithm(std::string_view name);

struct AlgoConfig {
    std::size_t horizon = 0;        // T
    std::size_t episodes = 0;       // k
    double sigma = 1.0;
    Algorithm algo = Algorithm::StochasticFeedback;
    std::size_t max_redraws = 50;
    MagnitudeCap overflow_cap = default_overflow_cap();

    [[nodiscard]] std::size_t episode_length() const noexcept { return episodes == 0 ? 0 : horizon / episodes; }
};

/// Throws ConfigError when T < k, k < 1 + ceil(r/p), sigma < 0 or max_redraws == 0.
/// sigma = 0 is accepted; it yields a rank-deficient gain basis.
void validate(const AlgoConfig& cfg, Eigen::Index p, Eigen::Index r);

struct EpisodeSpan {
    std::size_t first_transition = 0;
    std::size_t transitions = 0;
};

struct RunResult {
    /// Empty when the run overflowed.
    std::optional<DynamicsParameter> theta_hat;
    std::vector<ClosedLoopEstimate> episode_estimates;
    std::vector<Matrix> gains_applied;
    /// Stochastic-parameter draws behind each gain (empty for SF).
    std::vector<DynamicsParameter> sampled_parameters;
    std::vector<EpisodeSpan> spans;
    std::size_t redraw_count = 0;
    bool overflow = false;
};

/// r x p gain whose p columns are independent N(0, sigma^2 I_r) draws.
[[nodiscard]] Matrix draw_feedback(Rng& rng, double sigma, Eigen::Index r, Eigen::Index p);

/// [A, B] whose q columns are independent N(0, sigma^2 I_p) draws.
[[nodiscard]] DynamicsParameter draw_parameter(Rng& rng, double sigma, Eigen::Index p, Eigen::Index q);

/// Stochastic feedback: k episodes of floor(T/k) steps under random gains L_i,
/// one continuous trajectory from x(0) = 0, then theta from the episode
/// closed-loop estimates. Leftover T - k floor(T/k) steps are not simulated.
/// An overflowing episode ends the run with overflow = true and no theta_hat.
[[nodiscard]] RunResult run_sf(const DynamicsParameter& plant, const NoiseModel& noise, const CostPair& costs,
                               const AlgoConfig& cfg, const RunStreams& streams);

/// Stochastic parameter: as run_sf, but episode i applies the certainty-equivalent
/// gain L(theta_i) of a random parameter theta_i. Draws whose Riccati iteration
/// fails are redrawn; max_redraws consecutive failures throw RedrawBudgetExhausted.
[[nodiscard]] RunResult run_sp(const DynamicsParameter& plant, const NoiseModel& noise, const CostPair& costs,
                               const AlgoConfig& cfg, const RunStreams& streams);

/// Dispatches on cfg.algo.
[[nodiscard]] RunResult run_algorithm(const DynamicsParameter& plant, const NoiseModel& noise,
                                      const CostPair& costs, const AlgoConfig& cfg, const RunStreams& streams);

}  // namespace randstab
