#include "randstab/algorithms.hpp"

#include "randstab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <string>

namespace randstab {

std::string_view to_string(Algorithm algo) noexcept {
    return algo == Algorithm::StochasticFeedback ? "sf" : "sp";
}

Algorithm parse_algorithm(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "sf") return Algorithm::StochasticFeedback;
    if (lower == "sp") return Algorithm::StochasticParameter;
    throw Error(ErrorCode::ConfigError, "unknown algorithm '" + std::string(name) + "'");
}

void validate(const AlgoConfig& cfg, Eigen::Index p, Eigen::Index r) {
    if (cfg.episodes == 0) throw Error(ErrorCode::ConfigError, "k must be positive");
    if (cfg.horizon < cfg.episodes) {
        throw Error(ErrorCode::ConfigError, "T = " + std::to_string(cfg.horizon) + " is smaller than k = " +
                                                std::to_string(cfg.episodes));
    }
    const std::size_t need = min_episodes(p, r);
    if (cfg.episodes < need) {
        throw Error(ErrorCode::ConfigError, "k = " + std::to_string(cfg.episodes) + " is below 1 + ceil(r/p) = " +
                                                std::to_string(need));
    }
    if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma)) {
        throw Error(ErrorCode::ConfigError, "sigma must be finite and nonnegative");
    }
    if (cfg.max_redraws == 0) throw Error(ErrorCode::ConfigError, "max_redraws must be positive");
}

Matrix draw_feedback(Rng& rng, double sigma, Eigen::Index r, Eigen::Index p) {
    if (sigma < 0.0) throw Error(ErrorCode::InvalidArgument, "sigma must be nonnegative");
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix gain(r, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        for (Eigen::Index i = 0; i < r; ++i) gain(i, j) = sigma * normal(rng);
    }
    return gain;
}

DynamicsParameter draw_parameter(Rng& rng, double sigma, Eigen::Index p, Eigen::Index q) {
    if (sigma < 0.0) throw Error(ErrorCode::InvalidArgument, "sigma must be nonnegative");
    if (q <= p) throw Error(ErrorCode::DimensionMismatch, "q must exceed p");
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix theta(p, q);
    for (Eigen::Index j = 0; j < q; ++j) {
        for (Eigen::Index i = 0; i < p; ++i) theta(i, j) = sigma * normal(rng);
    }
    return DynamicsParameter::from_joined(theta, p);
}

namespace {

// Chooses the gain for episode i; may record extra state in the result.
using GainPolicy = std::function<Matrix(std::size_t episode, Rng& rng, RunResult& result)>;

RunResult run_episodes(const DynamicsParameter& plant, const NoiseModel& noise, const AlgoConfig& cfg,
                       const RunStreams& streams, const GainPolicy& policy) {
    const Eigen::Index p = plant.state_dim();
    validate(cfg, p, plant.input_dim());
    if (noise.dim() != p) throw Error(ErrorCode::DimensionMismatch, "noise dimension does not match the plant");

    const std::size_t length = cfg.episode_length();
    Rng noise_rng = streams.noise_stream();
    const NoiseSource source = [&noise, &noise_rng] { return noise.sample(noise_rng); };

    RunResult result;
    ExtVector state = zero_ext_vector(p);
    for (std::size_t i = 0; i < cfg.episodes; ++i) {
        Rng draw_rng = streams.draw_stream(i);
        Matrix gain = policy(i, draw_rng, result);
        TrajectoryLog log = simulate_episode(plant, gain, state, length, source, cfg.overflow_cap, i * length);
        result.gains_applied.push_back(std::move(gain));
        if (log.overflow) {
            result.overflow = true;
            return result;
        }
        result.episode_estimates.push_back(closed_loop_ls(log));
        result.spans.push_back({log.first_step, log.transitions()});
        state = std::move(log.states.back());
    }
    result.theta_hat = recover_theta(result.episode_estimates, GainBasis(result.gains_applied));
    return result;
}

}  // namespace

RunResult run_sf(const DynamicsParameter& plant, const NoiseModel& noise, const CostPair&, const AlgoConfig& cfg,
                 const RunStreams& streams) {
    const Eigen::Index p = plant.state_dim();
    const Eigen::Index r = plant.input_dim();
    return run_episodes(plant, noise, cfg, streams, [&](std::size_t, Rng& rng, RunResult&) {
        return draw_feedback(rng, cfg.sigma, r, p);
    });
}

RunResult run_sp(const DynamicsParameter& plant, const NoiseModel& noise, const CostPair& costs,
                 const AlgoConfig& cfg, const RunStreams& streams) {
    const Eigen::Index p = plant.state_dim();
    const Eigen::Index q = plant.joined_cols();
    require_shape(costs.q(), p, p, "Q");
    require_shape(costs.r(), plant.input_dim(), plant.input_dim(), "R");
    return run_episodes(plant, noise, cfg, streams, [&](std::size_t episode, Rng& rng, RunResult& result) {
        for (std::size_t attempt = 0; attempt < cfg.max_redraws; ++attempt) {
            DynamicsParameter theta = draw_parameter(rng, cfg.sigma, p, q);
            try {
                RiccatiSolution sol = solve_dare(theta, costs);
                result.sampled_parameters.push_back(std::move(theta));
                return sol.gain;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoConvergence) throw;
                ++result.redraw_count;
            }
        }
        throw Error(ErrorCode::RedrawBudgetExhausted,
                    "episode " + std::to_string(episode) + ": " + std::to_string(cfg.max_redraws) +
                        " consecutive Riccati failures");
    });
}

RunResult run_algorithm(const DynamicsParameter& plant, const NoiseModel& noise, const CostPair& costs,
                        const AlgoConfig& cfg, const RunStreams& streams) {
    if (cfg.algo == Algorithm::StochasticFeedback) return run_sf(plant, noise, costs, cfg, streams);
    return run_sp(plant, noise, costs, cfg, streams);
}

}  // namespace randstab
