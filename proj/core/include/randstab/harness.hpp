#pragma once

// Monte Carlo campaigns over (algorithm, T, k, sigma, replication) cells.

#include "randstab/algorithms.hpp"
#include "randstab/system.hpp"
#include "randstab/system_io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace randstab {

struct ExperimentConfig {
    std::vector<Algorithm> algos{Algorithm::StochasticFeedback};
    std::vector<std::size_t> horizons{100, 200, 400, 800, 1600, 3200};
    std::vector<std::size_t> episode_counts{2, 3, 4, 5};
    std::vector<double> sigmas{1.0};
    std::size_t replications = 100;
    std::uint64_t master_seed = 0;
    std::string system_source = "preset";
    std::optional<std::string> output_path;
    /// Worker threads; 0 means hardware concurrency.
    std::size_t threads = 1;
    std::size_t max_redraws = 50;
    MagnitudeCap overflow_cap = default_overflow_cap();
};

/// Outcome classes written to the `reason` column.
enum class TrialReason { Ok, Overflow, RankDeficient, RedrawExhausted, DareNoConvergence };

[[nodiscard]] std::string_view to_string(TrialReason reason) noexcept;
[[nodiscard]] TrialReason parse_trial_reason(std::string_view text);

struct TrialRecord {
    Algorithm algo = Algorithm::StochasticFeedback;
    std::size_t horizon = 0;
    std::size_t episodes = 0;
    double sigma = 0.0;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    /// ||theta_hat - theta_0||; +inf when no estimate was produced.
    double error_norm = 0.0;
    /// rho(A0 + B0 L(theta_hat)); +inf when no gain could be designed.
    double closed_loop_radius = 0.0;
    bool stabilized = false;
    bool overflow = false;
    std::size_t redraws = 0;
    TrialReason reason = TrialReason::Ok;
};

struct ScatterRecord {
    double epsilon = 0.0;
    std::size_t sample = 0;
    double perturbation_norm = 0.0;
    /// +inf when the Riccati iteration for the perturbed parameter fails.
    double closed_loop_radius = 0.0;
};

struct SummaryRow {
    Algorithm algo = Algorithm::StochasticFeedback;
    std::size_t horizon = 0;
    std::size_t episodes = 0;
    double sigma = 0.0;
    std::size_t count = 0;
    double median_error = 0.0;
    double q1_error = 0.0;
    double q3_error = 0.0;
    double iqr_error = 0.0;
    double stabilized_pct = 0.0;
};

inline constexpr std::string_view kTrialCsvHeader =
    "algo,T,k,sigma,rep,seed,error_norm,closed_loop_radius,stabilized,overflow,redraws,reason";
inline constexpr std::string_view kScatterCsvHeader = "epsilon,sample,perturbation_norm,closed_loop_radius";
inline constexpr std::string_view kSummaryCsvHeader =
    "algo,T,k,sigma,n,median_error,q1_error,q3_error,iqr_error,stabilized_pct";

/// Stable 64-bit seed for one cell replication.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master_seed, Algorithm algo, std::size_t horizon,
                                        std::size_t episodes, double sigma, std::size_t rep) noexcept;

/// Throws ConfigError for empty grids, zero replications, nonpositive sigmas, or cells
/// invalid for the plant.
void validate(const ExperimentConfig& cfg, const SystemDescription& system);

/// Runs one replication; per-trial failures are folded into the record.
[[nodiscard]] TrialRecord run_trial(const SystemDescription& system, Algorithm algo, std::size_t horizon,
                                    std::size_t episodes, double sigma, std::size_t rep, std::uint64_t seed,
                                    std::size_t max_redraws, MagnitudeCap overflow_cap);

/// Every cell of the grid, rows ordered by (algo, T, k, sigma, rep) in grid order.
/// Writes the CSV when cfg.output_path is set.
[[nodiscard]] std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);
[[nodiscard]] std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg, const SystemDescription& system);

/// Perturbs theta_0 by epsilon U, U uniform on the operator-norm unit sphere
/// (normalized Gaussian), and records rho(A0 + B0 L(theta_0 + epsilon U)).
[[nodiscard]] std::vector<ScatterRecord> lemma1_scatter(const SystemDescription& system, std::size_t n_samples,
                                                        const std::vector<double>& radii, std::uint64_t seed);

/// Groups by (algo, T, k, sigma) in order of first appearance. Throws EmptyInput.
[[nodiscard]] std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

/// Linear-interpolation quantile of an ascending-sorted sample.
[[nodiscard]] double sorted_quantile(const std::vector<double>& sorted, double prob);

[[nodiscard]] std::string trials_to_csv(const std::vector<TrialRecord>& records);
[[nodiscard]] std::vector<TrialRecord> trials_from_csv(const std::vector<std::string>& lines);
[[nodiscard]] std::vector<TrialRecord> read_trials_csv(const std::string& path);
[[nodiscard]] std::string scatter_to_csv(const std::vector<ScatterRecord>& records);
[[nodiscard]] std::string summary_to_csv(const std::vector<SummaryRow>& rows);

}  // namespace randstab
