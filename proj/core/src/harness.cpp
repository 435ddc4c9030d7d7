#include "randstab/harness.hpp"

#include "randstab/csv.hpp"
#include "randstab/errors.hpp"
#include "randstab/riccati.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

namespace randstab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kScatterTag = 0x73636174746572ULL;  // "scatter"

std::uint64_t algo_id(Algorithm algo) {
    return algo == Algorithm::StochasticFeedback ? 1 : 2;
}

struct Cell {
    Algorithm algo;
    std::size_t horizon;
    std::size_t episodes;
    double sigma;
    std::size_t rep;
};

std::vector<Cell> enumerate_cells(const ExperimentConfig& cfg) {
    std::vector<Cell> cells;
    for (Algorithm algo : cfg.algos)
        for (std::size_t t : cfg.horizons)
            for (std::size_t k : cfg.episode_counts)
                for (double s : cfg.sigmas)
                    for (std::size_t rep = 0; rep < cfg.replications; ++rep) cells.push_back({algo, t, k, s, rep});
    return cells;
}

// Calls body(i) for i in [0, n) on `threads` workers; rethrows the first failure.
template <typename Body>
void parallel_for(std::size_t n, std::size_t threads, Body&& body) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(n, 1));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next.store(n);
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string_view to_string(TrialReason reason) noexcept {
    switch (reason) {
        case TrialReason::Ok: return "ok";
        case TrialReason::Overflow: return "overflow";
        case TrialReason::RankDeficient: return "rank_deficient";
        case TrialReason::RedrawExhausted: return "redraw_exhausted";
        case TrialReason::DareNoConvergence: return "dare_no_convergence";
    }
    return "ok";
}

TrialReason parse_trial_reason(std::string_view text) {
    for (TrialReason r : {TrialReason::Ok, TrialReason::Overflow, TrialReason::RankDeficient,
                          TrialReason::RedrawExhausted, TrialReason::DareNoConvergence}) {
        if (to_string(r) == text) return r;
    }
    throw Error(ErrorCode::IoError, "unknown reason code '" + std::string(text) + "'");
}

std::uint64_t derive_seed(std::uint64_t master_seed, Algorithm algo, std::size_t horizon, std::size_t episodes,
                          double sigma, std::size_t rep) noexcept {
    return hash_words({master_seed, algo_id(algo), static_cast<std::uint64_t>(horizon),
                       static_cast<std::uint64_t>(episodes), std::bit_cast<std::uint64_t>(sigma),
                       static_cast<std::uint64_t>(rep)});
}

void validate(const ExperimentConfig& cfg, const SystemDescription& system) {
    if (cfg.algos.empty() || cfg.horizons.empty() || cfg.episode_counts.empty() || cfg.sigmas.empty()) {
        throw Error(ErrorCode::ConfigError, "experiment grids must be nonempty");
    }
    if (cfg.replications == 0) throw Error(ErrorCode::ConfigError, "replications must be at least 1");
    for (std::size_t t : cfg.horizons)
        for (std::size_t k : cfg.episode_counts)
            for (double s : cfg.sigmas) {
                if (!(s > 0.0)) throw Error(ErrorCode::ConfigError, "campaign sigmas must be positive");
                AlgoConfig algo_cfg;
                algo_cfg.horizon = t;
                algo_cfg.episodes = k;
                algo_cfg.sigma = s;
                algo_cfg.max_redraws = cfg.max_redraws;
                validate(algo_cfg, system.plant.state_dim(), system.plant.input_dim());
            }
}

TrialRecord run_trial(const SystemDescription& system, Algorithm algo, std::size_t horizon, std::size_t episodes,
                      double sigma, std::size_t rep, std::uint64_t seed, std::size_t max_redraws,
                      MagnitudeCap overflow_cap) {
    TrialRecord rec;
    rec.algo = algo;
    rec.horizon = horizon;
    rec.episodes = episodes;
    rec.sigma = sigma;
    rec.rep = rep;
    rec.seed = seed;
    rec.error_norm = kInf;
    rec.closed_loop_radius = kInf;

    AlgoConfig cfg;
    cfg.horizon = horizon;
    cfg.episodes = episodes;
    cfg.sigma = sigma;
    cfg.algo = algo;
    cfg.max_redraws = max_redraws;
    cfg.overflow_cap = overflow_cap;

    const DynamicsParameter& plant = system.plant;
    const NoiseModel noise = NoiseModel::standard(plant.state_dim());

    RunResult run;
    try {
        run = run_algorithm(plant, noise, system.costs, cfg, RunStreams(seed));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::RankDeficientBasis) {
            rec.reason = TrialReason::RankDeficient;
            return rec;
        }
        if (e.code() == ErrorCode::RedrawBudgetExhausted) {
            rec.reason = TrialReason::RedrawExhausted;
            rec.redraws = max_redraws;
            return rec;
        }
        throw;
    }
    rec.redraws = run.redraw_count;
    if (run.overflow || !run.theta_hat) {
        rec.overflow = true;
        rec.reason = TrialReason::Overflow;
        return rec;
    }

    rec.error_norm = estimation_error(*run.theta_hat, plant);
    try {
        const RiccatiSolution sol = solve_dare(*run.theta_hat, system.costs);
        rec.closed_loop_radius = spectral_radius(plant.closed_loop(sol.gain));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoConvergence) throw;
        rec.reason = TrialReason::DareNoConvergence;
        return rec;
    }
    rec.stabilized = rec.closed_loop_radius < 1.0;
    return rec;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
    return run_experiment(cfg, load_system(cfg.system_source));
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg, const SystemDescription& system) {
    validate(cfg, system);
    const std::vector<Cell> cells = enumerate_cells(cfg);
    std::vector<TrialRecord> records(cells.size());
    parallel_for(cells.size(), cfg.threads, [&](std::size_t i) {
        const Cell& c = cells[i];
        const std::uint64_t seed = derive_seed(cfg.master_seed, c.algo, c.horizon, c.episodes, c.sigma, c.rep);
        records[i] = run_trial(system, c.algo, c.horizon, c.episodes, c.sigma, c.rep, seed, cfg.max_redraws,
                               cfg.overflow_cap);
    });
    if (cfg.output_path) csv::write_file(*cfg.output_path, trials_to_csv(records));
    return records;
}

std::vector<ScatterRecord> lemma1_scatter(const SystemDescription& system, std::size_t n_samples,
                                          const std::vector<double>& radii, std::uint64_t seed) {
    const DynamicsParameter& plant = system.plant;
    const Eigen::Index p = plant.state_dim();
    const Eigen::Index q = plant.joined_cols();
    const Matrix theta0 = plant.joined();

    std::vector<ScatterRecord> out;
    out.reserve(n_samples * radii.size());
    for (double eps : radii) {
        if (!(eps >= 0.0) || !std::isfinite(eps)) {
            throw Error(ErrorCode::ConfigError, "scatter radii must be finite and nonnegative");
        }
        Rng rng(hash_words({seed, kScatterTag, std::bit_cast<std::uint64_t>(eps)}));
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t s = 0; s < n_samples; ++s) {
            Matrix dir(p, q);
            for (Eigen::Index j = 0; j < q; ++j)
                for (Eigen::Index i = 0; i < p; ++i) dir(i, j) = normal(rng);
            dir /= operator_norm(dir);
            const Matrix perturbed = theta0 + eps * dir;

            ScatterRecord rec;
            rec.epsilon = eps;
            rec.sample = s;
            rec.perturbation_norm = operator_norm(perturbed - theta0);
            try {
                const RiccatiSolution sol = solve_dare(DynamicsParameter::from_joined(perturbed, p), system.costs);
                rec.closed_loop_radius = spectral_radius(plant.closed_loop(sol.gain));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoConvergence) throw;
                rec.closed_loop_radius = kInf;
            }
            out.push_back(rec);
        }
    }
    return out;
}

double sorted_quantile(const std::vector<double>& sorted, double prob) {
    if (sorted.empty()) throw Error(ErrorCode::EmptyInput, "quantile of an empty sample");
    const double pos = prob * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    const double a = sorted[lo];
    const double b = sorted[hi];
    if (frac == 0.0 || a == b) return a;
    return a + frac * (b - a);
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
    if (records.empty()) throw Error(ErrorCode::EmptyInput, "no trial records to summarize");

    using Key = std::tuple<Algorithm, std::size_t, std::size_t, std::uint64_t>;
    std::vector<Key> order;
    std::map<Key, std::vector<const TrialRecord*>> groups;
    for (const auto& r : records) {
        const Key key{r.algo, r.horizon, r.episodes, std::bit_cast<std::uint64_t>(r.sigma)};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(&r);
    }

    std::vector<SummaryRow> rows;
    rows.reserve(order.size());
    for (const Key& key : order) {
        const auto& members = groups.at(key);
        std::vector<double> errors;
        std::size_t stabilized = 0;
        for (const TrialRecord* r : members) {
            errors.push_back(r->error_norm);
            if (r->stabilized) ++stabilized;
        }
        std::sort(errors.begin(), errors.end());

        SummaryRow row;
        row.algo = std::get<0>(key);
        row.horizon = std::get<1>(key);
        row.episodes = std::get<2>(key);
        row.sigma = std::bit_cast<double>(std::get<3>(key));
        row.count = members.size();
        row.median_error = sorted_quantile(errors, 0.5);
        row.q1_error = sorted_quantile(errors, 0.25);
        row.q3_error = sorted_quantile(errors, 0.75);
        row.iqr_error = row.q3_error == row.q1_error ? 0.0 : row.q3_error - row.q1_error;
        row.stabilized_pct = 100.0 * static_cast<double>(stabilized) / static_cast<double>(members.size());
        rows.push_back(row);
    }
    return rows;
}

std::string trials_to_csv(const std::vector<TrialRecord>& records) {
    std::string out(kTrialCsvHeader);
    out += '\n';
    for (const auto& r : records) {
        out += to_string(r.algo);
        out += ',' + csv::format_uint(r.horizon);
        out += ',' + csv::format_uint(r.episodes);
        out += ',' + csv::format_double(r.sigma);
        out += ',' + csv::format_uint(r.rep);
        out += ',' + csv::format_uint(r.seed);
        out += ',' + csv::format_double(r.error_norm);
        out += ',' + csv::format_double(r.closed_loop_radius);
        out += r.stabilized ? ",1" : ",0";
        out += r.overflow ? ",1" : ",0";
        out += ',' + csv::format_uint(r.redraws);
        out += ',';
        out += to_string(r.reason);
        out += '\n';
    }
    return out;
}

std::vector<TrialRecord> trials_from_csv(const std::vector<std::string>& lines) {
    if (lines.empty() || lines.front() != kTrialCsvHeader) {
        throw Error(ErrorCode::IoError, "trial CSV header mismatch");
    }
    std::vector<TrialRecord> out;
    out.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = csv::split(lines[i]);
        if (f.size() != 12) throw Error(ErrorCode::IoError, "trial CSV line " + std::to_string(i + 1) + " has wrong arity");
        TrialRecord r;
        try {
            r.algo = parse_algorithm(f[0]);
        } catch (const Error&) {
            throw Error(ErrorCode::IoError, "trial CSV line " + std::to_string(i + 1) + ": bad algo");
        }
        r.horizon = csv::parse_uint(f[1]);
        r.episodes = csv::parse_uint(f[2]);
        r.sigma = csv::parse_double(f[3]);
        r.rep = csv::parse_uint(f[4]);
        r.seed = csv::parse_uint(f[5]);
        r.error_norm = csv::parse_double(f[6]);
        r.closed_loop_radius = csv::parse_double(f[7]);
        r.stabilized = csv::parse_flag(f[8]);
        r.overflow = csv::parse_flag(f[9]);
        r.redraws = csv::parse_uint(f[10]);
        r.reason = parse_trial_reason(f[11]);
        out.push_back(r);
    }
    return out;
}

std::vector<TrialRecord> read_trials_csv(const std::string& path) {
    return trials_from_csv(csv::read_lines(path));
}

std::string scatter_to_csv(const std::vector<ScatterRecord>& records) {
    std::string out(kScatterCsvHeader);
    out += '\n';
    for (const auto& r : records) {
        out += csv::format_double(r.epsilon);
        out += ',' + csv::format_uint(r.sample);
        out += ',' + csv::format_double(r.perturbation_norm);
        out += ',' + csv::format_double(r.closed_loop_radius);
        out += '\n';
    }
    return out;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    std::string out(kSummaryCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += to_string(r.algo);
        out += ',' + csv::format_uint(r.horizon);
        out += ',' + csv::format_uint(r.episodes);
        out += ',' + csv::format_double(r.sigma);
        out += ',' + csv::format_uint(r.count);
        out += ',' + csv::format_double(r.median_error);
        out += ',' + csv::format_double(r.q1_error);
        out += ',' + csv::format_double(r.q3_error);
        out += ',' + csv::format_double(r.iqr_error);
        out += ',' + csv::format_double(r.stabilized_pct);
        out += '\n';
    }
    return out;
}

}  // namespace randstab
