// randstab: run stabilization campaigns, scatter studies and Riccati checks.
//
//   randstab run --algo both --T 200,800,3200 --k 2,3,4,5 --sigma 1 --reps 100 --seed 7 --out trials.csv
//   randstab scatter --samples 1000 --radii 0,0.01,0.1 --seed 7 --out scatter.csv
//   randstab dare --system preset
//   randstab summarize --in trials.csv --out summary.csv

#include "randstab/csv.hpp"
#include "randstab/errors.hpp"
#include "randstab/harness.hpp"
#include "randstab/riccati.hpp"
#include "randstab/system_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

void print_matrix(const char* name, const randstab::Matrix& m) {
    std::printf("%s =\n", name);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) std::printf(j == 0 ? "%10.6f" : " %10.6f", m(i, j));
        std::printf("\n");
    }
}

int cmd_dare(const std::string& source) {
    const auto system = randstab::load_system(source);
    const auto sol = randstab::solve_dare(system.plant, system.costs);
    print_matrix("K", sol.k);
    print_matrix("L", sol.gain);
    std::printf("spectral_radius = %.6f\n", randstab::spectral_radius(system.plant.closed_loop(sol.gain)));
    std::printf("iterations = %zu\n", sol.iterations);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Randomized data-driven stabilization of unknown linear systems"};
    app.require_subcommand(1);

    randstab::ExperimentConfig run_cfg;
    std::string algo = "sf";
    std::string run_out;
    double cap_log10 = randstab::default_overflow_cap().log10();
    auto* run = app.add_subcommand("run", "Monte Carlo campaign over (algo, T, k, sigma) cells");
    run->add_option("--algo", algo, "sf, sp or both")->check(CLI::IsMember({"sf", "sp", "both"}));
    run->add_option("--T", run_cfg.horizons, "Comma-separated horizons")->delimiter(',');
    run->add_option("--k", run_cfg.episode_counts, "Comma-separated episode counts")->delimiter(',');
    run->add_option("--sigma", run_cfg.sigmas, "Comma-separated randomization scales")->delimiter(',');
    run->add_option("--reps", run_cfg.replications, "Replications per cell");
    run->add_option("--seed", run_cfg.master_seed, "Master seed");
    run->add_option("--system", run_cfg.system_source, "preset or path to a system JSON file");
    run->add_option("--out", run_out, "Output CSV path")->required();
    run->add_option("--threads", run_cfg.threads, "Worker threads (0 = all cores)");
    run->add_option("--max-redraws", run_cfg.max_redraws, "SP redraw budget per episode");
    run->add_option("--overflow-cap-log10", cap_log10, "log10 of the state-norm explosion threshold");

    std::size_t samples = 1000;
    std::vector<double> radii{0.0, 0.01, 0.05, 0.1, 0.2, 0.5, 1.0};
    std::uint64_t scatter_seed = 0;
    std::string scatter_out;
    std::string scatter_system = "preset";
    auto* scatter = app.add_subcommand("scatter", "Closed-loop radius under perturbed parameter estimates");
    scatter->add_option("--samples", samples, "Samples per radius");
    scatter->add_option("--radii", radii, "Comma-separated perturbation norms")->delimiter(',');
    scatter->add_option("--seed", scatter_seed, "Seed");
    scatter->add_option("--system", scatter_system, "preset or path to a system JSON file");
    scatter->add_option("--out", scatter_out, "Output CSV path")->required();

    std::string dare_system = "preset";
    auto* dare = app.add_subcommand("dare", "Solve the Riccati equation for a system and print K, L, rho");
    dare->add_option("--system", dare_system, "preset or path to a system JSON file");

    std::string summary_in;
    std::string summary_out;
    auto* summarize = app.add_subcommand("summarize", "Median/IQR error and stabilized percentage per cell");
    summarize->add_option("--in", summary_in, "Trial CSV")->required();
    summarize->add_option("--out", summary_out, "Summary CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) {
            if (algo == "both") {
                run_cfg.algos = {randstab::Algorithm::StochasticFeedback, randstab::Algorithm::StochasticParameter};
            } else {
                run_cfg.algos = {randstab::parse_algorithm(algo)};
            }
            run_cfg.overflow_cap = randstab::MagnitudeCap::pow10(cap_log10);
            run_cfg.output_path = run_out;
            const auto records = randstab::run_experiment(run_cfg);
            std::size_t stabilized = 0;
            for (const auto& r : records) stabilized += r.stabilized ? 1 : 0;
            std::cerr << "wrote " << records.size() << " trials (" << stabilized << " stabilized) to " << run_out
                      << "\n";
        } else if (*scatter) {
            const auto system = randstab::load_system(scatter_system);
            const auto records = randstab::lemma1_scatter(system, samples, radii, scatter_seed);
            randstab::csv::write_file(scatter_out, randstab::scatter_to_csv(records));
            std::cerr << "wrote " << records.size() << " scatter samples to " << scatter_out << "\n";
        } else if (*dare) {
            return cmd_dare(dare_system);
        } else if (*summarize) {
            const auto rows = randstab::summarize(randstab::read_trials_csv(summary_in));
            randstab::csv::write_file(summary_out, randstab::summary_to_csv(rows));
        }
    } catch (const randstab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == randstab::ErrorCode::IoError ? kExitIo : kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
