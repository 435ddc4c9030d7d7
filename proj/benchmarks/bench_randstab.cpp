#include "randstab/algorithms.hpp"
#include "randstab/estimation.hpp"
#include "randstab/harness.hpp"
#include "randstab/riccati.hpp"
#include "randstab/system.hpp"

#include <benchmark/benchmark.h>

using namespace randstab;

static void BM_SolveDare(benchmark::State& state) {
    const auto [plant, costs] = preset_benchmark();
    for (auto _ : state) benchmark::DoNotOptimize(solve_dare(plant, costs));
}
BENCHMARK(BM_SolveDare);

static void BM_SpectralRadius(benchmark::State& state) {
    const auto [plant, costs] = preset_benchmark();
    const Matrix cl = plant.closed_loop(solve_dare(plant, costs).gain);
    for (auto _ : state) benchmark::DoNotOptimize(spectral_radius(cl));
}
BENCHMARK(BM_SpectralRadius);

// Arg: gain scale. 0.3 keeps the loop stable; 2 makes it explode and forces wide precision.
static void BM_SimulateEpisode(benchmark::State& state) {
    const auto [plant, costs] = preset_benchmark();
    Rng draw(1);
    const Matrix gain = draw_feedback(draw, static_cast<double>(state.range(0)) / 10.0, 3, 3);
    const NoiseModel noise = NoiseModel::standard(3);
    for (auto _ : state) {
        Rng rng(2);
        benchmark::DoNotOptimize(simulate_episode(plant, gain, Vector::Zero(3), 800, noise, rng, default_overflow_cap()));
    }
    state.SetItemsProcessed(state.iterations() * 800);
}
BENCHMARK(BM_SimulateEpisode)->Arg(3)->Arg(20);

static void BM_ClosedLoopLs(benchmark::State& state) {
    const auto [plant, costs] = preset_benchmark();
    Rng draw(1);
    const Matrix gain = draw_feedback(draw, static_cast<double>(state.range(0)) / 10.0, 3, 3);
    Rng rng(2);
    const TrajectoryLog log =
        simulate_episode(plant, gain, Vector::Zero(3), 800, NoiseModel::standard(3), rng, default_overflow_cap());
    for (auto _ : state) benchmark::DoNotOptimize(closed_loop_ls(log));
}
BENCHMARK(BM_ClosedLoopLs)->Arg(3)->Arg(20);

static void BM_Trial(benchmark::State& state) {
    const SystemDescription sys = load_system("preset");
    const auto algo = state.range(0) == 0 ? Algorithm::StochasticFeedback : Algorithm::StochasticParameter;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trial(sys, algo, static_cast<std::size_t>(state.range(1)), 4, 1.0, 0, ++seed, 50,
                                           default_overflow_cap()));
    }
}
BENCHMARK(BM_Trial)->Args({0, 800})->Args({0, 3200})->Args({1, 800})->Args({1, 3200})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
