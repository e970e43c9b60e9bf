#include <benchmark/benchmark.h>

#include <vector>

#include "bladeprog/fatigue.hpp"
#include "bladeprog/gproc.hpp"
#include "bladeprog/specfun.hpp"
#include "bladeprog/windload.hpp"

namespace {

using namespace bladeprog;

void BM_LnGamma(benchmark::State& state) {
    double v = 0.31;
    for (auto _ : state) {
        v += 1e-9;
        benchmark::DoNotOptimize(specfun::ln_gamma(v));
    }
}
BENCHMARK(BM_LnGamma);

void BM_RegGammaQ(benchmark::State& state) {
    const double v = static_cast<double>(state.range(0));
    double x = 0.8 * v;
    for (auto _ : state) {
        x += 1e-9;
        benchmark::DoNotOptimize(specfun::reg_gamma_q(v, x));
    }
}
BENCHMARK(BM_RegGammaQ)->Arg(2)->Arg(40)->Arg(400);

void BM_GammaVariate(benchmark::State& state) {
    specfun::SplitMix64 rng(specfun::RandomStream{1, 0});
    const double shape = state.range(0) / 10.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::gamma_variate(shape, 20.0, rng));
    }
}
BENCHMARK(BM_GammaVariate)->Arg(3)->Arg(20);

void BM_CyclesToFailure(benchmark::State& state) {
    const fatigue::SNCurve curve;
    double sigma = 700.0;
    for (auto _ : state) {
        sigma = (sigma > 900.0) ? 700.0 : sigma + 1e-6;
        benchmark::DoNotOptimize(fatigue::cycles_to_failure(sigma, curve));
    }
}
BENCHMARK(BM_CyclesToFailure);

void BM_DamageTrajectory(benchmark::State& state) {
    const fatigue::SNCurve curve;
    const auto params = fatigue::DamageParams::from_exponent_b(0.1);
    wind::LoadSpectrum year;
    year.duration_s = wind::kSecondsPerYear;
    for (int i = 0; i < 50; ++i) {
        year.blocks.push_back({200.0 + 10.0 * i, 1000.0});
    }
    const std::vector<wind::LoadSpectrum> schedule(25, year);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fatigue::damage_trajectory(schedule, curve, params, 4));
    }
}
BENCHMARK(BM_DamageTrajectory);

void BM_SimulatePaths(benchmark::State& state) {
    fatigue::DamageTrajectory trajectory;
    for (int i = 0; i <= 100; ++i) {
        trajectory.grid.push_back({0.25 * i, 0.01 * i});
    }
    const auto model = gproc::calibrate_shape(trajectory, 400.0, 25.0);
    std::vector<double> grid;
    for (int i = 1; i <= 100; ++i) grid.push_back(0.25 * i);
    const std::vector<double> thresholds{0.7, 0.8, 0.9, 0.95};
    for (auto _ : state) {
        benchmark::DoNotOptimize(gproc::simulate_paths(
            model, grid, thresholds, static_cast<std::size_t>(state.range(0)), 7, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePaths)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
