#include <cmath>

#include <benchmark/benchmark.h>

#include "rfp/simulate.hpp"
#include "rfp/strategy.hpp"
#include "rfp/worst_case.hpp"

using namespace rfp;

namespace {

const StructuredAmbiguity kSpec{0.02, 0.1, 0.5, 0.02, 0.12};
constexpr double kKappa = 0.4, kG = 0.1, kR = 0.0;

void bm_worst_case_structured(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(worst_case_structured(kSpec, kKappa, kG, kR));
}
BENCHMARK(bm_worst_case_structured);

void bm_grid_minimax_oracle(benchmark::State& state) {
    const int resolution = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            grid_minimax_oracle(kSpec, kKappa, kG, kR, resolution, -1.0, 2.0));
    state.SetComplexityN(resolution);
}
BENCHMARK(bm_grid_minimax_oracle)->Arg(200)->Arg(2000)->Arg(20000)->Complexity();

void bm_simulate_paths(benchmark::State& state) {
    const int n_paths = static_cast<int>(state.range(0));
    const WorstCase wc = worst_case_structured(kSpec, kKappa, kG, kR);
    const double f = drift_coefficient_f(AmbiguityMode::Structured, wc, kKappa, kG, kR);
    const StrategyResult st = optimal_fraction(wc, kKappa, kG, kR);
    CrraPreference pref;
    pref.kappa = kKappa;
    pref.g = PiecewiseConstant(kG);
    pref.f = PiecewiseConstant(f);
    const SimConfig cfg{1.0, 16, n_paths, 1, 1.0, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_paths(cfg, wc.mu_star, std::sqrt(wc.sigma_sq_star),
                                                kR, st.pi_star, pref));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n_paths) * 16);
}
BENCHMARK(bm_simulate_paths)->Arg(1000)->Arg(10000);

void bm_martingale_test(benchmark::State& state) {
    const WorstCase wc = worst_case_structured(kSpec, kKappa, kG, kR);
    const double f = drift_coefficient_f(AmbiguityMode::Structured, wc, kKappa, kG, kR);
    const StrategyResult st = optimal_fraction(wc, kKappa, kG, kR);
    CrraPreference pref;
    pref.kappa = kKappa;
    pref.g = PiecewiseConstant(kG);
    pref.f = PiecewiseConstant(f);
    const SimConfig cfg{1.0, 16, 10000, 1, 1.0, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(martingale_test(cfg, st.pi_star, wc, pref, kR));
}
BENCHMARK(bm_martingale_test);

}  // namespace

BENCHMARK_MAIN();
