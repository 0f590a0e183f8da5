#include <benchmark/benchmark.h>

#include "cip/experiments.hpp"
#include "cip/feasibility.hpp"
#include "cip/negotiation.hpp"
#include "cip/solver.hpp"

namespace {

cip::Scenario sized_scenario(int n) {
  cip::Scenario scenario = cip::default_scenario(n, 1);
  scenario.t_max = 70.0 * n + 200.0;  // keep the instance feasible as n grows
  return scenario;
}

void BM_SolveOptimal(benchmark::State& state) {
  const cip::Scenario scenario = sized_scenario(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto result = cip::solve_optimal(scenario);
    benchmark::DoNotOptimize(result.objective);
  }
}
BENCHMARK(BM_SolveOptimal)->RangeMultiplier(2)->Range(2, 64);

void BM_BruteForceOracle(benchmark::State& state) {
  const cip::Scenario scenario = sized_scenario(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto result = cip::brute_force_oracle(scenario, 1.0);
    benchmark::DoNotOptimize(result.objective);
  }
}
BENCHMARK(BM_BruteForceOracle)->Arg(2)->Arg(3);

void BM_RunNegotiation(benchmark::State& state) {
  const cip::Scenario scenario = sized_scenario(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto trace = cip::run_negotiation(scenario);
    benchmark::DoNotOptimize(trace.solve_rounds);
  }
}
BENCHMARK(BM_RunNegotiation)->Arg(4)->Arg(8)->Arg(16);

void BM_VerifyTheorem1(benchmark::State& state) {
  for (auto _ : state) {
    const double fraction = cip::verify_theorem1(static_cast<int>(state.range(0)), 7);
    benchmark::DoNotOptimize(fraction);
  }
}
BENCHMARK(BM_VerifyTheorem1)->Arg(20);

void BM_ExperimentFig1(benchmark::State& state) {
  cip::ExperimentConfig config;
  for (auto _ : state) {
    const cip::ResultTable table = cip::experiment_fig1(config);
    benchmark::DoNotOptimize(table.rows.size());
  }
}
BENCHMARK(BM_ExperimentFig1);

}  // namespace

BENCHMARK_MAIN();
