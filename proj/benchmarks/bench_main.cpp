#include <benchmark/benchmark.h>

#include <vector>

#include "riskcal/experiments.hpp"
#include "riskcal/quadrature.hpp"
#include "riskcal/random.hpp"
#include "riskcal/rules.hpp"

namespace {

using namespace riskcal;

void BM_SampleSpacings(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Xoshiro256pp rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quadrature::sample_spacings(n, rng));
  }
}
BENCHMARK(BM_SampleSpacings)->Arg(10)->Arg(200);

void BM_SampleLPlus(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Xoshiro256pp rng(2);
  std::vector<double> losses(n);
  for (double& v : losses) {
    v = rng.uniform();
  }
  const CalibrationLosses cal(losses, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quadrature::sample_l_plus(cal, 1000, 7));
  }
}
BENCHMARK(BM_SampleLPlus)->Arg(10)->Arg(200);

void BM_CriticalValue(benchmark::State& state) {
  Xoshiro256pp rng(3);
  std::vector<double> losses(200);
  for (double& v : losses) {
    v = rng.uniform();
  }
  const CalibrationLosses cal(losses, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quadrature::critical_value(cal, 0.95, 1000, 11));
  }
}
BENCHMARK(BM_CriticalValue);

void BM_HpdLambda(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Xoshiro256pp rng(4);
  std::vector<double> scores(n);
  for (double& s : scores) {
    s = rng.uniform();
  }
  std::vector<double> grid = scores;
  std::sort(grid.begin(), grid.end());
  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i].resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      rows[i][j] = scores[i] > grid[j] ? 1.0 : 0.0;
    }
  }
  const LossMatrix matrix(grid, rows, 1.0);
  const RiskBudget budget(0.1, 0.95, 1000, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rules::hpd_lambda(matrix, budget));
  }
}
BENCHMARK(BM_HpdLambda)->Arg(50)->Arg(200);

void BM_BinomialTrial(benchmark::State& state) {
  const RiskBudget budget(0.4, 0.95, 1000, 6);
  std::size_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        experiments::run_binomial_trial(trial, 10, 4, budget, derive_trial_seed(6, trial)));
    ++trial;
  }
}
BENCHMARK(BM_BinomialTrial);

void BM_HeteroskedasticTrial(benchmark::State& state) {
  const RiskBudget budget(0.1, 0.95, 1000, 7);
  std::size_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        experiments::run_heteroskedastic_trial(trial, 200, budget, derive_trial_seed(7, trial)));
    ++trial;
  }
}
BENCHMARK(BM_HeteroskedasticTrial);

}  // namespace

BENCHMARK_MAIN();
