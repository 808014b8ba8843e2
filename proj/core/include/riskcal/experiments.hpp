#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "riskcal/stats.hpp"
#include "riskcal/types.hpp"

// Synthetic experiment harness: data generators with analytically known true
// risk, the M-trial runner, and report aggregation.

namespace riskcal::experiments {

enum class GeneratorKind { binomial, heteroskedastic };

std::string_view to_string(GeneratorKind kind);
GeneratorKind generator_from_string(std::string_view tag);

struct ExperimentConfig {
  GeneratorKind generator = GeneratorKind::binomial;
  std::size_t num_trials = 10000;    // M
  std::size_t calibration_n = 10;    // n
  std::size_t binomial_k = 4;        // K (binomial generator only)
  RiskBudget budget{0.4, 0.95, 1000, 0};
  std::size_t threads = 1;
};

/// Per-method result of one trial. `exceeded` is computed from the
/// generator's analytic risk oracle, never from held-out sampling.
struct MethodTrialResult {
  DecisionOutcome outcome;
  double true_risk = 0.0;
  bool exceeded = false;
  double length = 0.0;  // interval length 2*lambda (heteroskedastic) or lambda itself (binomial)
};

struct TrialRecord {
  std::size_t trial_index = 0;
  std::vector<MethodTrialResult> results;  // aligned with the runner's method names
};

struct MethodSummary {
  std::string method;
  std::size_t exceed_count = 0;
  double relative_frequency = 0.0;  // exceed_count / M, exact
  stats::Interval ci;               // 95% Clopper-Pearson interval for the frequency
  double mean_true_risk = 0.0;
  double se_true_risk = 0.0;
  double mean_length = 0.0;
  std::size_t sentinel_count = 0;  // trials where no threshold was feasible
};

struct ExperimentReport {
  std::string experiment;
  std::size_t num_trials = 0;
  std::size_t calibration_n = 0;
  std::size_t binomial_k = 0;  // 0 when not applicable
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t mc_samples = 0;
  std::uint64_t master_seed = 0;
  std::vector<MethodSummary> methods;
};

struct ExperimentResult {
  ExperimentReport report;
  std::vector<std::string> method_names;
  std::vector<TrialRecord> trials;
};

/// Scaled binomial losses: item i at grid value lambda has loss
/// (1/K) * sum_k 1{V_ik > lambda} with V_ik ~ Uniform(0, 1). All grid columns
/// are evaluated from one set of draws, so rows are exactly monotone. B = 1.
LossMatrix binomial_losses(std::size_t n, std::size_t k, std::span<const double> lambda_grid,
                           std::uint64_t seed);

/// True risk of the scaled binomial loss at lambda in [0, 1]: 1 - lambda.
double binomial_true_risk(double lambda);

/// Miscoverage losses for the heteroskedastic setup X ~ U[0, 4],
/// Y | X ~ N(0, X^2), intervals [-lambda, lambda]: row i, column j is
/// 1{|Y_i| > lambda_j}. B = 1.
LossMatrix heteroskedastic_losses(std::size_t n, std::span<const double> lambda_grid,
                                  std::uint64_t seed);

/// True miscoverage risk Pr(|Y| > lambda) = (1/4) * int_0^4 2 Phi(-lambda/x) dx,
/// evaluated by adaptive quadrature to absolute accuracy 1e-8. Monotone
/// decreasing, equal to 1 at lambda = 0.
double heteroskedastic_true_risk(double lambda);

/// One binomial trial: draw data, build the breakpoint grid (all V values
/// plus lambda_max = 1), run CRC, RCPS, and HPD, score against the analytic
/// risk. Result order matches binomial_method_names().
TrialRecord run_binomial_trial(std::size_t trial_index, std::size_t n, std::size_t k,
                               const RiskBudget& budget, std::uint64_t trial_seed);

/// One heteroskedastic trial: methods SCP/CRC (asserted equal per trial and
/// reported once), RCPS, and HPD on the grid of observed |Y| breakpoints.
/// Result order matches heteroskedastic_method_names().
TrialRecord run_heteroskedastic_trial(std::size_t trial_index, std::size_t n,
                                      const RiskBudget& budget, std::uint64_t trial_seed);

std::vector<std::string> binomial_method_names();
std::vector<std::string> heteroskedastic_method_names();

/// Run M independent trials with per-trial seeds derived from the master
/// seed, optionally across threads. The aggregated report is byte-identical
/// for any thread count.
ExperimentResult run_experiment_detailed(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config);

struct Histogram {
  std::vector<double> edges;        // bins + 1 ascending edges
  std::vector<std::size_t> counts;  // counts sum to the number of values
};

/// Equal-width histogram over [min, max] of the values (widened by 0.5 on
/// each side when degenerate).
Histogram make_histogram(std::span<const double> values, std::size_t bins);

/// Histogram of mc_samples draws of L+.
Histogram l_plus_histogram(const CalibrationLosses& cal, std::size_t mc_samples, std::size_t bins,
                           std::uint64_t seed);

}  // namespace riskcal::experiments
