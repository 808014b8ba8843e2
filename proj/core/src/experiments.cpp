#include "riskcal/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "riskcal/quadrature.hpp"
#include "riskcal/random.hpp"
#include "riskcal/rules.hpp"

namespace riskcal::experiments {

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::binomial:
      return "binomial";
    case GeneratorKind::heteroskedastic:
      return "heteroskedastic";
  }
  throw UnknownMethod("<invalid generator>");
}

GeneratorKind generator_from_string(std::string_view tag) {
  if (tag == "binomial") return GeneratorKind::binomial;
  if (tag == "heteroskedastic") return GeneratorKind::heteroskedastic;
  throw UnknownMethod(std::string(tag));
}

namespace {

// Draws the latent uniforms for one binomial trial, row-major in (item, k).
std::vector<double> binomial_draws(std::size_t n, std::size_t k, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  std::vector<double> v(n * k);
  for (double& x : v) {
    x = rng.uniform();
  }
  return v;
}

LossMatrix evaluate_binomial(const std::vector<double>& draws, std::size_t n, std::size_t k,
                             std::span<const double> grid) {
  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i].resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      std::size_t hits = 0;
      for (std::size_t c = 0; c < k; ++c) {
        if (draws[i * k + c] > grid[j]) {
          ++hits;
        }
      }
      rows[i][j] = static_cast<double>(hits) / static_cast<double>(k);
    }
  }
  return LossMatrix(std::vector<double>(grid.begin(), grid.end()), std::move(rows), 1.0);
}

// |Y| draws for one heteroskedastic trial: X ~ U[0, 4], Y | X ~ N(0, X^2).
std::vector<double> heteroskedastic_scores(std::size_t n, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  std::vector<double> scores(n);
  for (double& s : scores) {
    const double x = 4.0 * rng.uniform();
    const double y = x * rng.normal();
    s = std::abs(y);
  }
  return scores;
}

LossMatrix evaluate_indicator(std::span<const double> scores, std::span<const double> grid) {
  std::vector<std::vector<double>> rows(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    rows[i].resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      rows[i][j] = scores[i] > grid[j] ? 1.0 : 0.0;
    }
  }
  return LossMatrix(std::vector<double>(grid.begin(), grid.end()), std::move(rows), 1.0);
}

std::vector<double> sorted_unique(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace

LossMatrix binomial_losses(std::size_t n, std::size_t k, std::span<const double> lambda_grid,
                           std::uint64_t seed) {
  if (n == 0 || k == 0) {
    throw DomainError("binomial generator needs n >= 1 and K >= 1");
  }
  return evaluate_binomial(binomial_draws(n, k, seed), n, k, lambda_grid);
}

double binomial_true_risk(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw DomainError("binomial risk is defined for lambda in [0, 1]");
  }
  return 1.0 - lambda;
}

LossMatrix heteroskedastic_losses(std::size_t n, std::span<const double> lambda_grid,
                                  std::uint64_t seed) {
  if (n == 0) {
    throw DomainError("heteroskedastic generator needs n >= 1");
  }
  return evaluate_indicator(heteroskedastic_scores(n, seed), lambda_grid);
}

double heteroskedastic_true_risk(double lambda) {
  if (!(lambda >= 0.0)) {
    throw DomainError("risk is defined for lambda >= 0");
  }
  if (lambda == 0.0) {
    return 1.0;
  }
  // Pr(|Y| > lambda | X = x) = 2 Phi(-lambda / x) = erfc(lambda / (x sqrt2)).
  const auto integrand = [lambda](double x) {
    return x > 0.0 ? std::erfc(lambda / (x * std::numbers::sqrt2)) : 0.0;
  };
  double error = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, 0.0, 4.0, 15, 1e-10, &error);
  return integral / 4.0;
}

std::vector<std::string> binomial_method_names() { return {"crc", "rcps", "hpd"}; }

std::vector<std::string> heteroskedastic_method_names() { return {"scp_crc", "rcps", "hpd"}; }

TrialRecord run_binomial_trial(std::size_t trial_index, std::size_t n, std::size_t k,
                               const RiskBudget& budget, std::uint64_t trial_seed) {
  const std::uint64_t data_seed = derive_trial_seed(trial_seed, 0);
  const std::uint64_t hpd_seed = derive_trial_seed(trial_seed, 1);

  const std::vector<double> draws = binomial_draws(n, k, data_seed);
  // Candidate grid: every loss breakpoint plus lambda_max = 1, where the
  // loss is identically zero. The loss curves are piecewise constant, so
  // restricting the infimum to this grid is exact.
  std::vector<double> grid = sorted_unique(draws);
  if (grid.empty() || grid.back() != 1.0) {
    grid.push_back(1.0);
  }
  const LossMatrix matrix = evaluate_binomial(draws, n, k, grid);
  const RiskBudget hpd_budget(budget.alpha, budget.beta, budget.mc_samples, hpd_seed);

  TrialRecord record;
  record.trial_index = trial_index;
  const DecisionOutcome outcomes[] = {
      rules::crc_lambda(matrix, budget.alpha),
      rules::rcps_lambda(matrix, budget.alpha, budget.beta),
      rules::hpd_lambda(matrix, hpd_budget),
  };
  for (const DecisionOutcome& outcome : outcomes) {
    MethodTrialResult result;
    result.outcome = outcome;
    if (outcome.feasible()) {
      result.true_risk = binomial_true_risk(outcome.lambda_selected);
      result.length = outcome.lambda_selected;
    } else {
      result.true_risk = 0.0;  // losses vanish beyond lambda_max
      result.length = kInfeasibleLambda;
    }
    result.exceeded = outcome.feasible() && result.true_risk > budget.alpha;
    record.results.push_back(result);
  }
  return record;
}

TrialRecord run_heteroskedastic_trial(std::size_t trial_index, std::size_t n,
                                      const RiskBudget& budget, std::uint64_t trial_seed) {
  const std::uint64_t data_seed = derive_trial_seed(trial_seed, 0);
  const std::uint64_t hpd_seed = derive_trial_seed(trial_seed, 1);

  const std::vector<double> scores = heteroskedastic_scores(n, data_seed);
  const std::vector<double> grid = sorted_unique(scores);
  const LossMatrix matrix = evaluate_indicator(scores, grid);
  const RiskBudget hpd_budget(budget.alpha, budget.beta, budget.mc_samples, hpd_seed);

  const DecisionOutcome scp = rules::scp_lambda(scores, budget.alpha);
  const DecisionOutcome crc = rules::crc_lambda(matrix, budget.alpha);
  if (scp.lambda_selected != crc.lambda_selected &&
      !(std::isinf(scp.lambda_selected) && std::isinf(crc.lambda_selected))) {
    throw Error("scp and crc disagree on a miscoverage trial");
  }

  TrialRecord record;
  record.trial_index = trial_index;
  const DecisionOutcome outcomes[] = {
      crc,
      rules::rcps_lambda(matrix, budget.alpha, budget.beta),
      rules::hpd_lambda(matrix, hpd_budget),
  };
  for (const DecisionOutcome& outcome : outcomes) {
    MethodTrialResult result;
    result.outcome = outcome;
    if (outcome.feasible()) {
      result.true_risk = heteroskedastic_true_risk(outcome.lambda_selected);
      result.length = 2.0 * outcome.lambda_selected;  // interval [-lambda, lambda]
    } else {
      result.true_risk = 0.0;
      result.length = kInfeasibleLambda;
    }
    result.exceeded = outcome.feasible() && result.true_risk > budget.alpha;
    record.results.push_back(result);
  }
  return record;
}

namespace {

MethodSummary summarize_method(const std::string& name, std::size_t method_index,
                               const std::vector<TrialRecord>& trials) {
  MethodSummary summary;
  summary.method = name;

  std::vector<double> risks;
  std::vector<double> lengths;
  risks.reserve(trials.size());
  lengths.reserve(trials.size());
  for (const TrialRecord& trial : trials) {
    const MethodTrialResult& r = trial.results[method_index];
    if (r.exceeded) {
      ++summary.exceed_count;
    }
    if (!r.outcome.feasible()) {
      ++summary.sentinel_count;
      continue;
    }
    risks.push_back(r.true_risk);
    lengths.push_back(r.length);
  }

  const auto m = static_cast<double>(trials.size());
  summary.relative_frequency = static_cast<double>(summary.exceed_count) / m;
  summary.ci = stats::clopper_pearson(summary.exceed_count, trials.size(), 0.95);

  if (!risks.empty()) {
    const auto count = static_cast<double>(risks.size());
    summary.mean_true_risk = stats::compensated_sum(risks) / count;
    summary.mean_length = stats::compensated_sum(lengths) / count;
    if (risks.size() > 1) {
      std::vector<double> centered(risks.size());
      for (std::size_t i = 0; i < risks.size(); ++i) {
        const double d = risks[i] - summary.mean_true_risk;
        centered[i] = d * d;
      }
      const double variance = stats::compensated_sum(centered) / (count - 1.0);
      summary.se_true_risk = std::sqrt(variance / count);
    }
  }
  return summary;
}

}  // namespace

ExperimentResult run_experiment_detailed(const ExperimentConfig& config) {
  if (config.num_trials == 0) {
    throw DomainError("experiment needs at least one trial");
  }
  if (config.calibration_n == 0) {
    throw DomainError("experiment needs at least one calibration item");
  }
  if (config.generator == GeneratorKind::binomial && config.binomial_k == 0) {
    throw DomainError("binomial experiment needs K >= 1");
  }

  ExperimentResult result;
  result.method_names = config.generator == GeneratorKind::binomial
                            ? binomial_method_names()
                            : heteroskedastic_method_names();
  result.trials.resize(config.num_trials);

  std::vector<std::uint64_t> trial_seeds(config.num_trials);
  for (std::size_t t = 0; t < config.num_trials; ++t) {
    trial_seeds[t] = derive_trial_seed(config.budget.master_seed, t);
  }

  const auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      result.trials[t] =
          config.generator == GeneratorKind::binomial
              ? run_binomial_trial(t, config.calibration_n, config.binomial_k, config.budget,
                                   trial_seeds[t])
              : run_heteroskedastic_trial(t, config.calibration_n, config.budget, trial_seeds[t]);
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(config.threads, 1, config.num_trials);
  if (threads == 1) {
    run_range(0, config.num_trials);
  } else {
    // Trials write to disjoint slots; any partition yields identical records.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      const std::size_t begin = w * config.num_trials / threads;
      const std::size_t end = (w + 1) * config.num_trials / threads;
      pool.emplace_back([&, w, begin, end] {
        try {
          run_range(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& worker : pool) {
      worker.join();
    }
    for (const auto& error : errors) {
      if (error) {
        std::rethrow_exception(error);
      }
    }
  }

  ExperimentReport& report = result.report;
  report.experiment = std::string(to_string(config.generator));
  report.num_trials = config.num_trials;
  report.calibration_n = config.calibration_n;
  report.binomial_k = config.generator == GeneratorKind::binomial ? config.binomial_k : 0;
  report.alpha = config.budget.alpha;
  report.beta = config.budget.beta;
  report.mc_samples = config.budget.mc_samples;
  report.master_seed = config.budget.master_seed;
  for (std::size_t m = 0; m < result.method_names.size(); ++m) {
    report.methods.push_back(summarize_method(result.method_names[m], m, result.trials));
  }
  return result;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  return run_experiment_detailed(config).report;
}

Histogram make_histogram(std::span<const double> values, std::size_t bins) {
  if (values.empty()) {
    throw EmptyInput("histogram");
  }
  if (bins == 0) {
    throw DomainError("histogram needs at least one bin");
  }
  double lo = values[0];
  double hi = values[0];
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw DomainError("histogram values must be finite");
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }

  Histogram out;
  out.edges.resize(bins + 1);
  out.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) {
    out.edges[i] = lo + static_cast<double>(i) * width;
  }
  out.edges[bins] = hi;

  for (double v : values) {
    auto idx = static_cast<std::size_t>(
        std::clamp((v - lo) / (hi - lo) * static_cast<double>(bins), 0.0,
                   static_cast<double>(bins - 1)));
    ++out.counts[idx];
  }
  return out;
}

Histogram l_plus_histogram(const CalibrationLosses& cal, std::size_t mc_samples, std::size_t bins,
                           std::uint64_t seed) {
  const LPlusSamples samples = quadrature::sample_l_plus(cal, mc_samples, seed);
  return make_histogram(samples.values, bins);
}

}  // namespace riskcal::experiments
