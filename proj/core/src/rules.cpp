#include "riskcal/rules.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "riskcal/quadrature.hpp"
#include "riskcal/random.hpp"
#include "riskcal/stats.hpp"

namespace riskcal::rules {
namespace {

// First grid index satisfying `feasible`, assuming feasibility is monotone
// (false...false true...true) along the grid. Returns num_lambdas() when no
// column is feasible.
template <typename Pred>
std::size_t first_feasible_column(std::size_t num_columns, Pred feasible) {
  std::size_t lo = 0;
  std::size_t hi = num_columns;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

DecisionOutcome infeasible(Method method) {
  return DecisionOutcome{kInfeasibleLambda, method, kInfeasibleLambda};
}

}  // namespace

DecisionOutcome scp_lambda(std::span<const double> scores, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("scp requires alpha in (0, 1)");
  }
  const std::size_t n = scores.size();
  const double raw_index = static_cast<double>(n + 1) * (1.0 - alpha);
  const std::size_t k = std::max<std::size_t>(stats::ceil_index(raw_index), 1);
  if (k > n) {
    return infeasible(Method::scp);
  }
  const std::vector<double> sorted = stats::sorted_copy(scores);
  return DecisionOutcome{sorted[k - 1], Method::scp,
                         1.0 - static_cast<double>(k) / static_cast<double>(n + 1)};
}

DecisionOutcome crc_lambda(const LossMatrix& matrix, double alpha) {
  if (!(alpha > 0.0)) {
    throw DomainError("crc requires alpha > 0");
  }
  const double n_plus_one = static_cast<double>(matrix.num_items() + 1);
  const auto bound_at = [&](std::size_t j) {
    return (matrix.column_sum(j) + matrix.upper_bound()) / n_plus_one;
  };
  // Rows are non-increasing, so the bound is non-increasing along the grid.
  const std::size_t j = first_feasible_column(matrix.num_lambdas(),
                                              [&](std::size_t col) { return bound_at(col) <= alpha; });
  if (j == matrix.num_lambdas()) {
    return infeasible(Method::crc);
  }
  return DecisionOutcome{matrix.lambda_grid()[j], Method::crc, bound_at(j)};
}

double hoeffding_slack(double upper_bound, double beta, std::size_t n) {
  if (n == 0) {
    throw ZeroCalibrationItems();
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("rcps requires beta in (0, 1)");
  }
  return upper_bound * std::sqrt(std::log(1.0 / (1.0 - beta)) / (2.0 * static_cast<double>(n)));
}

DecisionOutcome rcps_lambda(const LossMatrix& matrix, double alpha, double beta) {
  if (!(alpha > 0.0)) {
    throw DomainError("rcps requires alpha > 0");
  }
  if (matrix.num_items() == 0) {
    throw ZeroCalibrationItems();
  }
  if (matrix.min_entry() < 0.0) {
    throw DomainError("rcps requires losses in [0, B]");
  }
  const double slack = hoeffding_slack(matrix.upper_bound(), beta, matrix.num_items());
  const double n = static_cast<double>(matrix.num_items());
  const auto bound_at = [&](std::size_t j) { return matrix.column_sum(j) / n + slack; };
  const std::size_t j = first_feasible_column(matrix.num_lambdas(),
                                              [&](std::size_t col) { return bound_at(col) <= alpha; });
  if (j == matrix.num_lambdas()) {
    return infeasible(Method::rcps);
  }
  return DecisionOutcome{matrix.lambda_grid()[j], Method::rcps, bound_at(j)};
}

DecisionOutcome hpd_lambda(const LossMatrix& matrix, const RiskBudget& budget) {
  const std::size_t n = matrix.num_items();
  const std::size_t m = budget.mc_samples;
  const std::size_t dim = n + 1;

  // Common random numbers: one set of spacing draws shared by every grid
  // column. Sorted columns are pointwise non-increasing along the grid, so
  // each draw's weighted sum is non-increasing as well and the feasibility
  // predicate is monotone.
  Xoshiro256pp rng(budget.master_seed);
  std::vector<double> draws(m * dim);
  std::vector<double> buffer(dim);
  for (std::size_t s = 0; s < m; ++s) {
    double total = 0.0;
    for (double& v : buffer) {
      v = rng.exponential();
      total += v;
    }
    if (total <= 0.0) {
      std::fill(buffer.begin(), buffer.end(), 1.0 / static_cast<double>(dim));
      total = 1.0;
      std::copy(buffer.begin(), buffer.end(), draws.begin() + static_cast<std::ptrdiff_t>(s * dim));
      continue;
    }
    for (std::size_t i = 0; i < dim; ++i) {
      draws[s * dim + i] = buffer[i] / total;
    }
  }

  const std::size_t required_hits = std::clamp<std::size_t>(
      stats::ceil_index(budget.beta * static_cast<double>(m)), 1, m);

  std::vector<double> sorted_column(dim);
  const auto column_samples = [&](std::size_t j, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      sorted_column[i] = matrix.rows()[i][j];
    }
    std::sort(sorted_column.begin(), sorted_column.begin() + static_cast<std::ptrdiff_t>(n));
    sorted_column[n] = matrix.upper_bound();
    out.resize(m);
    for (std::size_t s = 0; s < m; ++s) {
      double sum = 0.0;
      const double* u = draws.data() + s * dim;
      for (std::size_t i = 0; i < dim; ++i) {
        sum += u[i] * sorted_column[i];
      }
      out[s] = sum;
    }
  };

  std::vector<double> samples;
  const auto feasible = [&](std::size_t j) {
    column_samples(j, samples);
    std::size_t hits = 0;
    for (double v : samples) {
      if (v <= budget.alpha) {
        ++hits;
      }
    }
    return hits >= required_hits;
  };

  const std::size_t j = first_feasible_column(matrix.num_lambdas(), feasible);
  if (j == matrix.num_lambdas()) {
    return infeasible(Method::hpd);
  }
  column_samples(j, samples);
  const double critical = stats::empirical_quantile(samples, budget.beta);
  return DecisionOutcome{matrix.lambda_grid()[j], Method::hpd, critical};
}

namespace {

// Recover split-conformal scores from an indicator-loss matrix: each item's
// score is the first grid value where its loss reaches zero. Items whose loss
// never reaches zero score beyond every candidate threshold.
std::vector<double> indicator_scores(const LossMatrix& matrix) {
  std::vector<double> scores;
  scores.reserve(matrix.num_items());
  for (std::size_t i = 0; i < matrix.num_items(); ++i) {
    const auto& row = matrix.rows()[i];
    std::size_t first_zero = matrix.num_lambdas();
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] != 0.0 && row[j] != 1.0) {
        throw NotIndicatorMatrix(i, j);
      }
      if (row[j] == 0.0 && first_zero == matrix.num_lambdas()) {
        first_zero = j;
      }
    }
    scores.push_back(first_zero == matrix.num_lambdas()
                         ? std::numeric_limits<double>::infinity()
                         : matrix.lambda_grid()[first_zero]);
  }
  return scores;
}

}  // namespace

DecisionOutcome select(const LossMatrix& matrix, const RiskBudget& budget, Method method) {
  switch (method) {
    case Method::scp: {
      if (!(budget.alpha < 1.0)) {
        throw DomainError("scp requires alpha in (0, 1)");
      }
      const std::vector<double> scores = indicator_scores(matrix);
      return scp_lambda(scores, budget.alpha);
    }
    case Method::crc:
      return crc_lambda(matrix, budget.alpha);
    case Method::rcps:
      return rcps_lambda(matrix, budget.alpha, budget.beta);
    case Method::hpd:
      return hpd_lambda(matrix, budget);
  }
  throw UnknownMethod("<invalid enum value>");
}

}  // namespace riskcal::rules
