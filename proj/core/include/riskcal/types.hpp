#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "riskcal/errors.hpp"

namespace riskcal {

/// Sentinel returned by decision rules when no threshold satisfies the
/// constraint ("no acceptable lambda" is a result, not an error).
inline constexpr double kInfeasibleLambda = std::numeric_limits<double>::infinity();

/// Tolerance for per-row monotonicity checks on loss matrices. Violations
/// within the tolerance are clamped by a running minimum; larger ones are
/// rejected.
inline constexpr double kMonotoneTol = 1e-9;

/// Tolerance on the sum-to-one constraint for quantile spacings.
inline constexpr double kSimplexTol = 1e-12;

enum class Method { scp, crc, rcps, hpd };

std::string_view to_string(Method method);
Method method_from_string(std::string_view tag);  // throws UnknownMethod

/// A validated vector of per-item calibration losses together with the known
/// upper bound B on any single loss. Losses live in (-inf, B]; the vector may
/// be empty. Immutable after construction.
class CalibrationLosses {
 public:
  CalibrationLosses(std::vector<double> losses, double upper_bound);

  const std::vector<double>& losses() const noexcept { return losses_; }
  double upper_bound() const noexcept { return upper_bound_; }
  std::size_t size() const noexcept { return losses_.size(); }

 private:
  std::vector<double> losses_;
  double upper_bound_;
};

/// Per-item loss curves evaluated on an ascending threshold grid. Row i,
/// column j holds the loss of item i at grid[j]; every row must be monotone
/// non-increasing along the grid and bounded above by `upper_bound`.
/// Construction validates, clamps sub-tolerance wiggle, and then the matrix
/// is immutable.
class LossMatrix {
 public:
  LossMatrix(std::vector<double> lambda_grid, std::vector<std::vector<double>> rows,
             double upper_bound);

  const std::vector<double>& lambda_grid() const noexcept { return lambda_grid_; }
  const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
  double upper_bound() const noexcept { return upper_bound_; }
  double min_entry() const noexcept { return min_entry_; }

  std::size_t num_items() const noexcept { return rows_.size(); }
  std::size_t num_lambdas() const noexcept { return lambda_grid_.size(); }

  /// Losses of all items at grid column j.
  std::vector<double> column(std::size_t j) const;
  /// Sum of column j, accumulated in row order.
  double column_sum(std::size_t j) const noexcept;

 private:
  std::vector<double> lambda_grid_;
  std::vector<std::vector<double>> rows_;
  double upper_bound_;
  double min_entry_;
};

/// Target risk, confidence level, and Monte Carlo settings for a decision.
struct RiskBudget {
  RiskBudget(double alpha, double beta, std::size_t mc_samples, std::uint64_t master_seed);

  double alpha;
  double beta;
  std::size_t mc_samples;
  std::uint64_t master_seed;
};

/// A point on the probability simplex: n+1 nonnegative spacings between
/// consecutive ordered quantile levels (endpoints 0 and 1 included).
class QuantileSpacings {
 public:
  explicit QuantileSpacings(std::vector<double> u);

  const std::vector<double>& components() const noexcept { return u_; }
  std::size_t size() const noexcept { return u_.size(); }

 private:
  std::vector<double> u_;
};

/// Monte Carlo draws of the loss upper bound L+ with their provenance.
struct LPlusSamples {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::size_t count = 0;
};

/// Result of a threshold-selection rule. `lambda_selected` is the infinity
/// sentinel when no grid value satisfies the method's constraint, in which
/// case `achieved_bound` is infinite as well.
struct DecisionOutcome {
  double lambda_selected = kInfeasibleLambda;
  Method method = Method::crc;
  double achieved_bound = kInfeasibleLambda;

  bool feasible() const noexcept { return std::isfinite(lambda_selected); }
};

}  // namespace riskcal
