#pragma once

#include <cstddef>
#include <span>

#include "riskcal/types.hpp"

// Threshold-selection decision rules. Each rule returns the smallest
// acceptable threshold, or the infinity sentinel when no candidate
// satisfies its constraint; rules never throw for infeasibility.

namespace riskcal::rules {

/// Split conformal prediction: the ceil((n+1)(1-alpha))-th order statistic of
/// the scores when that index is at most n, the sentinel otherwise. The index
/// is computed with a rounding-guarded ceiling so representable boundaries
/// (e.g. alpha = 0.1, n = 9) resolve exactly. alpha must lie in (0, 1).
DecisionOutcome scp_lambda(std::span<const double> scores, double alpha);

/// Conformal risk control: the smallest grid value whose bound
/// (sum_i l_i(lambda) + B) / (n+1) is at most alpha. The bound is
/// non-increasing along the grid, so a binary search over columns gives the
/// same answer as a linear scan.
DecisionOutcome crc_lambda(const LossMatrix& matrix, double alpha);

/// Risk-controlling prediction sets with the Hoeffding upper confidence
/// bound: the smallest grid value with mean loss + slack <= alpha, where
/// slack = B * sqrt(ln(1/(1-beta)) / (2n)). Losses must be in [0, B]; n must
/// be positive.
DecisionOutcome rcps_lambda(const LossMatrix& matrix, double alpha, double beta);

/// Hoeffding slack term used by rcps_lambda, exposed for verification.
double hoeffding_slack(double upper_bound, double beta, std::size_t n);

/// Highest-posterior-density rule: the smallest grid value whose column
/// losses put at least beta probability mass of L+ at or below alpha,
/// estimated with budget.mc_samples Monte Carlo draws seeded from
/// budget.master_seed. One set of spacings draws is shared across all grid
/// columns (common random numbers), which makes the estimated probability
/// non-decreasing along the grid and the decision deterministic given the
/// seed; binary search then agrees with a linear scan.
DecisionOutcome hpd_lambda(const LossMatrix& matrix, const RiskBudget& budget);

/// Dispatch on the method tag. For Method::scp the matrix rows must be 0/1
/// indicator losses; each item's score is recovered as the first grid value
/// where its loss reaches zero (items that never reach zero score +infinity).
DecisionOutcome select(const LossMatrix& matrix, const RiskBudget& budget, Method method);

}  // namespace riskcal::rules
