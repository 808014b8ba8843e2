#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "riskcal/random.hpp"
#include "riskcal/types.hpp"

// The stochastic upper bound L+ on expected loss.
//
// Given calibration losses l_1..l_n bounded by B, sort them, append B, and
// weight the n+1 values by random quantile spacings U ~ Dir(1,...,1):
//
//   L+ = sum_i U_i * l_(i),   l_(n+1) = B.
//
// L+ stochastically dominates the expected loss under any prior consistent
// with the observations, so its quantiles are distribution-free upper
// confidence bounds. With n = 0 the sum degenerates to B.

namespace riskcal::quadrature {

/// One evaluation point of the worst-case quantile integral: spacings plus
/// the sorted losses with the upper bound appended.
struct WorstCaseQuantileEval {
  QuantileSpacings spacings;
  std::vector<double> sorted_losses_with_bound;
};

/// Sorted losses with the upper bound B appended as the final, largest entry.
std::vector<double> sorted_losses_with_bound(const CalibrationLosses& cal);

/// One draw of n+1 quantile spacings, jointly Dir(1,...,1). Implemented by
/// normalizing n+1 standard exponentials, which has the same law as
/// consecutive differences of sorted uniforms but needs no sort.
QuantileSpacings sample_spacings(std::size_t n, Xoshiro256pp& rng);

/// Definite integral of the worst-case step quantile function consistent
/// with the observations: the dot product sum_i u_i * l_(i).
double worst_case_integral(const WorstCaseQuantileEval& eval);

/// `count` independent L+ draws, deterministic given `seed`. Every returned
/// value lies in [min(l_(1), B), B].
LPlusSamples sample_l_plus(const CalibrationLosses& cal, std::size_t count, std::uint64_t seed);

/// E(L+) = (sum_i l_i + B) / (n + 1), closed form.
double expected_l_plus(const CalibrationLosses& cal);

/// Var(L+) from Dirichlet moments with K = n+1 categories:
/// [K * sum c^2 - (sum c)^2] / [K^2 (K+1)], c = sorted losses with B.
double variance_l_plus(const CalibrationLosses& cal);

/// Monte Carlo critical value b*_beta: the ceil(beta*m)-th order statistic of
/// m draws of L+. Conservative upper rounding; non-decreasing in beta for a
/// fixed seed.
double critical_value(const CalibrationLosses& cal, double beta, std::size_t mc_samples,
                      std::uint64_t seed);

/// Monte Carlo estimate of Pr(L+ <= threshold). Exactly 1 when threshold >= B
/// and exactly 0 when threshold is below every loss and B.
double prob_l_plus_below(const CalibrationLosses& cal, double threshold, std::size_t mc_samples,
                         std::uint64_t seed);

}  // namespace riskcal::quadrature
