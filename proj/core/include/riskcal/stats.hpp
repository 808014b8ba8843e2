#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "riskcal/errors.hpp"

namespace riskcal::stats {

/// Non-decreasing copy of the input. Rejects NaN entries.
std::vector<double> sorted_copy(std::span<const double> values);

/// Smallest integer k with k >= x, robust against floating rounding of
/// products such as (n+1)*(1-alpha): values within a few ulps of an integer
/// are snapped to it before taking the ceiling. Requires x > -0.5.
std::size_t ceil_index(double x);

/// The ceil(q*m)-th smallest element (upper order statistic, no
/// interpolation). q must lie in (0, 1]; the input must be non-empty.
double empirical_quantile(std::span<const double> values, double q);

/// Regularized incomplete beta function I_x(a, b), evaluated with the
/// continued fraction of Lentz's method. Absolute accuracy around 1e-12 or
/// better over a, b <= 1e6.
double regularized_incomplete_beta(double a, double b, double x);

/// Smallest x with I_x(a, b) >= p, found by bisection on the monotone CDF.
double inverse_regularized_incomplete_beta(double a, double b, double p);

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

/// Exact (conservative) Clopper-Pearson confidence interval for a binomial
/// proportion, via beta quantiles. The lower endpoint is 0 when successes is
/// 0 and the upper endpoint is 1 when successes equals trials.
Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double confidence);

/// Neumaier-compensated sum; order-deterministic and robust for long
/// accumulations in experiment aggregation.
double compensated_sum(std::span<const double> values);

}  // namespace riskcal::stats
