#include "riskcal/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "riskcal/stats.hpp"

namespace riskcal::quadrature {
namespace {

// Fills `buffer` (size n+1) with one Dir(1,...,1) draw: n+1 standard
// exponentials normalized by their sum.
void draw_spacings_into(std::vector<double>& buffer, Xoshiro256pp& rng) {
  double total = 0.0;
  for (double& v : buffer) {
    v = rng.exponential();
    total += v;
  }
  if (total <= 0.0) {
    // All exponentials underflowed to zero; fall back to the barycenter.
    const double uniform = 1.0 / static_cast<double>(buffer.size());
    std::fill(buffer.begin(), buffer.end(), uniform);
    return;
  }
  for (double& v : buffer) {
    v /= total;
  }
}

double dot(const std::vector<double>& u, const std::vector<double>& values) {
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    sum += u[i] * values[i];
  }
  return sum;
}

}  // namespace

std::vector<double> sorted_losses_with_bound(const CalibrationLosses& cal) {
  std::vector<double> out = stats::sorted_copy(cal.losses());
  out.push_back(cal.upper_bound());
  return out;
}

QuantileSpacings sample_spacings(std::size_t n, Xoshiro256pp& rng) {
  std::vector<double> u(n + 1);
  draw_spacings_into(u, rng);
  return QuantileSpacings(std::move(u));
}

double worst_case_integral(const WorstCaseQuantileEval& eval) {
  const auto& u = eval.spacings.components();
  const auto& losses = eval.sorted_losses_with_bound;
  if (u.size() != losses.size()) {
    throw DimensionMismatch("spacings and sorted losses must have equal length");
  }
  for (std::size_t i = 1; i < losses.size(); ++i) {
    if (losses[i] < losses[i - 1]) {
      throw DomainError("sorted losses must be non-decreasing");
    }
  }
  return dot(u, losses);
}

LPlusSamples sample_l_plus(const CalibrationLosses& cal, std::size_t count, std::uint64_t seed) {
  if (count == 0) {
    throw DomainError("sample count must be positive");
  }
  const std::vector<double> losses = sorted_losses_with_bound(cal);
  const double upper = cal.upper_bound();
  const double lower = std::min(losses.front(), upper);

  LPlusSamples out;
  out.seed = seed;
  out.count = count;
  out.values.reserve(count);

  Xoshiro256pp rng(seed);
  std::vector<double> u(losses.size());
  for (std::size_t s = 0; s < count; ++s) {
    draw_spacings_into(u, rng);
    // The convex combination lies in [min(l_(1), B), B] exactly; clamp away
    // the ulp-level wiggle of the floating dot product.
    out.values.push_back(std::clamp(dot(u, losses), lower, upper));
  }
  return out;
}

double expected_l_plus(const CalibrationLosses& cal) {
  const double sum = stats::compensated_sum(cal.losses());
  return (sum + cal.upper_bound()) / static_cast<double>(cal.size() + 1);
}

double variance_l_plus(const CalibrationLosses& cal) {
  const double k = static_cast<double>(cal.size() + 1);
  double sum = cal.upper_bound();
  double sum_sq = cal.upper_bound() * cal.upper_bound();
  for (double v : cal.losses()) {
    sum += v;
    sum_sq += v * v;
  }
  const double numerator = k * sum_sq - sum * sum;
  return std::max(0.0, numerator / (k * k * (k + 1.0)));
}

double critical_value(const CalibrationLosses& cal, double beta, std::size_t mc_samples,
                      std::uint64_t seed) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("beta must lie in (0, 1)");
  }
  const LPlusSamples samples = sample_l_plus(cal, mc_samples, seed);
  return stats::empirical_quantile(samples.values, beta);
}

double prob_l_plus_below(const CalibrationLosses& cal, double threshold, std::size_t mc_samples,
                         std::uint64_t seed) {
  const LPlusSamples samples = sample_l_plus(cal, mc_samples, seed);
  std::size_t hits = 0;
  for (double v : samples.values) {
    if (v <= threshold) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(mc_samples);
}

}  // namespace riskcal::quadrature
