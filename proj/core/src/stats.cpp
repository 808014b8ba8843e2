#include "riskcal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace riskcal::stats {

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  for (double v : out) {
    if (std::isnan(v)) {
      throw NaNInput();
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t ceil_index(double x) {
  if (std::isnan(x) || x <= -0.5) {
    throw DomainError("ceil_index requires x > -0.5");
  }
  // Snap values that are within a few ulps of an integer before ceiling;
  // products like 10 * (1 - 0.1) otherwise land one ulp above 9 and round up.
  const double nearest = std::nearbyint(x);
  const double tol = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
  const double snapped = std::abs(x - nearest) <= tol ? nearest : x;
  const double result = std::ceil(snapped);
  return result <= 0.0 ? 0 : static_cast<std::size_t>(result);
}

double empirical_quantile(std::span<const double> values, double q) {
  if (values.empty()) {
    throw EmptyInput("empirical_quantile");
  }
  if (!(q > 0.0 && q <= 1.0)) {
    throw DomainError("quantile level must lie in (0, 1]");
  }
  const std::size_t m = values.size();
  std::size_t k = ceil_index(q * static_cast<double>(m));
  k = std::clamp<std::size_t>(k, 1, m);
  std::vector<double> copy(values.begin(), values.end());
  std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(k - 1), copy.end());
  return copy[k - 1];
}

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Continued fraction for the incomplete beta function, evaluated with the
// modified Lentz algorithm. Converges quickly for x <= (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 400;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("incomplete beta requires a > 0 and b > 0");
  }
  if (std::isnan(x) || x < 0.0 || x > 1.0) {
    throw DomainError("incomplete beta requires x in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) *
                   beta_continued_fraction(b, a, 1.0 - x) / b;
}

double inverse_regularized_incomplete_beta(double a, double b, double p) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("inverse incomplete beta requires a > 0 and b > 0");
  }
  if (std::isnan(p) || p < 0.0 || p > 1.0) {
    throw DomainError("inverse incomplete beta requires p in [0, 1]");
  }
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  // Bisection on the monotone CDF terminates once the midpoint stops moving.
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) return mid;
    if (regularized_incomplete_beta(a, b, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
}

Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double confidence) {
  if (trials == 0 || successes > trials) {
    throw InvalidCounts("need 0 <= successes <= trials with trials >= 1");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw DomainError("confidence must lie in (0, 1)");
  }
  const double delta = 1.0 - confidence;
  const double s = static_cast<double>(successes);
  const double t = static_cast<double>(trials);
  Interval out;
  out.lower = successes == 0
                  ? 0.0
                  : inverse_regularized_incomplete_beta(s, t - s + 1.0, delta / 2.0);
  out.upper = successes == trials
                  ? 1.0
                  : inverse_regularized_incomplete_beta(s + 1.0, t - s, 1.0 - delta / 2.0);
  return out;
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace riskcal::stats
