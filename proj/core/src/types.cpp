#include "riskcal/types.hpp"

#include <cmath>
#include <utility>

namespace riskcal {
namespace {

// Neumaier variant of Kahan summation; keeps the simplex check meaningful
// for long spacing vectors.
double kahan_sum(const std::vector<double>& values) {
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

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::scp:
      return "scp";
    case Method::crc:
      return "crc";
    case Method::rcps:
      return "rcps";
    case Method::hpd:
      return "hpd";
  }
  throw UnknownMethod("<invalid enum value>");
}

Method method_from_string(std::string_view tag) {
  if (tag == "scp") return Method::scp;
  if (tag == "crc") return Method::crc;
  if (tag == "rcps") return Method::rcps;
  if (tag == "hpd") return Method::hpd;
  throw UnknownMethod(std::string(tag));
}

CalibrationLosses::CalibrationLosses(std::vector<double> losses, double upper_bound)
    : losses_(std::move(losses)), upper_bound_(upper_bound) {
  if (!std::isfinite(upper_bound_)) {
    throw DomainError("upper bound B must be finite");
  }
  for (std::size_t i = 0; i < losses_.size(); ++i) {
    if (std::isnan(losses_[i])) {
      throw NaNInput();
    }
    if (losses_[i] > upper_bound_) {
      throw LossExceedsBound(i, 0);
    }
    if (std::isinf(losses_[i])) {
      throw DomainError("losses must be finite");
    }
  }
}

LossMatrix::LossMatrix(std::vector<double> lambda_grid, std::vector<std::vector<double>> rows,
                       double upper_bound)
    : lambda_grid_(std::move(lambda_grid)),
      rows_(std::move(rows)),
      upper_bound_(upper_bound),
      min_entry_(upper_bound) {
  if (lambda_grid_.empty()) {
    throw EmptyGrid();
  }
  if (!std::isfinite(upper_bound_)) {
    throw DomainError("upper bound B must be finite");
  }
  for (std::size_t j = 0; j < lambda_grid_.size(); ++j) {
    if (std::isnan(lambda_grid_[j])) {
      throw NaNInput();
    }
    if (j > 0 && !(lambda_grid_[j] > lambda_grid_[j - 1])) {
      throw GridNotAscending(j);
    }
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    auto& row = rows_[i];
    if (row.size() != lambda_grid_.size()) {
      throw RowLengthMismatch(i);
    }
    double running_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (std::isnan(row[j])) {
        throw NaNInput();
      }
      if (row[j] > upper_bound_) {
        throw LossExceedsBound(i, j);
      }
      if (row[j] > running_min + kMonotoneTol) {
        throw NonMonotoneRow(i, j);
      }
      // Sub-tolerance wiggle is clamped so stored rows are exactly monotone.
      if (row[j] > running_min) {
        row[j] = running_min;
      }
      running_min = row[j];
      if (row[j] < min_entry_) {
        min_entry_ = row[j];
      }
    }
  }
  if (rows_.empty()) {
    min_entry_ = upper_bound_;
  }
}

std::vector<double> LossMatrix::column(std::size_t j) const {
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) {
    out.push_back(row[j]);
  }
  return out;
}

double LossMatrix::column_sum(std::size_t j) const noexcept {
  double sum = 0.0;
  for (const auto& row : rows_) {
    sum += row[j];
  }
  return sum;
}

RiskBudget::RiskBudget(double alpha_in, double beta_in, std::size_t mc_samples_in,
                       std::uint64_t master_seed_in)
    : alpha(alpha_in), beta(beta_in), mc_samples(mc_samples_in), master_seed(master_seed_in) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidBudget("alpha must be positive and finite");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw InvalidBudget("beta must lie in (0, 1)");
  }
  if (mc_samples == 0) {
    throw InvalidBudget("mc_samples must be positive");
  }
}

QuantileSpacings::QuantileSpacings(std::vector<double> u) : u_(std::move(u)) {
  if (u_.empty()) {
    throw EmptyInput("quantile spacings");
  }
  for (double v : u_) {
    if (std::isnan(v)) {
      throw NaNInput();
    }
    if (v < 0.0) {
      throw DomainError("spacings must be nonnegative");
    }
  }
  const double total = kahan_sum(u_);
  if (std::abs(total - 1.0) > kSimplexTol) {
    throw DomainError("spacings must sum to 1");
  }
}

}  // namespace riskcal
