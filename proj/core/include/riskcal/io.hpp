#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "riskcal/experiments.hpp"
#include "riskcal/types.hpp"

// File formats.
//
// Loss-matrix CSV: header `lambda,<l_1>,<l_2>,...` listing the grid, then one
// line `<item_id>,<loss_1>,...` per item. Loss-vector file: one real per
// line; blank lines are ignored. Histogram CSV: `edge_low,edge_high,count`.
// JSON documents mirror the domain types field for field; infinite values
// (the infeasibility sentinel) serialize as null. Doubles are written in
// shortest round-trip form, so serialize-then-parse is the identity.

namespace riskcal::io {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

std::vector<double> read_loss_vector(std::istream& in);
std::vector<double> read_loss_vector_file(const std::filesystem::path& path);

LossMatrix read_loss_matrix_csv(std::istream& in, double upper_bound = 1.0);
LossMatrix read_loss_matrix_csv_file(const std::filesystem::path& path, double upper_bound = 1.0);
void write_loss_matrix_csv(std::ostream& out, const LossMatrix& matrix);

std::string to_json_string(const CalibrationLosses& cal);
CalibrationLosses calibration_losses_from_json(const std::string& text);

std::string to_json_string(const LossMatrix& matrix);
LossMatrix loss_matrix_from_json(const std::string& text);

std::string to_json_string(const RiskBudget& budget);
RiskBudget risk_budget_from_json(const std::string& text);

std::string to_json_string(const QuantileSpacings& spacings);
QuantileSpacings quantile_spacings_from_json(const std::string& text);

std::string to_json_string(const LPlusSamples& samples);
LPlusSamples l_plus_samples_from_json(const std::string& text);

std::string to_json_string(const DecisionOutcome& outcome);
DecisionOutcome decision_outcome_from_json(const std::string& text);

std::string to_json_string(const experiments::ExperimentReport& report);

void write_report_csv(std::ostream& out, const experiments::ExperimentReport& report);
std::string report_csv_string(const experiments::ExperimentReport& report);

void write_histogram_csv(std::ostream& out, const experiments::Histogram& histogram);
std::string histogram_csv_string(const experiments::Histogram& histogram);

/// Write `content` to `path` atomically (temp file + rename).
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace riskcal::io
