#include "riskcal/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include <json.hpp>

namespace riskcal::io {
namespace {

using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

double parse_double(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') {
    field.remove_prefix(1);
  }
  if (field.empty()) {
    throw ParseError(line, "expected a number, found an empty field");
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, "cannot parse '" + std::string(field) + "' as a number");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

Json number_or_null(double value) {
  if (std::isfinite(value)) {
    return value;
  }
  return nullptr;
}

double number_or_infinity(const Json& value) {
  if (value.is_null()) {
    return std::numeric_limits<double>::infinity();
  }
  return value.get<double>();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
}

template <typename Fn>
auto with_json_errors(Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("unexpected JSON shape: ") + e.what());
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open file: " + path.string());
  }
  return in;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) {
    throw Error("cannot format double");
  }
  return std::string(buffer, ptr);
}

std::vector<double> read_loss_vector(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view text = trim(line);
    if (text.empty()) {
      continue;
    }
    values.push_back(parse_double(text, line_number));
  }
  return values;
}

std::vector<double> read_loss_vector_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_loss_vector(in);
}

LossMatrix read_loss_matrix_csv(std::istream& in, double upper_bound) {
  std::string line;
  std::size_t line_number = 0;
  if (!std::getline(in, line)) {
    throw ParseError(1, "missing header line 'lambda,<l_1>,...'");
  }
  ++line_number;
  const auto header = split(line, ',');
  if (trim(header[0]) != "lambda") {
    throw ParseError(1, "header must start with 'lambda'");
  }
  if (header.size() < 2) {
    throw ParseError(1, "header lists no lambda values");
  }
  std::vector<double> grid;
  grid.reserve(header.size() - 1);
  for (std::size_t j = 1; j < header.size(); ++j) {
    grid.push_back(parse_double(header[j], line_number));
  }

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != grid.size() + 1) {
      throw ParseError(line_number, "expected " + std::to_string(grid.size() + 1) +
                                        " fields, found " + std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(grid.size());
    for (std::size_t j = 1; j < fields.size(); ++j) {
      row.push_back(parse_double(fields[j], line_number));
    }
    rows.push_back(std::move(row));
  }

  return LossMatrix(std::move(grid), std::move(rows), upper_bound);
}

LossMatrix read_loss_matrix_csv_file(const std::filesystem::path& path, double upper_bound) {
  auto in = open_input(path);
  return read_loss_matrix_csv(in, upper_bound);
}

void write_loss_matrix_csv(std::ostream& out, const LossMatrix& matrix) {
  out << "lambda";
  for (double v : matrix.lambda_grid()) {
    out << ',' << format_double(v);
  }
  out << '\n';
  for (std::size_t i = 0; i < matrix.num_items(); ++i) {
    out << i;
    for (double v : matrix.rows()[i]) {
      out << ',' << format_double(v);
    }
    out << '\n';
  }
}

std::string to_json_string(const CalibrationLosses& cal) {
  Json doc;
  doc["losses"] = cal.losses();
  doc["upper_bound_B"] = cal.upper_bound();
  return doc.dump(2);
}

CalibrationLosses calibration_losses_from_json(const std::string& text) {
  const Json doc = parse_json(text);
  return with_json_errors([&] {
    return CalibrationLosses(doc.at("losses").get<std::vector<double>>(),
                             doc.at("upper_bound_B").get<double>());
  });
}

std::string to_json_string(const LossMatrix& matrix) {
  Json doc;
  doc["lambda_grid"] = matrix.lambda_grid();
  doc["rows"] = matrix.rows();
  doc["upper_bound_B"] = matrix.upper_bound();
  return doc.dump(2);
}

LossMatrix loss_matrix_from_json(const std::string& text) {
  const Json doc = parse_json(text);
  return with_json_errors([&] {
    return LossMatrix(doc.at("lambda_grid").get<std::vector<double>>(),
                      doc.at("rows").get<std::vector<std::vector<double>>>(),
                      doc.at("upper_bound_B").get<double>());
  });
}

std::string to_json_string(const RiskBudget& budget) {
  Json doc;
  doc["alpha"] = budget.alpha;
  doc["beta"] = budget.beta;
  doc["mc_samples"] = budget.mc_samples;
  doc["master_seed"] = budget.master_seed;
  return doc.dump(2);
}

RiskBudget risk_budget_from_json(const std::string& text) {
  const Json doc = parse_json(text);
  return with_json_errors([&] {
    return RiskBudget(doc.at("alpha").get<double>(), doc.at("beta").get<double>(),
                      doc.at("mc_samples").get<std::size_t>(),
                      doc.at("master_seed").get<std::uint64_t>());
  });
}

std::string to_json_string(const QuantileSpacings& spacings) {
  Json doc;
  doc["u"] = spacings.components();
  return doc.dump(2);
}

QuantileSpacings quantile_spacings_from_json(const std::string& text) {
  const Json doc = parse_json(text);
  return with_json_errors(
      [&] { return QuantileSpacings(doc.at("u").get<std::vector<double>>()); });
}

std::string to_json_string(const LPlusSamples& samples) {
  Json doc;
  doc["values"] = samples.values;
  doc["seed"] = samples.seed;
  doc["count"] = samples.count;
  return doc.dump(2);
}

LPlusSamples l_plus_samples_from_json(const std::string& text) {
  const Json doc = parse_json(text);
  return with_json_errors([&] {
    LPlusSamples samples;
    samples.values = doc.at("values").get<std::vector<double>>();
    samples.seed = doc.at("seed").get<std::uint64_t>();
    samples.count = doc.at("count").get<std::size_t>();
    return samples;
  });
}

std::string to_json_string(const DecisionOutcome& outcome) {
  Json doc;
  doc["lambda_selected"] = number_or_null(outcome.lambda_selected);
  doc["method"] = std::string(to_string(outcome.method));
  doc["achieved_bound"] = number_or_null(outcome.achieved_bound);
  return doc.dump(2);
}

DecisionOutcome decision_outcome_from_json(const std::string& text) {
  const Json doc = parse_json(text);
  return with_json_errors([&] {
    DecisionOutcome outcome;
    outcome.lambda_selected = number_or_infinity(doc.at("lambda_selected"));
    outcome.method = method_from_string(doc.at("method").get<std::string>());
    outcome.achieved_bound = number_or_infinity(doc.at("achieved_bound"));
    return outcome;
  });
}

std::string to_json_string(const experiments::ExperimentReport& report) {
  Json doc;
  doc["experiment"] = report.experiment;
  doc["num_trials"] = report.num_trials;
  doc["calibration_n"] = report.calibration_n;
  if (report.binomial_k > 0) {
    doc["binomial_k"] = report.binomial_k;
  }
  doc["alpha"] = report.alpha;
  doc["beta"] = report.beta;
  doc["mc_samples"] = report.mc_samples;
  doc["master_seed"] = report.master_seed;
  Json methods = Json::array();
  for (const auto& m : report.methods) {
    Json row;
    row["method"] = m.method;
    row["exceed_count"] = m.exceed_count;
    row["relative_frequency"] = m.relative_frequency;
    row["ci_lower"] = m.ci.lower;
    row["ci_upper"] = m.ci.upper;
    row["mean_true_risk"] = m.mean_true_risk;
    row["se_true_risk"] = m.se_true_risk;
    row["mean_length"] = m.mean_length;
    row["sentinel_count"] = m.sentinel_count;
    methods.push_back(std::move(row));
  }
  doc["methods"] = std::move(methods);
  return doc.dump(2);
}

void write_report_csv(std::ostream& out, const experiments::ExperimentReport& report) {
  out << "method,exceed_count,relative_frequency,ci_lower,ci_upper,"
         "mean_true_risk,se_true_risk,mean_length,sentinel_count\n";
  for (const auto& m : report.methods) {
    out << m.method << ',' << m.exceed_count << ',' << format_double(m.relative_frequency) << ','
        << format_double(m.ci.lower) << ',' << format_double(m.ci.upper) << ','
        << format_double(m.mean_true_risk) << ',' << format_double(m.se_true_risk) << ','
        << format_double(m.mean_length) << ',' << m.sentinel_count << '\n';
  }
}

std::string report_csv_string(const experiments::ExperimentReport& report) {
  std::ostringstream out;
  write_report_csv(out, report);
  return out.str();
}

void write_histogram_csv(std::ostream& out, const experiments::Histogram& histogram) {
  out << "edge_low,edge_high,count\n";
  for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
    out << format_double(histogram.edges[i]) << ',' << format_double(histogram.edges[i + 1]) << ','
        << histogram.counts[i] << '\n';
  }
}

std::string histogram_csv_string(const experiments::Histogram& histogram) {
  std::ostringstream out;
  write_histogram_csv(out, histogram);
  return out.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error("cannot open file for writing: " + tmp.string());
    }
    out << content;
    out.flush();
    if (!out) {
      throw Error("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace riskcal::io
