// Acceptance suite: end-to-end checks of the experiment tables, the analytic
// sampling laws, the rule equivalences, and CLI determinism. Prints one
// PASS/FAIL line per criterion and exits nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "riskcal/experiments.hpp"
#include "riskcal/io.hpp"
#include "riskcal/quadrature.hpp"
#include "riskcal/random.hpp"
#include "riskcal/rules.hpp"
#include "riskcal/stats.hpp"

namespace {

namespace fs = std::filesystem;
using namespace riskcal;

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name << " — "
            << detail << std::endl;
  if (!ok) {
    ++g_failures;
  }
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream out;
  out.precision(precision);
  out << std::fixed << v;
  return out.str();
}

const experiments::MethodSummary& method_row(const experiments::ExperimentReport& report,
                                             const std::string& name) {
  for (const auto& m : report.methods) {
    if (m.method == name) {
      return m;
    }
  }
  throw Error("missing method row: " + name);
}

bool within(double value, double lo, double hi) { return value >= lo && value <= hi; }

// ---------------------------------------------------------------- criteria 1+2

void criteria_1_and_2() {
  experiments::ExperimentConfig config;
  config.generator = experiments::GeneratorKind::binomial;
  config.num_trials = 10000;
  config.calibration_n = 10;
  config.binomial_k = 4;
  config.budget = RiskBudget(0.4, 0.95, 1000, 7);
  config.threads = 1;

  const auto start = std::chrono::steady_clock::now();
  const experiments::ExperimentReport table = experiments::run_experiment(config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const auto& crc = method_row(table, "crc");
  const auto& rcps = method_row(table, "rcps");
  const auto& hpd = method_row(table, "hpd");

  const bool rates_ok = within(crc.relative_frequency, 0.195, 0.230) &&
                        hpd.relative_frequency <= 0.003 && rcps.relative_frequency <= 0.001;
  const bool time_ok = seconds < 120.0;
  report(1, "binomial table reproduction", rates_ok && time_ok,
         "crc " + fmt(100 * crc.relative_frequency, 2) + "% in [19.5, 23.0], hpd " +
             fmt(100 * hpd.relative_frequency, 2) + "% <= 0.3, rcps " +
             fmt(100 * rcps.relative_frequency, 2) + "% <= 0.1; " + fmt(seconds, 1) +
             "s < 120s");

  const bool means_ok = within(crc.mean_true_risk, 0.330, 0.342) &&
                        within(hpd.mean_true_risk, 0.170, 0.182);
  report(2, "binomial mean risks",
         means_ok,
         "crc mean risk " + fmt(crc.mean_true_risk) + " in [0.330, 0.342], hpd mean risk " +
             fmt(hpd.mean_true_risk) + " in [0.170, 0.182]");
}

// ---------------------------------------------------------------- criterion 3

void criterion_3() {
  experiments::ExperimentConfig config;
  config.generator = experiments::GeneratorKind::heteroskedastic;
  config.num_trials = 10000;
  config.calibration_n = 200;
  config.budget = RiskBudget(0.1, 0.95, 1000, 7);
  config.threads = 1;

  const auto start = std::chrono::steady_clock::now();
  const experiments::ExperimentReport table = experiments::run_experiment(config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const auto& scp_crc = method_row(table, "scp_crc");
  const auto& rcps = method_row(table, "rcps");
  const auto& hpd = method_row(table, "hpd");

  const bool rates_ok = within(scp_crc.relative_frequency, 0.44, 0.485) &&
                        within(hpd.relative_frequency, 0.025, 0.045) &&
                        rcps.relative_frequency <= 0.001;
  const bool lengths_ok = within(scp_crc.mean_length, 7.99 * 0.95, 7.99 * 1.05) &&
                          within(hpd.mean_length, 9.50 * 0.95, 9.50 * 1.05) &&
                          within(rcps.mean_length, 14.29 * 0.95, 14.29 * 1.05);
  const bool time_ok = seconds < 600.0;

  report(3, "heteroskedastic table reproduction", rates_ok && lengths_ok && time_ok,
           "scp/crc " + fmt(100 * scp_crc.relative_frequency, 2) + "% in [44, 48.5], hpd " +
               fmt(100 * hpd.relative_frequency, 2) + "% in [2.5, 4.5], rcps " +
               fmt(100 * rcps.relative_frequency, 2) + "% <= 0.1; lengths " +
               fmt(scp_crc.mean_length, 2) + "/" + fmt(hpd.mean_length, 2) + "/" +
               fmt(rcps.mean_length, 2) + " vs 7.99/9.50/14.29 (+-5%); " + fmt(seconds, 1) +
               "s < 600s");
}

// ---------------------------------------------------------------- criterion 4

void criterion_4() {
  bool ok = true;
  std::string detail;
  for (std::size_t n : {1u, 5u, 10u}) {
    const CalibrationLosses cal(std::vector<double>(n, 0.0), 1.0);
    const std::size_t m = 1000000;
    LPlusSamples samples = quadrature::sample_l_plus(cal, m, 7000 + n);
    std::sort(samples.values.begin(), samples.values.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double cdf = 1.0 - std::pow(1.0 - samples.values[i], static_cast<double>(n));
      ks = std::max(ks, std::abs(cdf - static_cast<double>(i + 1) / static_cast<double>(m)));
      ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / static_cast<double>(m)));
    }
    const double critical = quadrature::critical_value(cal, 0.95, m, 8100 + n);
    const double analytic = 1.0 - std::pow(0.05, 1.0 / static_cast<double>(n));
    const bool this_ok = ks < 0.005 && std::abs(critical - analytic) < 0.003;
    ok = ok && this_ok;
    detail += "n=" + std::to_string(n) + " KS=" + fmt(ks) + " |q-" + fmt(analytic) +
              "|=" + fmt(std::abs(critical - analytic)) + "; ";
  }
  report(4, "Beta(1, n) law of L+ for all-zero losses", ok, detail);
}

// ---------------------------------------------------------------- criterion 5

void criterion_5() {
  Xoshiro256pp rng(314);
  bool ok = true;
  double worst_mean_sigma = 0.0;
  double worst_var_sigma = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 20);
    std::vector<double> losses(n);
    for (double& v : losses) {
      v = rng.uniform();
    }
    const CalibrationLosses cal(losses, 1.0);
    const std::size_t m = 1000000;
    const LPlusSamples samples = quadrature::sample_l_plus(cal, m, 600000 + rep);

    const double md = static_cast<double>(m);
    double sum = 0.0;
    for (double v : samples.values) sum += v;
    const double mean = sum / md;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : samples.values) {
      const double d = v - mean;
      const double d2 = d * d;
      m2 += d2;
      m4 += d2 * d2;
    }
    m2 /= md;
    m4 /= md;

    const double se_mean = std::sqrt(quadrature::variance_l_plus(cal) / md);
    const double se_var = std::sqrt(std::max(m4 - m2 * m2, 1e-30) / md);
    const double mean_sigma = std::abs(mean - quadrature::expected_l_plus(cal)) / se_mean;
    const double var_sigma = std::abs(m2 - quadrature::variance_l_plus(cal)) / se_var;
    worst_mean_sigma = std::max(worst_mean_sigma, mean_sigma);
    worst_var_sigma = std::max(worst_var_sigma, var_sigma);
    ok = ok && mean_sigma < 5.0 && var_sigma < 5.0;
  }
  report(5, "moment oracles over 50 random loss vectors", ok,
         "worst |mean dev| " + fmt(worst_mean_sigma, 2) + " se, worst |var dev| " +
             fmt(worst_var_sigma, 2) + " se (< 5 se)");
}

// ---------------------------------------------------------------- criterion 6

void criterion_6() {
  Xoshiro256pp rng(2718);
  bool ok = true;
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 25 && ok; ++n) {
    std::vector<double> scores(n);
    for (double& s : scores) {
      s = rng.uniform();
    }
    std::sort(scores.begin(), scores.end());
    scores.erase(std::unique(scores.begin(), scores.end()), scores.end());
    while (scores.size() < n) {
      scores.push_back(rng.uniform());
      std::sort(scores.begin(), scores.end());
      scores.erase(std::unique(scores.begin(), scores.end()), scores.end());
    }

    std::vector<std::vector<double>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
      rows[i].resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        rows[i][j] = scores[i] > scores[j] ? 1.0 : 0.0;
      }
    }
    const LossMatrix matrix(scores, rows, 1.0);

    for (int cent = 1; cent <= 99; ++cent) {
      const double alpha = static_cast<double>(cent) / 100.0;
      const DecisionOutcome scp = rules::scp_lambda(scores, alpha);
      const DecisionOutcome crc = rules::crc_lambda(matrix, alpha);
      ++checked;
      const bool agree = scp.feasible() ? crc.lambda_selected == scp.lambda_selected
                                        : !crc.feasible();
      if (!agree) {
        ok = false;
        report(6, "scp/crc equivalence on indicator losses", false,
               "mismatch at n=" + std::to_string(n) + ", alpha=" + fmt(alpha, 2));
        return;
      }
    }
  }
  report(6, "scp/crc equivalence on indicator losses", ok,
         std::to_string(checked) + " (n, alpha) pairs, exact equality");
}

// ---------------------------------------------------------------- criterion 7

void criterion_7() {
  Xoshiro256pp rng(1414);
  bool ok = true;
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform() * 9.0);
    const QuantileSpacings u = quadrature::sample_spacings(n, rng);
    std::vector<double> losses(n);
    for (double& v : losses) {
      v = rng.uniform();
    }
    std::sort(losses.begin(), losses.end());
    losses.push_back(1.0);

    const double direct = quadrature::worst_case_integral({u, losses});

    // Midpoint Riemann sum of the step quantile function on 10^6 cells.
    std::vector<double> breaks(u.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      acc += u.components()[i];
      breaks[i] = acc;
    }
    breaks.back() = 1.0;
    const std::size_t points = 1000000;
    const double h = 1.0 / static_cast<double>(points);
    double riemann = 0.0;
    std::size_t piece = 0;
    for (std::size_t g = 0; g < points; ++g) {
      const double t = (static_cast<double>(g) + 0.5) * h;
      while (piece + 1 < breaks.size() && t > breaks[piece]) {
        ++piece;
      }
      riemann += losses[piece];
    }
    riemann *= h;

    const double err = std::abs(direct - riemann);
    worst = std::max(worst, err);
    ok = ok && err < 1e-6;
  }
  report(7, "worst-case integral vs 10^6-point Riemann sums", ok,
         "worst |error| " + fmt(worst * 1e6, 3) + "e-6 over 100 instances (< 1e-6)");
}

// ---------------------------------------------------------------- criterion 8

void criterion_8() {
  const stats::Interval table1_crc = stats::clopper_pearson(2120, 10000, 0.95);
  const stats::Interval table1_rcps = stats::clopper_pearson(0, 10000, 0.95);
  const bool ok = std::abs(table1_crc.lower - 0.2040) < 5e-4 &&
                  std::abs(table1_crc.upper - 0.2201) < 5e-4 &&
                  std::round(table1_crc.lower * 1e4) == 2040.0 &&
                  std::round(table1_crc.upper * 1e4) == 2201.0 &&
                  table1_rcps.upper <= 0.0004 && table1_rcps.lower == 0.0;
  report(8, "Clopper-Pearson spot checks", ok,
         "(2120, 10000) -> [" + fmt(table1_crc.lower) + ", " + fmt(table1_crc.upper) +
             "] vs [0.2040, 0.2201]; (0, 10000) upper " + fmt(table1_rcps.upper, 6) +
             " <= 0.0004");
}

// ---------------------------------------------------------------- criterion 9

int run_cli(const std::string& args) {
  const std::string command = std::string(RISKCAL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(command.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return "<missing " + path.string() + ">";
  }
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

bool identical_trees(const fs::path& a, const fs::path& b, std::string& detail) {
  std::vector<fs::path> names;
  for (const auto& entry : fs::directory_iterator(a)) {
    names.push_back(entry.path().filename());
  }
  std::sort(names.begin(), names.end());
  if (names.empty()) {
    detail = "no output files in " + a.string();
    return false;
  }
  for (const auto& name : names) {
    if (slurp(a / name) != slurp(b / name)) {
      detail = "byte mismatch in " + name.string();
      return false;
    }
  }
  detail = std::to_string(names.size()) + " files byte-identical";
  return true;
}

void criterion_9() {
  const fs::path root = fs::temp_directory_path() / "riskcal_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);

  bool ok = true;
  std::string detail;
  struct Run {
    std::string name;
    std::string extra;
  };
  for (const Run& run : {Run{"binomial", "--trials 1500 --seed 99"},
                         Run{"heteroskedastic", "--trials 250 --seed 55 --n 120"}}) {
    const fs::path one = root / (run.name + "_t1");
    const fs::path many = root / (run.name + "_t3");
    if (run_cli("experiment " + run.name + " " + run.extra + " --threads 1 --out " +
                one.string()) != 0 ||
        run_cli("experiment " + run.name + " " + run.extra + " --threads 3 --out " +
                many.string()) != 0) {
      ok = false;
      detail = run.name + ": CLI run failed";
      break;
    }
    std::string tree_detail;
    if (!identical_trees(one, many, tree_detail)) {
      ok = false;
      detail = run.name + ": " + tree_detail;
      break;
    }
    detail += run.name + " " + tree_detail + "; ";
  }
  report(9, "cmd_experiment determinism across thread counts", ok, detail);
}

}  // namespace

int main() {
  criteria_1_and_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all acceptance criteria passed" << std::endl;
  return 0;
}
