// riskcal: select loss-controlling thresholds from calibration losses and
// reproduce the synthetic experiment tables. Machine-readable JSON goes to
// stdout, logs to stderr, data files to --out. Exit code 0 on success, 2 on
// any input or validation error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "riskcal/experiments.hpp"
#include "riskcal/io.hpp"
#include "riskcal/quadrature.hpp"
#include "riskcal/rules.hpp"
#include "riskcal/types.hpp"

namespace {

using Json = nlohmann::ordered_json;

struct BoundOptions {
  std::string losses_path;
  double upper_bound = 1.0;
  double beta = 0.95;
  double alpha = -1.0;  // negative: not requested
  std::size_t mc_samples = 1000;
  std::uint64_t seed = 0;
};

void run_bound(const BoundOptions& opt) {
  const std::vector<double> losses = riskcal::io::read_loss_vector_file(opt.losses_path);
  const riskcal::CalibrationLosses cal(losses, opt.upper_bound);

  const double m = static_cast<double>(opt.mc_samples);
  Json doc;
  doc["n"] = cal.size();
  doc["upper_bound_B"] = cal.upper_bound();
  doc["beta"] = opt.beta;
  doc["mc_samples"] = opt.mc_samples;
  doc["seed"] = opt.seed;
  doc["expected_l_plus"] = riskcal::quadrature::expected_l_plus(cal);
  doc["critical_value"] =
      riskcal::quadrature::critical_value(cal, opt.beta, opt.mc_samples, opt.seed);
  // Binomial standard error of the Monte Carlo coverage estimate at the
  // reported critical value.
  doc["critical_value_coverage_se"] = std::sqrt(opt.beta * (1.0 - opt.beta) / m);
  if (opt.alpha >= 0.0) {
    const double p =
        riskcal::quadrature::prob_l_plus_below(cal, opt.alpha, opt.mc_samples, opt.seed);
    doc["prob_below_alpha"] = p;
    doc["prob_below_alpha_se"] = std::sqrt(p * (1.0 - p) / m);
  }
  std::cout << doc.dump(2) << '\n';
}

struct CalibrateOptions {
  std::string matrix_path;
  std::string method = "crc";
  double alpha = 0.1;
  double beta = 0.95;
  double upper_bound = 1.0;
  std::size_t mc_samples = 1000;
  std::uint64_t seed = 0;
};

void run_calibrate(const CalibrateOptions& opt) {
  const riskcal::LossMatrix matrix =
      riskcal::io::read_loss_matrix_csv_file(opt.matrix_path, opt.upper_bound);
  const riskcal::RiskBudget budget(opt.alpha, opt.beta, opt.mc_samples, opt.seed);
  const riskcal::DecisionOutcome outcome =
      riskcal::rules::select(matrix, budget, riskcal::method_from_string(opt.method));
  std::cout << riskcal::io::to_json_string(outcome) << '\n';
}

struct ExperimentOptions {
  std::string name;
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::size_t n = 0;         // 0: generator default
  std::size_t k = 4;
  double alpha = -1.0;       // negative: generator default
  double beta = 0.95;
  std::size_t mc_samples = 1000;
  std::size_t threads = 1;
  std::size_t lambda_bins = 50;
};

void run_experiment_cmd(const ExperimentOptions& opt) {
  riskcal::experiments::ExperimentConfig config;
  config.generator = riskcal::experiments::generator_from_string(opt.name);
  config.num_trials = opt.trials;
  config.binomial_k = opt.k;
  config.threads = opt.threads;

  const bool binomial = config.generator == riskcal::experiments::GeneratorKind::binomial;
  config.calibration_n = opt.n > 0 ? opt.n : (binomial ? 10 : 200);
  const double alpha = opt.alpha >= 0.0 ? opt.alpha : (binomial ? 0.4 : 0.1);
  config.budget = riskcal::RiskBudget(alpha, opt.beta, opt.mc_samples, opt.seed);

  const riskcal::experiments::ExperimentResult result =
      riskcal::experiments::run_experiment_detailed(config);

  const std::filesystem::path dir(opt.out_dir);
  std::filesystem::create_directories(dir);
  riskcal::io::write_text_atomic(dir / "report.json",
                                 riskcal::io::to_json_string(result.report) + "\n");
  std::cerr << "wrote " << (dir / "report.json").string() << '\n';
  riskcal::io::write_text_atomic(dir / "report.csv",
                                 riskcal::io::report_csv_string(result.report));
  std::cerr << "wrote " << (dir / "report.csv").string() << '\n';

  for (std::size_t m = 0; m < result.method_names.size(); ++m) {
    std::vector<double> lambdas;
    lambdas.reserve(result.trials.size());
    for (const auto& trial : result.trials) {
      const double lambda = trial.results[m].outcome.lambda_selected;
      if (std::isfinite(lambda)) {
        lambdas.push_back(lambda);
      }
    }
    const std::filesystem::path path = dir / ("lambda_hist_" + result.method_names[m] + ".csv");
    if (lambdas.empty()) {
      std::cerr << "skipping " << path.string() << ": no feasible trials\n";
      continue;
    }
    const auto hist = riskcal::experiments::make_histogram(lambdas, opt.lambda_bins);
    riskcal::io::write_text_atomic(path, riskcal::io::histogram_csv_string(hist));
    std::cerr << "wrote " << path.string() << '\n';
  }
}

struct LPlusHistOptions {
  std::string losses_path;
  double upper_bound = 1.0;
  std::size_t mc_samples = 1000;
  std::size_t bins = 50;
  std::uint64_t seed = 0;
  std::string out_path;
};

void run_lplus_hist(const LPlusHistOptions& opt) {
  const std::vector<double> losses = riskcal::io::read_loss_vector_file(opt.losses_path);
  const riskcal::CalibrationLosses cal(losses, opt.upper_bound);
  const auto hist =
      riskcal::experiments::l_plus_histogram(cal, opt.mc_samples, opt.bins, opt.seed);
  const std::filesystem::path path(opt.out_path);
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  riskcal::io::write_text_atomic(path, riskcal::io::histogram_csv_string(hist));
  std::cerr << "wrote " << path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loss-controlling threshold selection from calibration losses"};
  app.require_subcommand(1);

  BoundOptions bound;
  CLI::App* bound_cmd =
      app.add_subcommand("bound", "Expected value and upper confidence bound of L+ for a loss file");
  bound_cmd->add_option("--losses", bound.losses_path, "Loss-vector file, one real per line")
      ->required();
  bound_cmd->add_option("--upper-bound", bound.upper_bound, "Upper bound B on any loss");
  bound_cmd->add_option("--beta", bound.beta, "Confidence level for the critical value");
  bound_cmd->add_option("--alpha", bound.alpha, "Also report Pr(L+ <= alpha)");
  bound_cmd->add_option("--mc-samples", bound.mc_samples, "Monte Carlo sample count");
  bound_cmd->add_option("--seed", bound.seed, "RNG seed");
  bound_cmd->callback([&] { run_bound(bound); });

  CalibrateOptions calibrate;
  CLI::App* calibrate_cmd =
      app.add_subcommand("calibrate", "Select a threshold from a loss-matrix CSV");
  calibrate_cmd->add_option("--matrix", calibrate.matrix_path, "Loss-matrix CSV file")->required();
  calibrate_cmd->add_option("--method", calibrate.method, "One of scp, crc, rcps, hpd")
      ->required();
  calibrate_cmd->add_option("--alpha", calibrate.alpha, "Target risk")->required();
  calibrate_cmd->add_option("--beta", calibrate.beta, "Confidence level (rcps, hpd)");
  calibrate_cmd->add_option("--upper-bound", calibrate.upper_bound, "Upper bound B on any loss");
  calibrate_cmd->add_option("--mc-samples", calibrate.mc_samples, "Monte Carlo sample count (hpd)");
  calibrate_cmd->add_option("--seed", calibrate.seed, "RNG seed (hpd)");
  calibrate_cmd->callback([&] { run_calibrate(calibrate); });

  ExperimentOptions experiment;
  CLI::App* experiment_cmd =
      app.add_subcommand("experiment", "Run a synthetic multi-trial experiment");
  experiment_cmd
      ->add_option("name", experiment.name, "Experiment name: binomial or heteroskedastic")
      ->required();
  experiment_cmd->add_option("--trials", experiment.trials, "Number of trials M");
  experiment_cmd->add_option("--seed", experiment.seed, "Master seed")->required();
  experiment_cmd->add_option("--out", experiment.out_dir, "Output directory")->required();
  experiment_cmd->add_option("--n", experiment.n, "Calibration items per trial");
  experiment_cmd->add_option("--k", experiment.k, "Binomial K");
  experiment_cmd->add_option("--alpha", experiment.alpha, "Target risk");
  experiment_cmd->add_option("--beta", experiment.beta, "Confidence level");
  experiment_cmd->add_option("--mc-samples", experiment.mc_samples, "Monte Carlo samples for hpd");
  experiment_cmd->add_option("--threads", experiment.threads, "Worker threads");
  experiment_cmd->add_option("--lambda-bins", experiment.lambda_bins,
                             "Bins for the per-method lambda histograms");
  experiment_cmd->callback([&] { run_experiment_cmd(experiment); });

  LPlusHistOptions lplus;
  CLI::App* lplus_cmd = app.add_subcommand("lplus-hist", "Histogram of Monte Carlo L+ draws");
  lplus_cmd->add_option("--losses", lplus.losses_path, "Loss-vector file, one real per line")
      ->required();
  lplus_cmd->add_option("--upper-bound", lplus.upper_bound, "Upper bound B on any loss");
  lplus_cmd->add_option("--mc-samples", lplus.mc_samples, "Monte Carlo sample count");
  lplus_cmd->add_option("--bins", lplus.bins, "Number of histogram bins");
  lplus_cmd->add_option("--seed", lplus.seed, "RNG seed");
  lplus_cmd->add_option("--out", lplus.out_path, "Output CSV file")->required();
  lplus_cmd->callback([&] { run_lplus_hist(lplus); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const riskcal::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
