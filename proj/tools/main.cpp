// Command-line front end: greedy sensor selection, ridge estimation,
// cross-validation, and timing benchmarks over CSV/DMAT snapshot matrices.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sensorsel/baselines.hpp"
#include "sensorsel/errors.hpp"
#include "sensorsel/greg.hpp"
#include "sensorsel/harness.hpp"
#include "sensorsel/io.hpp"
#include "sensorsel/report.hpp"
#include "sensorsel/ridge.hpp"

namespace {

using namespace sensorsel;

struct CommonOptions {
  std::string input_x;
  std::string input_y;
  std::string format;  // empty: guess per file extension
  std::string output;
  bool quiet = false;
  bool no_timing = false;
};

DataMatrix load_with_format(const std::string& path, const std::string& format) {
  const MatrixFormat f =
      format.empty() ? guess_format(path) : matrix_format_from_string(format);
  return load_matrix(path, f);
}

void emit_report(const CommonOptions& common, const std::string& report) {
  if (!common.output.empty()) {
    std::ofstream out(common.output, std::ios::binary);
    if (!out) throw ParseError("cannot open " + common.output + " for writing");
    out << report;
    if (!out) throw ParseError("write failed: " + common.output);
  } else if (!common.quiet) {
    std::cout << report;
  }
}

void add_common(CLI::App* cmd, CommonOptions& common, bool with_inputs = true) {
  if (with_inputs) {
    cmd->add_option("--input-x", common.input_x, "snapshot matrix of sensor candidates")
        ->required();
    cmd->add_option("--input-y", common.input_y,
                    "snapshot matrix of target outputs (default: the input matrix itself)");
  }
  cmd->add_option("--format", common.format, "matrix file format: csv or dmat");
  cmd->add_option("--output", common.output, "report path (default: stdout)");
  cmd->add_flag("--quiet", common.quiet, "suppress stdout");
  cmd->add_flag("--no-timing", common.no_timing, "omit wall times from the report");
}

std::vector<BenchCase> parse_sizes(const std::string& spec) {
  std::vector<BenchCase> cases;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    const std::string group = spec.substr(pos, comma - pos);
    BenchCase c;
    if (std::sscanf(group.c_str(), "%zu:%zu:%zu:%zu", &c.n, &c.m, &c.n_y, &c.p) != 4)
      throw ConfigError("bad --sizes entry '" + group + "' (expected N:M:Ny:p)");
    cases.push_back(c);
    if (comma == spec.size()) break;
    pos = comma + 1;
  }
  if (cases.empty()) throw ConfigError("--sizes is empty");
  return cases;
}

int run_select(const CommonOptions& common, ExperimentConfig& config) {
  DataMatrix x = load_with_format(common.input_x, common.format);
  DataMatrix y = common.input_y.empty() ? x : load_with_format(common.input_y, common.format);
  if (config.center) {
    x = center_columns_by_row_mean(x, x).train;
    y = center_columns_by_row_mean(y, y).train;
  }
  config.include_timing = !common.no_timing;
  config.input_x_path = common.input_x;
  config.input_y_path = common.input_y;
  const SelectionProblem problem{std::move(x), std::move(y), config.lambda_tilde,
                                 config.budget_p};
  const SelectionResult result = run_selector(config.algorithm, problem, config.reduction_rank);
  emit_report(common, render_selection_report(config, problem, result));
  return 0;
}

int run_estimate(const CommonOptions& common, ExperimentConfig& config,
                 const std::vector<int>& indices, const std::string& test_x_path,
                 const std::string& test_y_path) {
  const DataMatrix x = load_with_format(common.input_x, common.format);
  const DataMatrix y = common.input_y.empty()
                           ? x
                           : load_with_format(common.input_y, common.format);
  config.include_timing = !common.no_timing;
  config.input_x_path = common.input_x;
  config.input_y_path = common.input_y;
  const SelectionProblem problem{x, y, config.lambda_tilde, indices.size()};
  const RidgeEstimator estimator = ridge_fit(problem, indices);
  const EvalMetrics train_metrics = evaluate(estimator, x, y);

  std::optional<EvalMetrics> test_metrics;
  if (!test_x_path.empty()) {
    if (test_y_path.empty()) throw ConfigError("--test-x requires --test-y");
    const DataMatrix x_test = load_with_format(test_x_path, common.format);
    const DataMatrix y_test = load_with_format(test_y_path, common.format);
    test_metrics = evaluate(estimator, x_test, y_test);
  }
  emit_report(common, render_estimate_report(config, estimator, train_metrics,
                                             test_metrics ? &*test_metrics : nullptr));
  return 0;
}

int run_crossval(const CommonOptions& common, ExperimentConfig& config,
                 const std::string& groups_path) {
  const DataMatrix x = load_with_format(common.input_x, common.format);
  const DataMatrix y = common.input_y.empty()
                           ? x
                           : load_with_format(common.input_y, common.format);
  if (!groups_path.empty()) {
    const DataMatrix labels = load_with_format(groups_path, common.format);
    if (labels.rows() != 1 && labels.cols() != 1)
      throw ConfigError("--leave-groups expects one label per snapshot (a row or a column)");
    config.group_labels = labels.values();
  }
  config.include_timing = !common.no_timing;
  config.input_x_path = common.input_x;
  config.input_y_path = common.input_y;
  const CvReport report = run_cross_validation(config, x, y);
  emit_report(common, render_cv_report(config, report));
  return 0;
}

int run_bench(const CommonOptions& common, ExperimentConfig& config, const std::string& sizes,
              std::size_t repeats) {
  const std::vector<BenchCase> cases = parse_sizes(sizes);
  const std::vector<BenchRow> rows = run_benchmark(cases, config.algorithm, repeats);
  const std::string csv = benchmark_csv(rows, config.algorithm);
  if (!common.output.empty()) {
    std::ofstream out(common.output, std::ios::binary);
    if (!out) throw ParseError("cannot open " + common.output + " for writing");
    out << csv;
  } else if (!common.quiet) {
    std::cout << csv;
  }
  return 0;
}

int run_synth(std::size_t n, std::size_t m, std::size_t rank, double noise, std::uint64_t seed,
              const std::string& mode_name, const std::string& out_x, const std::string& out_y,
              const std::string& format_name) {
  const SynthMode mode = synth_mode_from_string(mode_name);
  const MatrixFormat format = matrix_format_from_string(format_name);
  const SynthData data = synthesize_field(n, m, rank, noise, seed, mode);
  save_matrix(data.x, out_x, format);
  if (!out_y.empty()) save_matrix(data.y, out_y, format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"greedy sensor selection for ridge-regression estimation"};
  app.require_subcommand(1);

  CommonOptions common;
  ExperimentConfig config;
  std::string algorithm_name = "greg";
  std::optional<double> est_lambda;
  std::optional<std::size_t> rank;
  std::vector<int> indices;
  std::string test_x_path, test_y_path, groups_path;
  std::string sizes_spec;
  std::size_t repeats = 5;
  std::size_t synth_n = 0, synth_m = 0, synth_rank = 1;
  double synth_noise = 0.0;
  std::string synth_mode = "reconstruction";
  std::string synth_out_x, synth_out_y;
  std::string synth_format = "csv";

  const auto add_algorithm = [&](CLI::App* cmd) {
    cmd->add_option("--algorithm", algorithm_name,
                    "selector: greg, naive, reg, somp, dg, or bdg");
  };
  const auto add_selection_options = [&](CLI::App* cmd) {
    cmd->add_option("--sensors", config.budget_p, "sensor budget p")->required();
    cmd->add_option("--lambda", config.lambda_tilde, "per-sample ridge weight for selection");
    cmd->add_option("--rank", rank, "SVD reduction rank for the selection-side output");
    cmd->add_option("--seed", config.seed, "seed for randomized pieces");
    cmd->add_flag("--center", config.center, "subtract training row means");
  };

  CLI::App* select_cmd = app.add_subcommand("select", "select sensors on a full data set");
  add_algorithm(select_cmd);
  add_selection_options(select_cmd);
  add_common(select_cmd, common);

  CLI::App* estimate_cmd =
      app.add_subcommand("estimate", "fit and score a ridge estimator for given sensors");
  estimate_cmd->add_option("--indices", indices, "1-based sensor indices")
      ->required()
      ->delimiter(',');
  estimate_cmd->add_option("--lambda", config.lambda_tilde, "per-sample ridge weight");
  estimate_cmd->add_option("--test-x", test_x_path, "held-out snapshot matrix");
  estimate_cmd->add_option("--test-y", test_y_path, "held-out output matrix");
  add_common(estimate_cmd, common);

  CLI::App* crossval_cmd = app.add_subcommand("crossval", "k-fold cross-validation");
  add_algorithm(crossval_cmd);
  add_selection_options(crossval_cmd);
  crossval_cmd->add_option("--est-lambda", est_lambda,
                           "per-sample ridge weight for estimation (default: --lambda)");
  crossval_cmd->add_option("--folds", config.folds, "fold count (≥ 2)");
  crossval_cmd->add_option("--leave-groups", groups_path,
                           "single-row label matrix; one fold per distinct label");
  add_common(crossval_cmd, common);

  CLI::App* bench_cmd = app.add_subcommand("bench", "selection wall-time benchmark");
  add_algorithm(bench_cmd);
  bench_cmd->add_option("--sizes", sizes_spec, "comma list of N:M:Ny:p cases")->required();
  bench_cmd->add_option("--repeats", repeats, "runs per case (median reported)");
  add_common(bench_cmd, common, /*with_inputs=*/false);

  CLI::App* synth_cmd = app.add_subcommand("synth", "write synthetic snapshot data");
  synth_cmd->add_option("--n", synth_n, "candidate count")->required();
  synth_cmd->add_option("--m", synth_m, "snapshot count")->required();
  synth_cmd->add_option("--rank", synth_rank, "latent rank")->required();
  synth_cmd->add_option("--noise", synth_noise, "noise level relative to signal RMS");
  synth_cmd->add_option("--seed", config.seed, "stream seed");
  synth_cmd->add_option("--mode", synth_mode, "reconstruction or estimation");
  synth_cmd->add_option("--output-x", synth_out_x, "where to write x")->required();
  synth_cmd->add_option("--output-y", synth_out_y, "where to write y");
  synth_cmd->add_option("--format", synth_format, "csv or dmat");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    config.algorithm = algorithm_from_string(algorithm_name);
    config.estimation_lambda_tilde = est_lambda;
    config.reduction_rank = rank;
    if (select_cmd->parsed()) return run_select(common, config);
    if (estimate_cmd->parsed()) return run_estimate(common, config, indices, test_x_path,
                                                    test_y_path);
    if (crossval_cmd->parsed()) return run_crossval(common, config, groups_path);
    if (bench_cmd->parsed()) return run_bench(common, config, sizes_spec, repeats);
    if (synth_cmd->parsed())
      return run_synth(synth_n, synth_m, synth_rank, synth_noise, config.seed, synth_mode,
                       synth_out_x, synth_out_y, synth_format);
    std::cerr << "no subcommand given\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidMatrix& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const DimensionMismatch& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidBudget& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
