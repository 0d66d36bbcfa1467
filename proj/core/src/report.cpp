#include "sensorsel/report.hpp"

#include "sensorsel/io.hpp"

namespace sensorsel {

ReportWriter::ReportWriter(std::string_view command) {
  text_ = "sensorsel report v1\n";
  kv("command", command);
}

void ReportWriter::kv(std::string_view key, std::string_view value) {
  text_.append(key);
  text_.append(" = ");
  text_.append(value);
  text_.push_back('\n');
}

void ReportWriter::kv(std::string_view key, double value) { kv(key, format_double(value)); }

void ReportWriter::kv(std::string_view key, std::size_t value) { kv(key, std::to_string(value)); }

void ReportWriter::kv(std::string_view key, bool value) { kv(key, value ? "true" : "false"); }

void ReportWriter::kv_ints(std::string_view key, std::span<const int> values) {
  std::string joined = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) joined += ", ";
    joined += std::to_string(values[i]);
  }
  joined += "]";
  kv(key, joined);
}

void ReportWriter::kv_doubles(std::string_view key, std::span<const double> values) {
  std::string joined = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) joined += ", ";
    joined += format_double(values[i]);
  }
  joined += "]";
  kv(key, joined);
}

void echo_config(ReportWriter& writer, const ExperimentConfig& config) {
  writer.kv("config.algorithm", to_string(config.algorithm));
  writer.kv("config.sensors", config.budget_p);
  writer.kv("config.lambda", config.lambda_tilde);
  if (config.estimation_lambda_tilde)
    writer.kv("config.estimation-lambda", *config.estimation_lambda_tilde);
  if (config.reduction_rank) writer.kv("config.rank", *config.reduction_rank);
  writer.kv("config.folds", config.folds);
  writer.kv("config.seed", config.seed);
  writer.kv("config.center", config.center);
  if (!config.input_x_path.empty()) writer.kv("config.input-x", config.input_x_path);
  if (!config.input_y_path.empty()) writer.kv("config.input-y", config.input_y_path);
  if (config.group_labels) writer.kv("config.leave-groups", true);
}

std::string render_selection_report(const ExperimentConfig& config,
                                    const SelectionProblem& problem,
                                    const SelectionResult& result) {
  ReportWriter writer("select");
  echo_config(writer, config);
  writer.kv("data.candidates", problem.x.rows());
  writer.kv("data.snapshots", problem.x.cols());
  writer.kv("data.outputs", problem.y.rows());
  writer.kv_ints("selection.indices", result.indices);
  writer.kv_doubles("selection.trajectory", result.objective_trajectory);
  writer.kv("selection.termination", to_string(result.termination));
  if (config.include_timing) {
    writer.kv_doubles("timing.step-seconds", result.step_times);
    double total = 0.0;
    for (double t : result.step_times) total += t;
    writer.kv("timing.total-seconds", total);
  }
  writer.kv("environment", environment_fingerprint());
  return writer.text();
}

std::string render_estimate_report(const ExperimentConfig& config, const RidgeEstimator& estimator,
                                   const EvalMetrics& train_metrics,
                                   const EvalMetrics* test_metrics) {
  ReportWriter writer("estimate");
  echo_config(writer, config);
  writer.kv_ints("estimator.indices", estimator.sensor_indices);
  writer.kv("estimator.training-cost", estimator.training_cost);
  writer.kv("estimator.gain-norm", train_metrics.gain_norm);
  writer.kv("train.normalized-error", train_metrics.normalized_frobenius_error);
  writer.kv("train.absolute-error-flag", train_metrics.absolute_error);
  writer.kv_doubles("train.rmse-per-row", train_metrics.rmse_per_row);
  if (test_metrics) {
    writer.kv("test.normalized-error", test_metrics->normalized_frobenius_error);
    writer.kv("test.absolute-error-flag", test_metrics->absolute_error);
    writer.kv_doubles("test.rmse-per-row", test_metrics->rmse_per_row);
  }
  writer.kv("environment", environment_fingerprint());
  return writer.text();
}

std::string render_cv_report(const ExperimentConfig& config, const CvReport& report) {
  ReportWriter writer("crossval");
  echo_config(writer, config);
  writer.kv("cv.folds", report.folds.size());
  for (std::size_t b = 0; b < report.folds.size(); ++b) {
    const FoldOutcome& fold = report.folds[b];
    const std::string prefix = "fold." + std::to_string(b + 1) + ".";
    writer.kv_ints(prefix + "indices", fold.indices);
    writer.kv(prefix + "train-error", fold.train_error_curve.back());
    writer.kv(prefix + "test-error", fold.test_error_curve.back());
    writer.kv(prefix + "gain-norm", fold.gain_norm_curve.back());
    if (config.include_timing) writer.kv(prefix + "selection-seconds", fold.selection_seconds);
  }
  writer.kv_doubles("aggregate.train-error.mean", report.train_error.mean);
  writer.kv_doubles("aggregate.train-error.stderr", report.train_error.standard_error);
  writer.kv_doubles("aggregate.test-error.mean", report.test_error.mean);
  writer.kv_doubles("aggregate.test-error.stderr", report.test_error.standard_error);
  writer.kv_doubles("aggregate.gain-norm.mean", report.gain_norm.mean);
  writer.kv_doubles("aggregate.gain-norm.stderr", report.gain_norm.standard_error);
  writer.kv("environment", report.environment);
  return writer.text();
}

}  // namespace sensorsel
