#pragma once

#include <span>
#include <string>
#include <string_view>

#include "sensorsel/harness.hpp"
#include "sensorsel/ridge.hpp"
#include "sensorsel/selection.hpp"

namespace sensorsel {

/// Flat `key = value` report document with stable key ordering, so that
/// identical runs produce byte-identical files. Doubles print with full
/// round-trip precision.
class ReportWriter {
 public:
  explicit ReportWriter(std::string_view command);

  void kv(std::string_view key, std::string_view value);
  void kv(std::string_view key, const std::string& value) { kv(key, std::string_view(value)); }
  void kv(std::string_view key, const char* value) { kv(key, std::string_view(value)); }
  void kv(std::string_view key, double value);
  void kv(std::string_view key, std::size_t value);
  void kv(std::string_view key, bool value);
  void kv_ints(std::string_view key, std::span<const int> values);
  void kv_doubles(std::string_view key, std::span<const double> values);

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

/// Shared config echo written at the top of every report.
void echo_config(ReportWriter& writer, const ExperimentConfig& config);

std::string render_selection_report(const ExperimentConfig& config,
                                    const SelectionProblem& problem,
                                    const SelectionResult& result);

std::string render_estimate_report(const ExperimentConfig& config, const RidgeEstimator& estimator,
                                   const EvalMetrics& train_metrics,
                                   const EvalMetrics* test_metrics);

std::string render_cv_report(const ExperimentConfig& config, const CvReport& report);

}  // namespace sensorsel
