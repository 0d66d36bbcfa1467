#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sensorsel/matrix.hpp"
#include "sensorsel/selection.hpp"

namespace sensorsel {

enum class Algorithm { Greg, Naive, Reg, Somp, Dg, Bdg };
Algorithm algorithm_from_string(std::string_view name);
std::string_view to_string(Algorithm algorithm);

enum class SynthMode { Reconstruction, Estimation };
SynthMode synth_mode_from_string(std::string_view name);
std::string_view to_string(SynthMode mode);

/// Settings for one experiment run. Selection-side and estimation-side
/// regularization are independent: estimators are always fit on the full
/// output with estimation_lambda_tilde (defaulting to lambda_tilde), while
/// selection may run on reduced outputs with lambda_tilde.
struct ExperimentConfig {
  Algorithm algorithm = Algorithm::Greg;
  std::size_t budget_p = 1;
  double lambda_tilde = 0.0;
  std::optional<double> estimation_lambda_tilde;
  std::optional<std::size_t> reduction_rank;
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  bool center = false;
  bool include_timing = true;
  std::string input_x_path;
  std::string input_y_path;
  std::string output_path;
  std::optional<std::vector<double>> group_labels;  // leave-groups CV

  double estimation_lambda() const {
    return estimation_lambda_tilde ? *estimation_lambda_tilde : lambda_tilde;
  }
};

struct FoldOutcome {
  std::vector<int> indices;
  std::vector<double> train_error_curve;  // per sensor count 1..p
  std::vector<double> test_error_curve;
  std::vector<double> gain_norm_curve;
  double selection_seconds = 0.0;
};

struct CurveStats {
  std::vector<double> mean;
  std::vector<double> standard_error;
};

struct CvReport {
  std::vector<FoldOutcome> folds;
  CurveStats train_error;
  CurveStats test_error;
  CurveStats gain_norm;
  std::string environment;
};

struct Centered {
  DataMatrix train;
  DataMatrix test;
  std::vector<double> means;  // training-set row means
};

/// Subtract each row's training mean from both partitions.
Centered center_columns_by_row_mean(const DataMatrix& train, const DataMatrix& test);

struct SynthData {
  DataMatrix x;
  DataMatrix y;
};

/// Seeded synthetic snapshot data: x = A·B + noise for normal A (n×rank)
/// and B (rank×m); noise_sigma scales the noise to the RMS of A·B. The
/// output is the snapshot matrix itself (reconstruction) or one hidden
/// linear response of the latent rows (estimation).
SynthData synthesize_field(std::size_t n, std::size_t m, std::size_t rank, double noise_sigma,
                           std::uint64_t seed, SynthMode mode);

/// Snapshot columns per fold (test partitions): a seeded shuffle cut into
/// contiguous blocks. Every column appears in exactly one fold.
std::vector<std::vector<std::size_t>> assign_folds(std::size_t snapshot_count, std::size_t folds,
                                                   std::uint64_t seed);

/// Leave-groups partitions: one fold per distinct label, ascending.
std::vector<std::vector<std::size_t>> assign_group_folds(std::span<const double> labels);

/// Selector dispatch; reduction_rank swaps the selection-side output for
/// its leading SVD modes (greg/naive/somp) or sets the mode count (dg/bdg,
/// default 10 clamped to min(N, M)).
SelectionResult run_selector(Algorithm algorithm, const SelectionProblem& problem,
                             std::optional<std::size_t> reduction_rank);

/// k-fold cross-validation: selection on each training partition
/// (optionally on reduced outputs), then ridge estimators fit per sensor
/// count on the full training output and scored on the held-out fold.
CvReport run_cross_validation(const ExperimentConfig& config, const DataMatrix& x,
                              const DataMatrix& y);

struct BenchCase {
  std::size_t n = 0, m = 0, n_y = 0, p = 0;
};

struct BenchRow {
  BenchCase size;
  double median_seconds = 0.0;
  std::vector<double> run_seconds;
};

/// Median selection wall time per size over `repeats` runs on seeded
/// synthetic data.
std::vector<BenchRow> run_benchmark(std::span<const BenchCase> sizes, Algorithm algorithm,
                                    std::size_t repeats);
std::string benchmark_csv(std::span<const BenchRow> rows, Algorithm algorithm);

/// Compiler/platform fingerprint embedded in reports.
std::string environment_fingerprint();

}  // namespace sensorsel
