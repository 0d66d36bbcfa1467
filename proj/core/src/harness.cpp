#include "sensorsel/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <string>

#include "sensorsel/baselines.hpp"
#include "sensorsel/errors.hpp"
#include "sensorsel/greg.hpp"
#include "sensorsel/io.hpp"
#include "sensorsel/output_reduction.hpp"
#include "sensorsel/ridge.hpp"
#include "sensorsel/rng.hpp"

namespace sensorsel {

Algorithm algorithm_from_string(std::string_view name) {
  if (name == "greg") return Algorithm::Greg;
  if (name == "naive") return Algorithm::Naive;
  if (name == "reg") return Algorithm::Reg;
  if (name == "somp") return Algorithm::Somp;
  if (name == "dg") return Algorithm::Dg;
  if (name == "bdg") return Algorithm::Bdg;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Greg: return "greg";
    case Algorithm::Naive: return "naive";
    case Algorithm::Reg: return "reg";
    case Algorithm::Somp: return "somp";
    case Algorithm::Dg: return "dg";
    case Algorithm::Bdg: return "bdg";
  }
  return "unknown";
}

SynthMode synth_mode_from_string(std::string_view name) {
  if (name == "reconstruction") return SynthMode::Reconstruction;
  if (name == "estimation") return SynthMode::Estimation;
  throw ConfigError("unknown synth mode '" + std::string(name) + "'");
}

std::string_view to_string(SynthMode mode) {
  return mode == SynthMode::Reconstruction ? "reconstruction" : "estimation";
}

Centered center_columns_by_row_mean(const DataMatrix& train, const DataMatrix& test) {
  if (train.rows() != test.rows())
    throw DimensionMismatch("train and test partitions have different row counts");
  Centered out{train, test, std::vector<double>(train.rows())};
  const double inv_m = 1.0 / static_cast<double>(train.cols());
  for (std::size_t i = 0; i < train.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < train.cols(); ++j) sum += train(i, j);
    const double mean = sum * inv_m;
    out.means[i] = mean;
    for (std::size_t j = 0; j < out.train.cols(); ++j) out.train(i, j) -= mean;
    for (std::size_t j = 0; j < out.test.cols(); ++j) out.test(i, j) -= mean;
  }
  return out;
}

SynthData synthesize_field(std::size_t n, std::size_t m, std::size_t rank, double noise_sigma,
                           std::uint64_t seed, SynthMode mode) {
  if (rank < 1 || rank > std::min(n, m))
    throw InvalidBudget("synthetic rank " + std::to_string(rank) + " outside 1.." +
                        std::to_string(std::min(n, m)));
  RandomStream rng(seed);

  DataMatrix a(n, rank);
  for (double& v : a.values()) v = rng.normal();
  DataMatrix b(rank, m);
  for (double& v : b.values()) v = rng.normal();

  SynthData out;
  out.x = multiply(a, b);

  if (mode == SynthMode::Estimation) {
    std::vector<double> response(rank);
    for (double& v : response) v = rng.normal();
    out.y = DataMatrix(1, m);
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < rank; ++k) s += response[k] * b(k, j);
      out.y(0, j) = s;
    }
  }

  if (noise_sigma > 0.0) {
    const double rms =
        std::sqrt(out.x.squared_frobenius_norm() / static_cast<double>(n * m));
    const double scale = noise_sigma * rms;
    for (double& v : out.x.values()) v += scale * rng.normal();
  }
  if (mode == SynthMode::Reconstruction) out.y = out.x;
  return out;
}

std::vector<std::vector<std::size_t>> assign_folds(std::size_t snapshot_count, std::size_t folds,
                                                   std::uint64_t seed) {
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (snapshot_count / folds < 2)
    throw ConfigError("folds of fewer than 2 snapshots: " + std::to_string(snapshot_count) +
                      " snapshots over " + std::to_string(folds) + " folds");

  std::vector<std::size_t> order(snapshot_count);
  for (std::size_t i = 0; i < snapshot_count; ++i) order[i] = i;
  RandomStream rng(seed);
  rng.shuffle(order);

  std::vector<std::vector<std::size_t>> out(folds);
  const std::size_t base = snapshot_count / folds;
  const std::size_t extra = snapshot_count % folds;
  std::size_t cursor = 0;
  for (std::size_t b = 0; b < folds; ++b) {
    const std::size_t take = base + (b < extra ? 1 : 0);
    out[b].assign(order.begin() + cursor, order.begin() + cursor + take);
    std::sort(out[b].begin(), out[b].end());
    cursor += take;
  }
  return out;
}

std::vector<std::vector<std::size_t>> assign_group_folds(std::span<const double> labels) {
  std::map<double, std::vector<std::size_t>> groups;
  for (std::size_t j = 0; j < labels.size(); ++j) groups[labels[j]].push_back(j);
  if (groups.size() < 2) throw ConfigError("leave-groups needs at least 2 distinct labels");
  std::vector<std::vector<std::size_t>> out;
  out.reserve(groups.size());
  for (auto& [label, columns] : groups) out.push_back(std::move(columns));
  return out;
}

SelectionResult run_selector(Algorithm algorithm, const SelectionProblem& problem,
                             std::optional<std::size_t> reduction_rank) {
  switch (algorithm) {
    case Algorithm::Greg:
    case Algorithm::Naive:
    case Algorithm::Somp: {
      const SelectionProblem* active = &problem;
      SelectionProblem reduced_problem;
      if (reduction_rank) {
        const ReducedOutput reduced = reduce_output(problem.y, *reduction_rank);
        reduced_problem =
            SelectionProblem{problem.x, reduced.z, problem.lambda_tilde, problem.budget_p};
        active = &reduced_problem;
      }
      if (algorithm == Algorithm::Greg) return greg_select(*active);
      if (algorithm == Algorithm::Naive) return naive_greedy(*active);
      return somp_select(*active, problem.budget_p);
    }
    case Algorithm::Reg:
      return reg_select(problem.x, problem.budget_p);
    case Algorithm::Dg:
    case Algorithm::Bdg: {
      const std::size_t cap = std::min(problem.x.rows(), problem.x.cols());
      const std::size_t r = reduction_rank ? *reduction_rank : std::min<std::size_t>(10, cap);
      if (algorithm == Algorithm::Dg) return dg_select(problem.x, r, problem.budget_p);
      return bdg_select(problem.x, r, problem.budget_p);
    }
  }
  throw ConfigError("unhandled algorithm");
}

namespace {

CurveStats aggregate_curves(const std::vector<FoldOutcome>& folds,
                            std::vector<double> FoldOutcome::* curve, std::size_t p) {
  CurveStats stats;
  stats.mean.assign(p, 0.0);
  stats.standard_error.assign(p, 0.0);
  const double count = static_cast<double>(folds.size());
  for (std::size_t k = 0; k < p; ++k) {
    double sum = 0.0;
    for (const FoldOutcome& fold : folds) sum += (fold.*curve)[k];
    const double mean = sum / count;
    stats.mean[k] = mean;
    if (folds.size() > 1) {
      double ss = 0.0;
      for (const FoldOutcome& fold : folds) {
        const double d = (fold.*curve)[k] - mean;
        ss += d * d;
      }
      stats.standard_error[k] = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
    }
  }
  return stats;
}

}  // namespace

CvReport run_cross_validation(const ExperimentConfig& config, const DataMatrix& x,
                              const DataMatrix& y) {
  if (x.cols() != y.cols()) throw DimensionMismatch("x and y snapshot counts differ");
  if (config.budget_p < 1) throw ConfigError("sensor budget must be at least 1");
  if (config.budget_p > x.rows()) throw InvalidBudget("sensor budget exceeds candidate count");
  if (config.group_labels && config.group_labels->size() != x.cols())
    throw ConfigError("group-label count differs from snapshot count");

  const std::vector<std::vector<std::size_t>> test_folds =
      config.group_labels ? assign_group_folds(*config.group_labels)
                          : assign_folds(x.cols(), config.folds, config.seed);
  const std::size_t p = config.budget_p;

  CvReport report;
  report.environment = environment_fingerprint();

  for (const std::vector<std::size_t>& test_cols : test_folds) {
    std::vector<char> in_test(x.cols(), 0);
    for (std::size_t c : test_cols) in_test[c] = 1;
    std::vector<std::size_t> train_cols;
    train_cols.reserve(x.cols() - test_cols.size());
    for (std::size_t c = 0; c < x.cols(); ++c) {
      if (!in_test[c]) train_cols.push_back(c);
    }
    if (train_cols.empty()) throw ConfigError("a fold left no training snapshots");

    DataMatrix x_train = x.select_columns(train_cols);
    DataMatrix x_test = x.select_columns(test_cols);
    DataMatrix y_train = y.select_columns(train_cols);
    DataMatrix y_test = y.select_columns(test_cols);
    if (config.center) {
      Centered cx = center_columns_by_row_mean(x_train, x_test);
      x_train = std::move(cx.train);
      x_test = std::move(cx.test);
      Centered cy = center_columns_by_row_mean(y_train, y_test);
      y_train = std::move(cy.train);
      y_test = std::move(cy.test);
    }

    const SelectionProblem selection_problem{x_train, y_train, config.lambda_tilde, p};
    const SelectionResult selection =
        run_selector(config.algorithm, selection_problem, config.reduction_rank);

    FoldOutcome outcome;
    outcome.indices = selection.indices;
    for (double t : selection.step_times) outcome.selection_seconds += t;

    // Estimators are always fit on the full training output; a selector
    // that stopped early keeps its largest prefix for the remaining k.
    const SelectionProblem estimation_problem{x_train, y_train, config.estimation_lambda(), p};
    outcome.train_error_curve.resize(p);
    outcome.test_error_curve.resize(p);
    outcome.gain_norm_curve.resize(p);
    for (std::size_t k = 1; k <= p; ++k) {
      const std::size_t take = std::min<std::size_t>(k, selection.indices.size());
      if (take == 0) throw FeasibleSetExhausted("selection produced no sensors");
      const std::span<const int> prefix(selection.indices.data(), take);
      const RidgeEstimator estimator = ridge_fit(estimation_problem, prefix);
      const EvalMetrics train_metrics = evaluate(estimator, x_train, y_train);
      const EvalMetrics test_metrics = evaluate(estimator, x_test, y_test);
      outcome.train_error_curve[k - 1] = train_metrics.normalized_frobenius_error;
      outcome.test_error_curve[k - 1] = test_metrics.normalized_frobenius_error;
      outcome.gain_norm_curve[k - 1] = test_metrics.gain_norm;
    }
    report.folds.push_back(std::move(outcome));
  }

  report.train_error = aggregate_curves(report.folds, &FoldOutcome::train_error_curve, p);
  report.test_error = aggregate_curves(report.folds, &FoldOutcome::test_error_curve, p);
  report.gain_norm = aggregate_curves(report.folds, &FoldOutcome::gain_norm_curve, p);
  return report;
}

std::vector<BenchRow> run_benchmark(std::span<const BenchCase> sizes, Algorithm algorithm,
                                    std::size_t repeats) {
  if (repeats < 1) throw ConfigError("benchmark needs at least one repeat");
  std::vector<BenchRow> rows;
  rows.reserve(sizes.size());
  std::uint64_t case_id = 0;

  for (const BenchCase& size : sizes) {
    const std::size_t rank = std::min({size.n, size.m, std::size_t{20}});
    RandomStream rng(0x5eed0000ULL + case_id++);
    DataMatrix a(size.n, rank);
    for (double& v : a.values()) v = rng.normal();
    DataMatrix b(rank, size.m);
    for (double& v : b.values()) v = rng.normal();
    DataMatrix c(size.n_y, rank);
    for (double& v : c.values()) v = rng.normal();

    DataMatrix x = multiply(a, b);
    const double rms =
        std::sqrt(x.squared_frobenius_norm() / static_cast<double>(size.n * size.m));
    for (double& v : x.values()) v += 0.01 * rms * rng.normal();
    const DataMatrix y = multiply(c, b);

    const SelectionProblem problem{std::move(x), y, 0.01, size.p};

    BenchRow row;
    row.size = size;
    row.run_seconds.reserve(repeats);
    // One untimed warmup run absorbs first-touch page faults and cold caches.
    (void)run_selector(algorithm, problem, std::nullopt);
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      const SelectionResult result = run_selector(algorithm, problem, std::nullopt);
      const auto t1 = std::chrono::steady_clock::now();
      if (result.indices.empty()) throw NumericalBreakdown("benchmark selection returned nothing");
      row.run_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::vector<double> sorted = row.run_seconds;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    row.median_seconds = sorted.size() % 2 == 1
                             ? sorted[mid]
                             : 0.5 * (sorted[mid - 1] + sorted[mid]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string benchmark_csv(std::span<const BenchRow> rows, Algorithm algorithm) {
  std::string out = "algorithm,n,m,n_y,p,repeats,median_seconds,min_seconds,max_seconds\n";
  for (const BenchRow& row : rows) {
    const auto [min_it, max_it] =
        std::minmax_element(row.run_seconds.begin(), row.run_seconds.end());
    out += std::string(to_string(algorithm)) + ',' + std::to_string(row.size.n) + ',' +
           std::to_string(row.size.m) + ',' + std::to_string(row.size.n_y) + ',' +
           std::to_string(row.size.p) + ',' + std::to_string(row.run_seconds.size()) + ',' +
           format_double(row.median_seconds) + ',' + format_double(*min_it) + ',' +
           format_double(*max_it) + '\n';
  }
  return out;
}

std::string environment_fingerprint() {
#if defined(__clang__)
  std::string compiler = "clang " + std::to_string(__clang_major__) + "." +
                         std::to_string(__clang_minor__);
#elif defined(__GNUC__)
  std::string compiler =
      "gcc " + std::to_string(__GNUC__) + "." + std::to_string(__GNUC_MINOR__);
#else
  std::string compiler = "unknown-compiler";
#endif
#if defined(__linux__)
  const char* platform = "linux";
#elif defined(__APPLE__)
  const char* platform = "darwin";
#elif defined(_WIN32)
  const char* platform = "windows";
#else
  const char* platform = "unknown-platform";
#endif
#if defined(__x86_64__) || defined(_M_X64)
  const char* arch = "x86_64";
#elif defined(__aarch64__)
  const char* arch = "aarch64";
#else
  const char* arch = "unknown-arch";
#endif
  return compiler + ", c++" + std::to_string(__cplusplus / 100 % 100) + ", " + platform + ", " +
         arch;
}

}  // namespace sensorsel
