#include "sensorsel/ridge.hpp"

#include <cmath>
#include <string>

#include "sensorsel/errors.hpp"
#include "sensorsel/linalg.hpp"

namespace sensorsel {

RidgeEstimator ridge_fit(const SelectionProblem& problem, std::span<const int> s) {
  const DataMatrix& y = problem.y;
  const std::size_t m = problem.snapshot_count();

  RidgeEstimator est;
  est.sensor_indices.assign(s.begin(), s.end());
  est.lambda_tilde = problem.lambda_tilde;

  if (s.empty()) {
    est.gain = DataMatrix(y.rows(), 0);
    est.training_cost = y.squared_frobenius_norm() / static_cast<double>(m);
    return est;
  }

  const DataMatrix xs = problem.x.select_rows(s);
  DataMatrix a = multiply_abt(xs, xs);
  const double lambda = problem.lambda();
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += lambda;
  auto factor = CholeskyFactor::try_compute(a);
  if (!factor) throw InfeasibleSubset("X_S X_S^T + lambda I is not positive definite");

  const DataMatrix b = multiply_abt(xs, y);  // k × N_y
  const DataMatrix v = factor->solve(b);     // A⁻¹ X_S Yᵀ
  est.gain = v.transposed();                 // K = Y X_Sᵀ A⁻¹

  // J(S) = tr{Bᵀ A⁻¹ B}; the training cost is (tr(YYᵀ) − J(S)) / M.
  double j = 0.0;
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t jcol = 0; jcol < b.cols(); ++jcol) j += b(i, jcol) * v(i, jcol);
  est.training_cost = (y.squared_frobenius_norm() - j) / static_cast<double>(m);
  return est;
}

std::vector<double> predict(const RidgeEstimator& estimator, std::span<const double> x_new) {
  if (x_new.size() != estimator.sensor_indices.size())
    throw DimensionMismatch("measurement vector has " + std::to_string(x_new.size()) +
                            " entries for " + std::to_string(estimator.sensor_indices.size()) +
                            " sensors");
  return matvec(estimator.gain, x_new);
}

EvalMetrics evaluate(const RidgeEstimator& estimator, const DataMatrix& x_test,
                     const DataMatrix& y_test) {
  if (x_test.cols() != y_test.cols())
    throw DimensionMismatch("test snapshot counts differ between x and y");
  if (y_test.rows() != estimator.gain.rows())
    throw DimensionMismatch("test output rows differ from the estimator's output size");

  const DataMatrix xs = x_test.select_rows(estimator.sensor_indices);
  const DataMatrix fit = multiply(estimator.gain, xs);  // N_y × M_test

  DataMatrix diff = y_test;
  for (std::size_t i = 0; i < diff.rows(); ++i)
    for (std::size_t j = 0; j < diff.cols(); ++j) diff(i, j) -= fit(i, j);

  EvalMetrics metrics;
  metrics.gain_norm = estimator.gain.frobenius_norm();
  const double error_norm = diff.frobenius_norm();
  const double test_norm = y_test.frobenius_norm();
  if (test_norm > 0.0) {
    metrics.normalized_frobenius_error = error_norm / test_norm;
  } else {
    metrics.normalized_frobenius_error = error_norm;
    metrics.absolute_error = true;
  }
  metrics.rmse_per_row.resize(diff.rows());
  const double inv_m = 1.0 / static_cast<double>(diff.cols());
  for (std::size_t i = 0; i < diff.rows(); ++i)
    metrics.rmse_per_row[i] = std::sqrt(squared_norm(diff.row(i)) * inv_m);
  return metrics;
}

}  // namespace sensorsel
