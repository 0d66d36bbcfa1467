#pragma once

#include <span>
#include <vector>

#include "sensorsel/matrix.hpp"
#include "sensorsel/selection.hpp"

namespace sensorsel {

/// Ridge-regression gain for a fixed sensor set:
/// K = Y X_Sᵀ (X_S X_Sᵀ + λI)⁻¹, with the training cost it achieves.
struct RidgeEstimator {
  DataMatrix gain;                  // N_y × |S|
  std::vector<int> sensor_indices;  // 1-based, selection order
  double lambda_tilde = 0.0;
  double training_cost = 0.0;       // (1/M)‖Y − K X_S‖_F² + λ̃‖K‖_F²
};

/// Fit the gain by factor-and-solve on the |S|×|S| Gram matrix.
/// Throws InfeasibleSubset when X_S X_Sᵀ + λI is not positive definite.
RidgeEstimator ridge_fit(const SelectionProblem& problem, std::span<const int> s);

/// Estimate the output for one measurement vector at the selected sensors.
std::vector<double> predict(const RidgeEstimator& estimator, std::span<const double> x_new);

struct EvalMetrics {
  double normalized_frobenius_error = 0.0;  // ‖Y − K X_S‖_F / ‖Y‖_F
  std::vector<double> rmse_per_row;
  double gain_norm = 0.0;
  bool absolute_error = false;  // set when ‖Y_test‖_F = 0; the error is then absolute
};

/// Apply the estimator to held-out data. x_test carries all N candidate
/// rows; the estimator picks out its own sensors.
EvalMetrics evaluate(const RidgeEstimator& estimator, const DataMatrix& x_test,
                     const DataMatrix& y_test);

}  // namespace sensorsel
