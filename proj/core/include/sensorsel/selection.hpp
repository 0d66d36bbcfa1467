#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sensorsel/matrix.hpp"

namespace sensorsel {

/// A sensor-selection instance: input snapshots x (one candidate sensor per
/// row), output snapshots y, per-sample ridge weight λ̃, and a sensor budget.
/// The effective regularizer is λ = M·λ̃ with M the snapshot count.
struct SelectionProblem {
  DataMatrix x;              // N × M
  DataMatrix y;              // N_y × M
  double lambda_tilde = 0.0;
  std::size_t budget_p = 0;

  std::size_t candidate_count() const { return x.rows(); }
  std::size_t output_count() const { return y.rows(); }
  std::size_t snapshot_count() const { return x.cols(); }
  double lambda() const { return static_cast<double>(x.cols()) * lambda_tilde; }

  /// Throws when the bundle violates its invariants.
  void validate() const;
};

enum class Termination { BudgetReached, FeasibleSetExhausted };
std::string_view to_string(Termination t);

/// Outcome of a greedy selector: chosen sensors in selection order (1-based
/// labels), the objective value after each step, and per-step wall times.
struct SelectionResult {
  std::vector<int> indices;
  std::vector<double> objective_trajectory;
  std::vector<double> step_times;  // seconds
  Termination termination = Termination::BudgetReached;
};

/// The Q-matrices of the selection objective, materialized explicitly.
/// Intended for validation at small sizes; the fast selector never forms
/// these during a run.
struct OracleState {
  DataMatrix q_xx;  // N × N
  DataMatrix q_xy;  // N × N_y
  DataMatrix q_yy;  // N_y × N_y
};

/// J(S) = tr{Y X_Sᵀ (X_S X_Sᵀ + λI)⁻¹ X_S Yᵀ}, evaluated by factor-and-solve.
/// J(∅) = 0. Throws InfeasibleSubset when X_S X_Sᵀ + λI is not positive
/// definite within tolerance.
double objective(const SelectionProblem& problem, std::span<const int> s);

/// True iff X_S X_Sᵀ + λI succeeds a tolerance-guarded Cholesky
/// factorization. Always true for λ > 0.
bool is_feasible(const SelectionProblem& problem, std::span<const int> s);

/// Plain greedy selection with the objective evaluated from scratch for
/// every candidate at every step; the correctness oracle for the fast
/// selector. Ties take the lowest index. Stops early with
/// FeasibleSetExhausted when no feasible candidate remains.
SelectionResult naive_greedy(const SelectionProblem& problem);

struct ExhaustiveOptimum {
  std::vector<int> indices;  // ascending
  double value = 0.0;
};

/// Brute-force optimum over feasible subsets of size ≤ budget_p. Guarded:
/// throws TooLargeForExhaustive when the enumeration would be too big.
ExhaustiveOptimum exhaustive_optimum(const SelectionProblem& problem);

/// Q^{xx}(S), Q^{xy}(S), Q^{yy}(S) computed from their definitions.
OracleState oracle_state(const SelectionProblem& problem, std::span<const int> s);

}  // namespace sensorsel
