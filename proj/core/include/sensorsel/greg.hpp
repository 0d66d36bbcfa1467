#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sensorsel/matrix.hpp"
#include "sensorsel/selection.hpp"

namespace sensorsel {

/// Recurrence state of the fast greedy selector.
///
/// f holds the score numerators ‖(Q^{xy}_i)ᵀ‖², g the denominators
/// Q^{xx}_{i,i}, both indexed by 0-based candidate position. The Ξ and Θ
/// blocks accumulate one column per completed update, so after k updates
/// they describe Q(S̄_k) exactly; the update after the final selection is
/// skipped, which leaves the blocks one step behind `selected` at the end
/// of a full run. Everything beyond the problem data is O((N + N_y)·p).
struct GregState {
  std::vector<double> f;
  std::vector<double> g;
  std::vector<int> feasible;  // 0-based candidate positions, ascending
  std::vector<int> selected;  // 1-based labels in selection order
  double lambda = 0.0;
  double tol = 0.0;              // feasibility floor for g
  double score_scale = 0.0;      // ‖Y‖_F², the argmax tie band's scale
  double last_increment = 0.0;   // objective gain of the latest step

  std::size_t candidate_count() const { return f.size(); }
  std::size_t output_count() const { return theta_rows; }
  std::size_t block_columns() const { return block_cols; }

  std::span<const double> xi_row(std::size_t i) const {
    return {xi_data.data() + i * block_capacity, block_cols};
  }
  std::span<const double> theta_row(std::size_t j) const {
    return {theta_data.data() + j * block_capacity, block_cols};
  }
  DataMatrix xi_block() const;     // N × k copy of Ξ
  DataMatrix theta_block() const;  // N_y × k copy of Θ

  // Row-major buffers with a fixed column stride of block_capacity.
  std::vector<double> xi_data;
  std::vector<double> theta_data;
  std::size_t block_capacity = 0;
  std::size_t block_cols = 0;
  std::size_t theta_rows = 0;
};

/// Initial state: f_i = ‖Y X_iᵀ‖², g_i = X_i X_iᵀ + λ, empty blocks,
/// every candidate feasible. The feasibility floor is 1e-10 · max(g).
GregState greg_init(const SelectionProblem& problem);

/// Candidates that survive the feasibility refresh {i ∈ 𝓘 \ S : g_i > tol}.
/// This is exactly the set greg_step scores over.
std::vector<int> greg_feasible_candidates(const GregState& state);

/// One greedy step: refreshes the feasible set, picks argmax f_i/g_i
/// (lowest index on ties; negative f clamps to zero), and, unless the
/// budget is now full, runs the rank-one recurrence update of f, g, Ξ, Θ.
/// Returns the chosen 1-based label. Throws FeasibleSetExhausted when no
/// candidate survives the refresh.
int greg_step(GregState& state, const SelectionProblem& problem);

/// Full fast greedy selection; selects identically to naive_greedy.
SelectionResult greg_select(const SelectionProblem& problem);

/// Materialize Q^{xx} = XXᵀ + λI − ΞΞᵀ, Q^{xy} = XYᵀ − ΞΘᵀ, and
/// Q^{yy} = YYᵀ − ΘΘᵀ from the state's blocks (validation helper).
OracleState greg_diagnostics(const GregState& state, const SelectionProblem& problem);

}  // namespace sensorsel
