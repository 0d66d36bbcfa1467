#pragma once

#include <cstddef>
#include <vector>

#include "sensorsel/matrix.hpp"
#include "sensorsel/selection.hpp"

namespace sensorsel {

/// State of the matching-pursuit baseline: the running error matrix
/// E(S) = Y (I − X_Sᵀ(X_S X_Sᵀ)⁻¹X_S) and the picks so far.
struct SompState {
  DataMatrix residual;
  std::vector<int> selected;
};

/// Reconstruction-oriented greedy, the Y = X, λ = 0 specialization of the
/// fast selector. Runs the same recurrences without storing a Θ block
/// (with Y = X and λ = 0 the θ vector coincides with ξ) and with the same
/// feasible-set guard, so its picks match greg_select on (X, Y=X, λ̃=0)
/// index for index.
SelectionResult reg_select(const DataMatrix& x, std::size_t p);

/// Simultaneous orthogonal matching pursuit. Each step adds the candidate
/// maximizing ‖E(S)X_iᵀ‖² / (X_i X_iᵀ) among rows with nonnegligible norm
/// that are not already spanned by the selected rows, then recomputes E(S)
/// by exact least-squares projection. The problem's λ̃ plays no role.
/// The trajectory records ‖Y‖_F² − ‖E(S_k)‖_F².
SelectionResult somp_select(const SelectionProblem& problem, std::size_t p);

/// Determinant-based greedy on the r dominant left singular vectors Φ of x.
/// While k ≤ r it maximizes det(Φ_S Φ_Sᵀ), which reproduces QR column
/// pivoting on Φᵀ; past r it maximizes det(Φ_SᵀΦ_S) through the matrix
/// determinant lemma, with the maintained factor rebuilt every 25 steps.
/// The trajectory records log-determinants.
SelectionResult dg_select(const DataMatrix& x, std::size_t r, std::size_t p);

/// Bayesian determinant-based greedy: minimizes
/// det{WWᵀ − W X_Sᵀ(X_S X_Sᵀ)⁻¹ X_S Wᵀ} for W the data matrix of the r
/// dominant SVD modes of x, over candidates keeping X_S X_Sᵀ positive
/// definite. The trajectory records the (nonincreasing) log-determinant;
/// the run stops early once the posterior volume collapses to numerical
/// zero, since no candidate can be ranked from there.
SelectionResult bdg_select(const DataMatrix& x, std::size_t r, std::size_t p);

/// Same, with a caller-supplied mode matrix w (r × M).
SelectionResult bdg_select_with_modes(const DataMatrix& x, const DataMatrix& w, std::size_t p);

}  // namespace sensorsel
