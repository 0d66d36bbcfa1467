#pragma once

#include <cstddef>
#include <span>

#include "sensorsel/matrix.hpp"
#include "sensorsel/selection.hpp"

namespace sensorsel {

/// Rank-r reduction of an output matrix Ỹ: Z = Σ_{1:r} V_{1:r} holds the
/// leading SVD modes, and truncated_energy = Σ_{i>r} σ_i² bounds how far
/// any selection objective computed on Z can sit below the one on Ỹ.
struct ReducedOutput {
  DataMatrix z;             // r × M
  DataMatrix left_modes;    // N_ỹ × r
  double truncated_energy = 0.0;
  std::size_t r = 0;        // effective rank kept (clamped to numerical rank)
  std::size_t original_output_rows = 0;
};

/// Reduce y_full to its leading r SVD modes. Requesting more than the
/// numerical rank clamps r (trailing modes carry no energy); requesting
/// more than min(rows, cols) is an error.
ReducedOutput reduce_output(const DataMatrix& y_full, std::size_t r);

struct TruncationCheck {
  double j_full = 0.0;
  double j_reduced = 0.0;
  double truncated_energy = 0.0;
};

/// Evaluate J on the full and reduced outputs for the same subset and
/// enforce 0 − 1e-8 ≤ J_Ỹ(S) − J_Z(S) ≤ truncated_energy + 1e-8; a
/// violation indicates an implementation defect and throws
/// NumericalBreakdown.
TruncationCheck truncation_bound_check(const SelectionProblem& problem_full,
                                       const ReducedOutput& reduced,
                                       std::span<const int> s);

/// Run the greedy selection on the reduced problem and count how many
/// leading picks are certified to coincide with the full-output greedy:
/// the largest k' such that at every step k ≤ k' the winning increment
/// beats the runner-up by more than truncated_energy. A step with a single
/// feasible candidate certifies unconditionally. k' = 0 is a valid answer.
std::size_t coincidence_certificate(const SelectionProblem& problem_reduced,
                                    double truncated_energy);

}  // namespace sensorsel
