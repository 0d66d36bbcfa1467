#include "sensorsel/output_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sensorsel/detail/tiebreak.hpp"
#include "sensorsel/errors.hpp"
#include "sensorsel/greg.hpp"
#include "sensorsel/linalg.hpp"

namespace sensorsel {

ReducedOutput reduce_output(const DataMatrix& y_full, std::size_t r) {
  const std::size_t q = std::min(y_full.rows(), y_full.cols());
  if (r < 1 || r > q)
    throw InvalidBudget("reduction rank " + std::to_string(r) + " outside 1.." +
                        std::to_string(q));
  const ThinSvd svd = thin_svd(y_full);
  const std::size_t r_eff = std::min(r, std::max<std::size_t>(svd.numerical_rank, 1));

  ReducedOutput out;
  out.r = r_eff;
  out.original_output_rows = y_full.rows();
  out.z = DataMatrix(r_eff, y_full.cols());
  for (std::size_t i = 0; i < r_eff; ++i) {
    const double sigma = svd.singular_values[i];
    const auto v_row = svd.right_vectors_t.row(i);
    auto z_row = out.z.row(i);
    for (std::size_t j = 0; j < v_row.size(); ++j) z_row[j] = sigma * v_row[j];
  }
  out.left_modes = DataMatrix(y_full.rows(), r_eff);
  for (std::size_t i = 0; i < y_full.rows(); ++i)
    for (std::size_t j = 0; j < r_eff; ++j) out.left_modes(i, j) = svd.left_vectors(i, j);

  double energy = 0.0;
  for (std::size_t i = r_eff; i < q; ++i)
    energy += svd.singular_values[i] * svd.singular_values[i];
  out.truncated_energy = energy;
  return out;
}

TruncationCheck truncation_bound_check(const SelectionProblem& problem_full,
                                       const ReducedOutput& reduced,
                                       std::span<const int> s) {
  TruncationCheck check;
  check.truncated_energy = reduced.truncated_energy;
  check.j_full = objective(problem_full, s);

  SelectionProblem problem_reduced{problem_full.x, reduced.z, problem_full.lambda_tilde,
                                   problem_full.budget_p};
  check.j_reduced = objective(problem_reduced, s);

  const double diff = check.j_full - check.j_reduced;
  if (diff < -1e-8 || diff > check.truncated_energy + 1e-8)
    throw NumericalBreakdown("truncation bound violated: J_full - J_reduced = " +
                             std::to_string(diff) + ", truncated energy = " +
                             std::to_string(check.truncated_energy));
  return check;
}

std::size_t coincidence_certificate(const SelectionProblem& problem_reduced,
                                    double truncated_energy) {
  problem_reduced.validate();
  GregState state = greg_init(problem_reduced);
  std::size_t certified = 0;

  for (std::size_t step = 0; step < problem_reduced.budget_p; ++step) {
    const std::vector<int> candidates = greg_feasible_candidates(state);
    if (candidates.empty()) break;

    std::vector<double> scores(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const std::size_t u = static_cast<std::size_t>(candidates[c]);
      scores[c] = std::max(state.f[u], 0.0) / state.g[u];
    }
    const std::size_t winner = static_cast<std::size_t>(
        detail::argmax_lowest_tie(candidates, scores, state.score_scale));

    double runner_up = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < scores.size(); ++c) {
      if (c != winner && scores[c] > runner_up) runner_up = scores[c];
    }
    const double gap = candidates.size() < 2
                           ? std::numeric_limits<double>::infinity()
                           : scores[winner] - runner_up;
    if (!(gap > truncated_energy)) break;
    certified = step + 1;
    greg_step(state, problem_reduced);
  }
  return certified;
}

}  // namespace sensorsel
