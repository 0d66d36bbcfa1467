#include "sensorsel/selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "sensorsel/detail/tiebreak.hpp"
#include "sensorsel/errors.hpp"
#include "sensorsel/linalg.hpp"

namespace sensorsel {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_index_list(std::span<const int> s, std::size_t n) {
  std::vector<int> seen(s.begin(), s.end());
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i] < 1 || static_cast<std::size_t>(seen[i]) > n)
      throw DimensionMismatch("sensor index " + std::to_string(seen[i]) + " outside 1.." +
                              std::to_string(n));
    if (i > 0 && seen[i] == seen[i - 1])
      throw InfeasibleSubset("duplicate sensor index " + std::to_string(seen[i]));
  }
}

// X_S X_Sᵀ + λ I for a row subset.
DataMatrix regularized_gram(const DataMatrix& xs, double lambda) {
  DataMatrix a = multiply_abt(xs, xs);
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += lambda;
  return a;
}

double binomial_guarded(std::size_t n, std::size_t k, double cap) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    c *= static_cast<double>(n - i);
    c /= static_cast<double>(i + 1);
    if (c > cap) return cap + 1.0;
  }
  return c;
}

}  // namespace

void SelectionProblem::validate() const {
  if (x.cols() == 0 || x.rows() == 0) throw InvalidMatrix("problem has empty input matrix");
  if (x.cols() != y.cols())
    throw DimensionMismatch("snapshot counts differ: x has " + std::to_string(x.cols()) +
                            ", y has " + std::to_string(y.cols()));
  if (budget_p > x.rows())
    throw InvalidBudget("budget " + std::to_string(budget_p) + " exceeds " +
                        std::to_string(x.rows()) + " candidates");
  if (lambda_tilde < 0.0) throw ConfigError("lambda_tilde must be nonnegative");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::BudgetReached: return "budget-reached";
    case Termination::FeasibleSetExhausted: return "feasible-set-exhausted";
  }
  return "unknown";
}

double objective(const SelectionProblem& problem, std::span<const int> s) {
  check_index_list(s, problem.candidate_count());
  if (s.empty()) return 0.0;
  const DataMatrix xs = problem.x.select_rows(s);
  const DataMatrix a = regularized_gram(xs, problem.lambda());
  auto factor = CholeskyFactor::try_compute(a);
  if (!factor) throw InfeasibleSubset("X_S X_S^T + lambda I is not positive definite");
  const DataMatrix b = multiply_abt(xs, problem.y);
  // J = tr{Bᵀ A⁻¹ B} = ‖L⁻¹B‖_F²
  return factor->forward_solve_matrix(b).squared_frobenius_norm();
}

bool is_feasible(const SelectionProblem& problem, std::span<const int> s) {
  check_index_list(s, problem.candidate_count());
  if (s.empty()) return true;
  const DataMatrix xs = problem.x.select_rows(s);
  return CholeskyFactor::try_compute(regularized_gram(xs, problem.lambda())).has_value();
}

SelectionResult naive_greedy(const SelectionProblem& problem) {
  problem.validate();
  const std::size_t n = problem.candidate_count();

  SelectionResult result;
  std::vector<int> candidates;
  candidates.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) candidates.push_back(static_cast<int>(i));

  const double lambda = problem.lambda();
  const double score_scale = problem.y.squared_frobenius_norm();

  // Feasibility of S ∪ {i} is checked through the Schur complement
  // g_i = P_{i,i} − P_{i,S} P_{S,S}⁻¹ P_{S,i} (the two are equivalent),
  // computed here directly from the definitions, with the same floor the
  // fast selector uses so the two agree on marginal candidates.
  std::vector<double> g_initial(n);
  double g_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    g_initial[i] = squared_norm(problem.x.row(i)) + lambda;
    g_max = std::max(g_max, g_initial[i]);
  }
  const double feasibility_tol = 1e-10 * g_max;

  std::vector<int> selected;
  std::vector<int> trial;
  double j_current = 0.0;
  result.termination = Termination::BudgetReached;

  for (std::size_t step = 0; step < problem.budget_p; ++step) {
    const auto t0 = Clock::now();

    std::optional<CholeskyFactor> selected_factor;
    if (!selected.empty()) {
      const DataMatrix xs = problem.x.select_rows(selected);
      selected_factor = CholeskyFactor::try_compute(regularized_gram(xs, lambda));
      if (!selected_factor)
        throw NumericalBreakdown("selected set lost positive definiteness");
    }

    std::vector<int> feasible;
    std::vector<double> increments;
    std::vector<double> values;
    feasible.reserve(candidates.size());

    for (int candidate : candidates) {
      const std::size_t u = static_cast<std::size_t>(candidate - 1);
      double g = g_initial[u];
      if (selected_factor) {
        std::vector<double> cross(selected.size());
        for (std::size_t j = 0; j < selected.size(); ++j)
          cross[j] = dot(problem.x.row(static_cast<std::size_t>(selected[j] - 1)),
                         problem.x.row(u));
        g -= squared_norm(selected_factor->forward_solve(cross));
      }
      if (!(g > feasibility_tol)) continue;

      trial = selected;
      trial.push_back(candidate);
      double value = 0.0;
      try {
        value = objective(problem, trial);
      } catch (const InfeasibleSubset&) {
        continue;
      }
      feasible.push_back(candidate);
      increments.push_back(value - j_current);
      values.push_back(value);
    }

    // Once X_{S∪{i}} is rank-deficient it stays so; drop the dead ones for good.
    candidates = feasible;
    if (feasible.empty()) {
      result.termination = Termination::FeasibleSetExhausted;
      break;
    }
    const int winner = detail::argmax_lowest_tie(feasible, increments, score_scale);
    const int best = feasible[static_cast<std::size_t>(winner)];
    selected.push_back(best);
    std::erase(candidates, best);
    j_current = values[static_cast<std::size_t>(winner)];
    result.indices.push_back(best);
    result.objective_trajectory.push_back(j_current);
    result.step_times.push_back(seconds_since(t0));
  }
  return result;
}

namespace {

// Next size-|combo| combination of 1..n in lexicographic order.
bool next_combination(std::vector<int>& combo, std::size_t n) {
  const std::size_t q = combo.size();
  for (std::size_t offset = 1; offset <= q; ++offset) {
    const std::size_t slot = q - offset;
    if (combo[slot] < static_cast<int>(n - (q - 1 - slot))) {
      ++combo[slot];
      for (std::size_t j = slot + 1; j < q; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

ExhaustiveOptimum exhaustive_optimum(const SelectionProblem& problem) {
  problem.validate();
  const std::size_t n = problem.candidate_count();
  const std::size_t p = problem.budget_p;

  // Feasibility is hereditary and J is monotone, so if any feasible subset
  // of size q exists the optimum over sizes ≤ q is attained at size q
  // (any smaller feasible set extends to size q by matroid exchange).
  // Scan sizes from p downward and stop at the first size with a feasible
  // subset.
  for (std::size_t q = p; q >= 1; --q) {
    if (binomial_guarded(n, q, 1e6) > 1e6)
      throw TooLargeForExhaustive("C(" + std::to_string(n) + ", " + std::to_string(q) +
                                  ") exceeds the exhaustive-search guard");
    bool any_feasible = false;
    double best_value = -std::numeric_limits<double>::infinity();
    std::vector<int> best_set;
    std::vector<int> combo(q);
    for (std::size_t i = 0; i < q; ++i) combo[i] = static_cast<int>(i + 1);
    do {
      double value = 0.0;
      try {
        value = objective(problem, combo);
      } catch (const InfeasibleSubset&) {
        continue;
      }
      any_feasible = true;
      if (value > best_value) {
        best_value = value;
        best_set = combo;
      }
    } while (next_combination(combo, n));
    if (any_feasible) return {std::move(best_set), best_value};
  }
  return {};  // no nonempty feasible subset: the empty set, J = 0
}

OracleState oracle_state(const SelectionProblem& problem, std::span<const int> s) {
  check_index_list(s, problem.candidate_count());
  const DataMatrix& x = problem.x;
  const DataMatrix& y = problem.y;
  const double lambda = problem.lambda();

  OracleState state;
  state.q_xx = multiply_abt(x, x);
  for (std::size_t i = 0; i < state.q_xx.rows(); ++i) state.q_xx(i, i) += lambda;
  state.q_xy = multiply_abt(x, y);
  state.q_yy = multiply_abt(y, y);
  if (s.empty()) return state;

  const DataMatrix p_xx_s = state.q_xx.select_rows(s);  // k × N
  const DataMatrix p_xy_s = state.q_xy.select_rows(s);  // k × N_y
  std::vector<std::size_t> col_positions;
  col_positions.reserve(s.size());
  for (int label : s) col_positions.push_back(static_cast<std::size_t>(label - 1));
  const DataMatrix p_ss = p_xx_s.select_columns(col_positions);

  auto factor = CholeskyFactor::try_compute(p_ss);
  if (!factor) throw InfeasibleSubset("P^{xx}_{S,S} is not positive definite");

  const DataMatrix cx = factor->solve(p_xx_s);  // (P_SS)⁻¹ P^{xx}_S
  const DataMatrix cy = factor->solve(p_xy_s);  // (P_SS)⁻¹ P^{xy}_S

  const DataMatrix dxx = multiply_atb(p_xx_s, cx);
  const DataMatrix dxy = multiply_atb(p_xx_s, cy);
  const DataMatrix dyy = multiply_atb(p_xy_s, cy);
  for (std::size_t i = 0; i < state.q_xx.rows(); ++i)
    for (std::size_t j = 0; j < state.q_xx.cols(); ++j) state.q_xx(i, j) -= dxx(i, j);
  for (std::size_t i = 0; i < state.q_xy.rows(); ++i)
    for (std::size_t j = 0; j < state.q_xy.cols(); ++j) state.q_xy(i, j) -= dxy(i, j);
  for (std::size_t i = 0; i < state.q_yy.rows(); ++i)
    for (std::size_t j = 0; j < state.q_yy.cols(); ++j) state.q_yy(i, j) -= dyy(i, j);
  return state;
}

}  // namespace sensorsel
