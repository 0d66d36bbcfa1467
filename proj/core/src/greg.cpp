#include "sensorsel/greg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sensorsel/detail/tiebreak.hpp"
#include "sensorsel/errors.hpp"

namespace sensorsel {

namespace {

using Clock = std::chrono::steady_clock;

double clamped(double f) { return f > 0.0 ? f : 0.0; }

}  // namespace

DataMatrix GregState::xi_block() const {
  DataMatrix out(candidate_count(), block_cols);
  for (std::size_t i = 0; i < candidate_count(); ++i) {
    const auto src = xi_row(i);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

DataMatrix GregState::theta_block() const {
  DataMatrix out(theta_rows, block_cols);
  for (std::size_t j = 0; j < theta_rows; ++j) {
    const auto src = theta_row(j);
    std::copy(src.begin(), src.end(), out.row(j).begin());
  }
  return out;
}

GregState greg_init(const SelectionProblem& problem) {
  problem.validate();
  const DataMatrix& x = problem.x;
  const DataMatrix& y = problem.y;
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  const std::size_t n_y = y.rows();

  GregState state;
  state.lambda = problem.lambda();
  state.f.resize(n);
  state.g.resize(n);

  // f_i = ‖Y X_iᵀ‖². When the output is taller than the snapshot count the
  // Gram route X_i (YᵀY) X_iᵀ is cheaper: O((N + N_y) M²) instead of
  // O(N N_y M).
  if (n_y >= m) {
    const DataMatrix gram_y = multiply_atb(y, y);  // M × M
    std::vector<double> work(m);
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = x.row(i);
      for (std::size_t a = 0; a < m; ++a) work[a] = dot(gram_y.row(a), xi);
      state.f[i] = dot(xi, work);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = x.row(i);
      double sum = 0.0;
      for (std::size_t j = 0; j < n_y; ++j) {
        const double v = dot(y.row(j), xi);
        sum += v * v;
      }
      state.f[i] = sum;
    }
  }

  double g_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    state.g[i] = squared_norm(x.row(i)) + state.lambda;
    g_max = std::max(g_max, state.g[i]);
  }
  state.tol = 1e-10 * g_max;
  state.score_scale = y.squared_frobenius_norm();

  state.feasible.resize(n);
  for (std::size_t i = 0; i < n; ++i) state.feasible[i] = static_cast<int>(i);

  state.block_capacity = problem.budget_p;
  state.theta_rows = n_y;
  state.xi_data.assign(n * state.block_capacity, 0.0);
  state.theta_data.assign(n_y * state.block_capacity, 0.0);
  state.block_cols = 0;
  return state;
}

std::vector<int> greg_feasible_candidates(const GregState& state) {
  std::vector<int> out;
  out.reserve(state.feasible.size());
  for (int i : state.feasible) {
    if (state.g[static_cast<std::size_t>(i)] > state.tol) out.push_back(i);
  }
  return out;
}

int greg_step(GregState& state, const SelectionProblem& problem) {
  const DataMatrix& x = problem.x;
  const DataMatrix& y = problem.y;
  const std::size_t n = x.rows();
  const std::size_t n_y = y.rows();
  const std::size_t k = state.block_cols;

  state.feasible = greg_feasible_candidates(state);
  if (state.feasible.empty())
    throw FeasibleSetExhausted("no feasible candidate remains for the next step");

  // argmax f_i / g_i, lowest index within the noise band on ties.
  std::vector<double> scores(state.feasible.size());
  for (std::size_t c = 0; c < state.feasible.size(); ++c) {
    const std::size_t u = static_cast<std::size_t>(state.feasible[c]);
    scores[c] = clamped(state.f[u]) / state.g[u];
  }
  const int winner = detail::argmax_lowest_tie(state.feasible, scores, state.score_scale);
  const int chosen = state.feasible[static_cast<std::size_t>(winner)];
  const std::size_t s = static_cast<std::size_t>(chosen);
  state.selected.push_back(chosen + 1);
  state.last_increment = scores[static_cast<std::size_t>(winner)];

  if (state.selected.size() >= problem.budget_p) {
    // Budget reached: the Ξ/Θ update would only serve a further step.
    std::erase(state.feasible, chosen);
    return chosen + 1;
  }

  // δ = X X_sᵀ + λ e_s − Ξ Ξ_sᵀ, before the new column is appended.
  std::vector<double> xi_s(state.xi_row(s).begin(), state.xi_row(s).end());
  std::vector<double> delta(n);
  const auto x_s = x.row(s);
  for (std::size_t i = 0; i < n; ++i) delta[i] = dot(x.row(i), x_s);
  delta[s] += state.lambda;
  if (k > 0) {
    for (std::size_t i = 0; i < n; ++i) delta[i] -= dot(state.xi_row(i), xi_s);
  }

  const double delta_s = delta[s];
  if (!(delta_s > state.tol))
    throw NumericalBreakdown("pivot delta_s fell below tolerance after selection");
  const double inv_sqrt = 1.0 / std::sqrt(delta_s);

  std::vector<double> xi(n);
  for (std::size_t i = 0; i < n; ++i) xi[i] = delta[i] * inv_sqrt;

  std::vector<double> theta(n_y);
  for (std::size_t j = 0; j < n_y; ++j) {
    double v = dot(y.row(j), x_s);
    if (k > 0) v -= dot(state.theta_row(j), xi_s);
    theta[j] = v * inv_sqrt;
  }

  // f_i ← f_i − ξ_i (2 X_i Yᵀθ − 2 Ξ_i Θᵀθ − ‖θ‖² ξ_i),  g_i ← g_i − ξ_i²
  const std::vector<double> w = matvec_transposed(y, theta);  // Yᵀθ, length M
  std::vector<double> t(k, 0.0);                              // Θᵀθ
  for (std::size_t j = 0; j < n_y; ++j) {
    const double tj = theta[j];
    if (tj == 0.0) continue;
    const auto theta_j = state.theta_row(j);
    for (std::size_t c = 0; c < k; ++c) t[c] += theta_j[c] * tj;
  }
  const double theta_norm2 = squared_norm(theta);

  for (int idx : state.feasible) {
    const std::size_t i = static_cast<std::size_t>(idx);
    const double xi_i = xi[i];
    const double m_i = dot(x.row(i), w);
    const double corr = k > 0 ? dot(state.xi_row(i), t) : 0.0;
    state.f[i] -= xi_i * (2.0 * m_i - 2.0 * corr - theta_norm2 * xi_i);
    state.g[i] -= xi_i * xi_i;
  }

  for (std::size_t i = 0; i < n; ++i) state.xi_data[i * state.block_capacity + k] = xi[i];
  for (std::size_t j = 0; j < n_y; ++j) state.theta_data[j * state.block_capacity + k] = theta[j];
  state.block_cols = k + 1;

  std::erase(state.feasible, chosen);
  return chosen + 1;
}

SelectionResult greg_select(const SelectionProblem& problem) {
  GregState state = greg_init(problem);
  SelectionResult result;
  result.termination = Termination::BudgetReached;
  double cumulative = 0.0;
  for (std::size_t step = 0; step < problem.budget_p; ++step) {
    const auto t0 = Clock::now();
    if (greg_feasible_candidates(state).empty()) {
      result.termination = Termination::FeasibleSetExhausted;
      break;
    }
    const int label = greg_step(state, problem);
    cumulative += state.last_increment;
    result.indices.push_back(label);
    result.objective_trajectory.push_back(cumulative);
    result.step_times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return result;
}

OracleState greg_diagnostics(const GregState& state, const SelectionProblem& problem) {
  const DataMatrix& x = problem.x;
  const DataMatrix& y = problem.y;
  const DataMatrix xi = state.xi_block();
  const DataMatrix theta = state.theta_block();

  OracleState out;
  out.q_xx = multiply_abt(x, x);
  for (std::size_t i = 0; i < out.q_xx.rows(); ++i) out.q_xx(i, i) += state.lambda;
  out.q_xy = multiply_abt(x, y);
  out.q_yy = multiply_abt(y, y);

  const DataMatrix xi_xi = multiply_abt(xi, xi);
  const DataMatrix xi_theta = multiply_abt(xi, theta);
  const DataMatrix theta_theta = multiply_abt(theta, theta);
  for (std::size_t i = 0; i < out.q_xx.rows(); ++i)
    for (std::size_t j = 0; j < out.q_xx.cols(); ++j) out.q_xx(i, j) -= xi_xi(i, j);
  for (std::size_t i = 0; i < out.q_xy.rows(); ++i)
    for (std::size_t j = 0; j < out.q_xy.cols(); ++j) out.q_xy(i, j) -= xi_theta(i, j);
  for (std::size_t i = 0; i < out.q_yy.rows(); ++i)
    for (std::size_t j = 0; j < out.q_yy.cols(); ++j) out.q_yy(i, j) -= theta_theta(i, j);
  return out;
}

}  // namespace sensorsel
