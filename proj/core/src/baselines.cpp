#include "sensorsel/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "sensorsel/detail/tiebreak.hpp"
#include "sensorsel/errors.hpp"
#include "sensorsel/linalg.hpp"
#include "sensorsel/output_reduction.hpp"

namespace sensorsel {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double clamped(double f) { return f > 0.0 ? f : 0.0; }

}  // namespace

SelectionResult reg_select(const DataMatrix& x, std::size_t p) {
  if (p > x.rows())
    throw InvalidBudget("budget " + std::to_string(p) + " exceeds " + std::to_string(x.rows()) +
                        " candidates");
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();

  // f_i = ‖X X_iᵀ‖², g_i = X_i X_iᵀ; the arithmetic below mirrors the
  // general selector with Y = X and λ = 0 operation for operation, so the
  // two produce identical picks even through exact score ties.
  std::vector<double> f(n);
  if (n >= m) {
    const DataMatrix gram = multiply_atb(x, x);  // M × M
    std::vector<double> work(m);
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = x.row(i);
      for (std::size_t a = 0; a < m; ++a) work[a] = dot(gram.row(a), xi);
      f[i] = dot(xi, work);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = x.row(i);
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double v = dot(x.row(j), xi);
        sum += v * v;
      }
      f[i] = sum;
    }
  }

  std::vector<double> g(n);
  double g_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = squared_norm(x.row(i));
    g_max = std::max(g_max, g[i]);
  }
  const double tol = 1e-10 * g_max;
  const double score_scale = x.squared_frobenius_norm();

  std::vector<int> feasible;
  feasible.reserve(n);
  for (std::size_t i = 0; i < n; ++i) feasible.push_back(static_cast<int>(i));

  const std::size_t capacity = p;
  std::vector<double> xi_data(n * capacity, 0.0);
  std::size_t cols = 0;
  const auto xi_row = [&](std::size_t i) {
    return std::span<const double>{xi_data.data() + i * capacity, cols};
  };

  SelectionResult result;
  result.termination = Termination::BudgetReached;
  double cumulative = 0.0;

  for (std::size_t step = 0; step < p; ++step) {
    const auto t0 = Clock::now();
    std::vector<int> refreshed;
    refreshed.reserve(feasible.size());
    for (int i : feasible) {
      if (g[static_cast<std::size_t>(i)] > tol) refreshed.push_back(i);
    }
    feasible = std::move(refreshed);
    if (feasible.empty()) {
      result.termination = Termination::FeasibleSetExhausted;
      break;
    }

    std::vector<double> scores(feasible.size());
    for (std::size_t c = 0; c < feasible.size(); ++c) {
      const std::size_t u = static_cast<std::size_t>(feasible[c]);
      scores[c] = clamped(f[u]) / g[u];
    }
    const int winner = detail::argmax_lowest_tie(feasible, scores, score_scale);
    const int chosen = feasible[static_cast<std::size_t>(winner)];
    const std::size_t s = static_cast<std::size_t>(chosen);
    cumulative += scores[static_cast<std::size_t>(winner)];
    result.indices.push_back(chosen + 1);
    result.objective_trajectory.push_back(cumulative);
    result.step_times.push_back(seconds_since(t0));

    if (result.indices.size() >= p) break;

    std::vector<double> xi_s(xi_row(s).begin(), xi_row(s).end());
    std::vector<double> delta(n);
    const auto x_s = x.row(s);
    for (std::size_t i = 0; i < n; ++i) delta[i] = dot(x.row(i), x_s);
    if (cols > 0) {
      for (std::size_t i = 0; i < n; ++i) delta[i] -= dot(xi_row(i), xi_s);
    }
    const double delta_s = delta[s];
    if (!(delta_s > tol))
      throw NumericalBreakdown("pivot delta_s fell below tolerance after selection");
    const double inv_sqrt = 1.0 / std::sqrt(delta_s);

    std::vector<double> xi(n);
    for (std::size_t i = 0; i < n; ++i) xi[i] = delta[i] * inv_sqrt;

    const std::vector<double> w = matvec_transposed(x, xi);  // Xᵀξ
    std::vector<double> t(cols, 0.0);                        // Ξᵀξ
    for (std::size_t j = 0; j < n; ++j) {
      const double xj = xi[j];
      if (xj == 0.0) continue;
      const auto row_j = xi_row(j);
      for (std::size_t c = 0; c < cols; ++c) t[c] += row_j[c] * xj;
    }
    const double xi_norm2 = squared_norm(xi);

    for (int idx : feasible) {
      const std::size_t i = static_cast<std::size_t>(idx);
      const double xi_i = xi[i];
      const double m_i = dot(x.row(i), w);
      const double corr = cols > 0 ? dot(xi_row(i), t) : 0.0;
      f[i] -= xi_i * (2.0 * m_i - 2.0 * corr - xi_norm2 * xi_i);
      g[i] -= xi_i * xi_i;
    }

    for (std::size_t i = 0; i < n; ++i) xi_data[i * capacity + cols] = xi[i];
    ++cols;
    std::erase(feasible, chosen);
  }
  return result;
}

SelectionResult somp_select(const SelectionProblem& problem, std::size_t p) {
  problem.validate();
  if (p > problem.candidate_count())
    throw InvalidBudget("budget " + std::to_string(p) + " exceeds candidate count");
  const DataMatrix& x = problem.x;
  const DataMatrix& y = problem.y;
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();

  std::vector<double> atom_norm2(n);
  double max_atom = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    atom_norm2[i] = squared_norm(x.row(i));
    max_atom = std::max(max_atom, atom_norm2[i]);
  }
  const double tol = 1e-10 * max_atom;

  // Residual row norms against the span of the selected rows; candidates
  // whose residual vanishes would make X_S X_Sᵀ singular.
  std::vector<double> span_res2 = atom_norm2;
  std::vector<std::vector<double>> basis;  // orthonormal rows spanning X_S

  SompState state{y, {}};
  const double y_norm2 = y.squared_frobenius_norm();

  SelectionResult result;
  result.termination = Termination::BudgetReached;
  std::vector<char> taken(n, 0);

  for (std::size_t step = 0; step < p; ++step) {
    const auto t0 = Clock::now();
    int chosen = -1;
    double best_score = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i] || atom_norm2[i] <= tol || span_res2[i] <= tol) continue;
      double num = 0.0;
      for (std::size_t j = 0; j < y.rows(); ++j) {
        const double v = dot(state.residual.row(j), x.row(i));
        num += v * v;
      }
      const double score = num / atom_norm2[i];
      if (score > best_score) {
        best_score = score;
        chosen = static_cast<int>(i);
      }
    }
    if (chosen < 0) {
      result.termination = Termination::FeasibleSetExhausted;
      break;
    }
    const std::size_t s = static_cast<std::size_t>(chosen);
    taken[s] = 1;
    state.selected.push_back(chosen + 1);

    // Extend the orthonormal basis with the residual of the new row.
    std::vector<double> u(x.row(s).begin(), x.row(s).end());
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        const double proj = dot(q, u);
        for (std::size_t c = 0; c < m; ++c) u[c] -= proj * q[c];
      }
    }
    const double u_norm2 = squared_norm(u);
    if (!(u_norm2 > 0.0))
      throw NumericalBreakdown("selected row collapsed onto the span of earlier rows");
    const double inv = 1.0 / std::sqrt(u_norm2);
    for (double& v : u) v *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double proj = dot(std::span<const double>(u), x.row(i));
      span_res2[i] -= proj * proj;
    }
    basis.push_back(std::move(u));

    // E(S) = Y − (Y X_Sᵀ)(X_S X_Sᵀ)⁻¹ X_S, recomputed exactly.
    const DataMatrix xs = x.select_rows(state.selected);
    const DataMatrix gram = multiply_abt(xs, xs);
    auto factor = CholeskyFactor::try_compute(gram);
    if (!factor) throw NumericalBreakdown("selected-row Gram matrix lost positive definiteness");
    const DataMatrix coeff = factor->solve(multiply_abt(xs, y));  // k × N_y
    const DataMatrix fit = multiply(coeff.transposed(), xs);      // N_y × M
    state.residual = y;
    for (std::size_t i = 0; i < y.rows(); ++i)
      for (std::size_t j = 0; j < m; ++j) state.residual(i, j) -= fit(i, j);

    result.indices.push_back(chosen + 1);
    result.objective_trajectory.push_back(y_norm2 - state.residual.squared_frobenius_norm());
    result.step_times.push_back(seconds_since(t0));
  }
  return result;
}

SelectionResult dg_select(const DataMatrix& x, std::size_t r, std::size_t p) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  if (r < 1 || r > std::min(n, m))
    throw InvalidBudget("mode count " + std::to_string(r) + " outside 1.." +
                        std::to_string(std::min(n, m)));
  if (p > n) throw InvalidBudget("budget " + std::to_string(p) + " exceeds candidate count");

  const ThinSvd svd = thin_svd(x);
  DataMatrix phi(n, r);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < r; ++j) phi(i, j) = svd.left_vectors(i, j);

  SelectionResult result;
  result.termination = Termination::BudgetReached;
  std::vector<char> taken(n, 0);
  double logdet = 0.0;

  // Underdetermined phase: row pivoting on residual norms, exactly the
  // QR column-pivot rule applied to Φᵀ.
  DataMatrix residual = phi;
  double initial_max = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    initial_max = std::max(initial_max, squared_norm(residual.row(i)));
  const double stall_tol = 1e-10 * initial_max;

  const std::size_t underdetermined_steps = std::min(p, r);
  for (std::size_t step = 0; step < underdetermined_steps; ++step) {
    const auto t0 = Clock::now();
    int chosen = -1;
    double best_norm2 = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double norm2 = squared_norm(residual.row(i));
      if (norm2 > best_norm2) {
        best_norm2 = norm2;
        chosen = static_cast<int>(i);
      }
    }
    if (chosen < 0 || best_norm2 <= stall_tol) {
      result.termination = Termination::FeasibleSetExhausted;
      break;
    }
    const std::size_t s = static_cast<std::size_t>(chosen);
    taken[s] = 1;
    logdet += std::log(best_norm2);

    std::vector<double> u(residual.row(s).begin(), residual.row(s).end());
    const double inv = 1.0 / std::sqrt(best_norm2);
    for (double& v : u) v *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      auto row = residual.row(i);
      const double proj = dot(std::span<const double>(u), std::span<const double>(row));
      for (std::size_t c = 0; c < r; ++c) row[c] -= proj * u[c];
    }

    result.indices.push_back(chosen + 1);
    result.objective_trajectory.push_back(logdet);
    result.step_times.push_back(seconds_since(t0));
  }

  if (result.termination == Termination::FeasibleSetExhausted || result.indices.size() >= p)
    return result;

  // Overdetermined phase: A = Φ_SᵀΦ_S, det gain 1 + φ_i A⁻¹ φ_iᵀ per the
  // matrix determinant lemma; the factor is refreshed from scratch every
  // 25 steps to bound drift.
  DataMatrix a = multiply_atb(phi.select_rows(result.indices), phi.select_rows(result.indices));
  auto factor = CholeskyFactor::try_compute(a);
  if (!factor) {
    result.termination = Termination::FeasibleSetExhausted;
    return result;
  }

  std::size_t updates_since_rebuild = 0;
  while (result.indices.size() < p) {
    const auto t0 = Clock::now();
    int chosen = -1;
    double best_score = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const auto z = factor->forward_solve(phi.row(i));
      const double score = squared_norm(z);
      if (score > best_score) {
        best_score = score;
        chosen = static_cast<int>(i);
      }
    }
    if (chosen < 0) {
      result.termination = Termination::FeasibleSetExhausted;
      break;
    }
    const std::size_t s = static_cast<std::size_t>(chosen);
    taken[s] = 1;
    logdet += std::log1p(best_score);
    result.indices.push_back(chosen + 1);
    result.objective_trajectory.push_back(logdet);
    result.step_times.push_back(seconds_since(t0));

    if (result.indices.size() >= p) break;
    factor->rank_one_update(phi.row(s));
    if (++updates_since_rebuild >= 25) {
      const DataMatrix phi_s = phi.select_rows(result.indices);
      factor = CholeskyFactor::try_compute(multiply_atb(phi_s, phi_s));
      if (!factor) {
        result.termination = Termination::FeasibleSetExhausted;
        break;
      }
      updates_since_rebuild = 0;
    }
  }
  return result;
}

SelectionResult bdg_select(const DataMatrix& x, std::size_t r, std::size_t p) {
  const std::size_t limit = std::min(x.rows(), x.cols());
  if (r < 1 || r > limit)
    throw InvalidBudget("mode count " + std::to_string(r) + " outside 1.." +
                        std::to_string(limit));
  return bdg_select_with_modes(x, reduce_output(x, r).z, p);
}

SelectionResult bdg_select_with_modes(const DataMatrix& x, const DataMatrix& w, std::size_t p) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  const std::size_t r = w.rows();
  if (w.cols() != m) throw DimensionMismatch("mode matrix snapshot count differs from x");
  if (p > n) throw InvalidBudget("budget " + std::to_string(p) + " exceeds candidate count");

  std::vector<double> g(n);
  double g_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = squared_norm(x.row(i));
    g_max = std::max(g_max, g[i]);
  }
  const double tol = 1e-10 * g_max;

  std::vector<int> feasible;
  feasible.reserve(n);
  for (std::size_t i = 0; i < n; ++i) feasible.push_back(static_cast<int>(i));

  DataMatrix q_xw = multiply_abt(x, w);  // N × r, maintained as Q^{xw}(S)
  DataMatrix b = multiply_abt(w, w);     // r × r, maintained as the residual covariance

  const std::size_t capacity = p;
  std::vector<double> xi_data(n * capacity, 0.0);
  std::size_t cols = 0;
  const auto xi_row = [&](std::size_t i) {
    return std::span<const double>{xi_data.data() + i * capacity, cols};
  };

  SelectionResult result;
  result.termination = Termination::BudgetReached;
  std::size_t updates_since_rebuild = 0;

  auto factor = CholeskyFactor::try_compute(b);
  double logdet = factor ? factor->log_determinant() : 0.0;

  for (std::size_t step = 0; step < p; ++step) {
    const auto t0 = Clock::now();
    if (!factor) {
      // det(B) reached numerical zero: every remaining candidate leaves it
      // there, so no ranking is possible.
      result.termination = Termination::FeasibleSetExhausted;
      break;
    }
    std::vector<int> refreshed;
    refreshed.reserve(feasible.size());
    for (int i : feasible) {
      if (g[static_cast<std::size_t>(i)] > tol) refreshed.push_back(i);
    }
    feasible = std::move(refreshed);
    if (feasible.empty()) {
      result.termination = Termination::FeasibleSetExhausted;
      break;
    }

    int chosen = -1;
    double best_score = -1.0;
    for (int i : feasible) {
      const std::size_t u = static_cast<std::size_t>(i);
      const auto z = factor->forward_solve(q_xw.row(u));
      const double score = squared_norm(z) / g[u];
      if (score > best_score) {
        best_score = score;
        chosen = i;
      }
    }
    const std::size_t s = static_cast<std::size_t>(chosen);
    logdet += std::log(std::max(1.0 - best_score, 0.0));
    result.indices.push_back(chosen + 1);
    result.objective_trajectory.push_back(logdet);
    result.step_times.push_back(seconds_since(t0));

    if (result.indices.size() >= p) break;

    // Rank-one recurrence update of g, Q^{xw}, and B.
    std::vector<double> xi_s(xi_row(s).begin(), xi_row(s).end());
    std::vector<double> delta(n);
    const auto x_s = x.row(s);
    for (std::size_t i = 0; i < n; ++i) delta[i] = dot(x.row(i), x_s);
    if (cols > 0) {
      for (std::size_t i = 0; i < n; ++i) delta[i] -= dot(xi_row(i), xi_s);
    }
    const double delta_s = delta[s];
    if (!(delta_s > tol))
      throw NumericalBreakdown("pivot delta_s fell below tolerance after selection");
    const double inv_sqrt = 1.0 / std::sqrt(delta_s);

    std::vector<double> xi(n);
    for (std::size_t i = 0; i < n; ++i) xi[i] = delta[i] * inv_sqrt;

    std::vector<double> theta_w(q_xw.row(s).begin(), q_xw.row(s).end());
    for (double& v : theta_w) v *= inv_sqrt;

    for (int idx : feasible) {
      const std::size_t i = static_cast<std::size_t>(idx);
      g[i] -= xi[i] * xi[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double xi_i = xi[i];
      if (xi_i == 0.0) continue;
      auto row = q_xw.row(i);
      for (std::size_t c = 0; c < r; ++c) row[c] -= xi_i * theta_w[c];
    }
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) b(i, j) -= theta_w[i] * theta_w[j];

    for (std::size_t i = 0; i < n; ++i) xi_data[i * capacity + cols] = xi[i];
    ++cols;
    std::erase(feasible, chosen);

    if (++updates_since_rebuild >= 25) {
      // Refresh Q^{xw} and B from their definitions to stop drift.
      const DataMatrix xs = x.select_rows(result.indices);
      const DataMatrix gram = multiply_abt(xs, xs);
      auto gram_factor = CholeskyFactor::try_compute(gram);
      if (gram_factor) {
        const DataMatrix p_xw_s = multiply_abt(xs, w);                   // k × r
        const DataMatrix half = gram_factor->forward_solve_matrix(p_xw_s);
        b = multiply_abt(w, w);
        const DataMatrix correction = multiply_atb(half, half);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j) b(i, j) -= correction(i, j);
        const DataMatrix p_xx_s = multiply_abt(x, xs);                   // N × k
        const DataMatrix coeff = gram_factor->solve(p_xw_s);             // k × r
        q_xw = multiply_abt(x, w);
        const DataMatrix fix = multiply(p_xx_s, coeff);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t c = 0; c < r; ++c) q_xw(i, c) -= fix(i, c);
      }
      updates_since_rebuild = 0;
    }

    factor = CholeskyFactor::try_compute(b);
  }
  return result;
}

}  // namespace sensorsel
