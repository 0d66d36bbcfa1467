#pragma once

// Shared generators and small oracles for the test suites. Everything here
// is deliberately independent of the library's fast paths: determinants by
// Gaussian elimination, objectives by definition, and so on.

#include <cmath>
#include <cstdint>
#include <vector>

#include "sensorsel/matrix.hpp"
#include "sensorsel/rng.hpp"
#include "sensorsel/selection.hpp"

namespace sensorsel::testing {

inline DataMatrix random_matrix(RandomStream& rng, std::size_t rows, std::size_t cols) {
  DataMatrix m(rows, cols);
  for (double& v : m.values()) v = rng.normal();
  return m;
}

/// Random matrix of the given rank (a product of two rank-sized factors).
inline DataMatrix random_low_rank(RandomStream& rng, std::size_t rows, std::size_t cols,
                                  std::size_t rank) {
  const DataMatrix a = random_matrix(rng, rows, rank);
  const DataMatrix b = random_matrix(rng, rank, cols);
  return multiply(a, b);
}

inline DataMatrix random_spd(RandomStream& rng, std::size_t n) {
  const DataMatrix a = random_matrix(rng, n, n);
  DataMatrix s = multiply_abt(a, a);
  for (std::size_t i = 0; i < n; ++i) s(i, i) += 0.5;
  return s;
}

/// Determinant by Gaussian elimination with partial pivoting (test oracle).
inline double det_oracle(DataMatrix a) {
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (a(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
    }
  }
  return det;
}

/// Explicit inverse by Gauss-Jordan with partial pivoting (test oracle).
inline DataMatrix invert_oracle(DataMatrix a) {
  const std::size_t k = a.rows();
  DataMatrix inv = DataMatrix::identity(k);
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    for (std::size_t c = 0; c < k; ++c) {
      std::swap(a(pivot, c), a(col, c));
      std::swap(inv(pivot, c), inv(col, c));
    }
    const double d = a(col, col);
    for (std::size_t c = 0; c < k; ++c) {
      a(col, c) /= d;
      inv(col, c) /= d;
    }
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < k; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

/// J(S) computed the slow explicit way: form (X_S X_Sᵀ + λI)⁻¹ by
/// Gauss-Jordan, then take the trace of Y X_Sᵀ (...)⁻¹ X_S Yᵀ.
/// Independent of the library's Cholesky-based evaluation path.
inline double objective_oracle(const SelectionProblem& problem, const std::vector<int>& s) {
  if (s.empty()) return 0.0;
  const DataMatrix xs = problem.x.select_rows(s);
  DataMatrix a = multiply_abt(xs, xs);
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += problem.lambda();
  const DataMatrix inv = invert_oracle(std::move(a));
  const DataMatrix b = multiply_abt(xs, problem.y);   // k × N_y
  const DataMatrix v = multiply(inv, b);              // k × N_y
  double j = 0.0;
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t c = 0; c < b.cols(); ++c) j += b(i, c) * v(i, c);
  return j;
}

/// The EX-A instance used across the suites.
inline SelectionProblem example_a(std::size_t budget = 2) {
  return SelectionProblem{DataMatrix::from_rows({{1, 0}, {0, 1}, {1, 1}}),
                          DataMatrix::from_rows({{2, 0}}), 0.0, budget};
}

/// Random instance in the acceptance sweep's population; lambda_choices
/// picks λ̃ and `deficient` forces rank-deficient X.
inline SelectionProblem random_problem(RandomStream& rng, std::size_t n_max = 15,
                                       std::size_t m_max = 12, std::size_t ny_max = 5) {
  const std::size_t n = 3 + rng.uniform_index(n_max - 2);
  const std::size_t m = 2 + rng.uniform_index(m_max - 1);
  const std::size_t n_y = 1 + rng.uniform_index(ny_max);
  const double lambdas[3] = {0.0, 0.01, 1.0};
  const double lambda = lambdas[rng.uniform_index(3)];
  const std::size_t p = 1 + rng.uniform_index(std::min<std::size_t>(n, 8));

  DataMatrix x(0, 0);
  if (rng.uniform_index(3) == 0) {
    const std::size_t rank = 1 + rng.uniform_index(std::min(n, m));
    x = random_low_rank(rng, n, m, rank);
  } else {
    x = random_matrix(rng, n, m);
  }
  return SelectionProblem{std::move(x), random_matrix(rng, n_y, m), lambda, p};
}

}  // namespace sensorsel::testing
