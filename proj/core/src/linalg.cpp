#include "sensorsel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sensorsel/errors.hpp"

namespace sensorsel {

namespace {

// Off-diagonal Frobenius mass of a symmetric matrix.
double off_diagonal_norm(const DataMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

// One modified Gram-Schmidt pass over the columns of m, in column order.
// Columns that cannot be normalized are left untouched.
void orthonormalize_columns(DataMatrix& m) {
  const std::size_t n = m.rows();
  const std::size_t q = m.cols();
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double proj = 0.0;
      for (std::size_t r = 0; r < n; ++r) proj += m(r, j) * m(r, i);
      for (std::size_t r = 0; r < n; ++r) m(r, i) -= proj * m(r, j);
    }
    double norm2 = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm2 += m(r, i) * m(r, i);
    if (norm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (std::size_t r = 0; r < n; ++r) m(r, i) *= inv;
    }
  }
}

// Fill column `slot` of m with a unit vector orthogonal to columns 0..slot-1.
// The canonical basis vector with the largest orthogonalized residual is
// used (lowest index on ties); when slot < n its residual norm² is at
// least (n − slot)/n, so the choice is always well defined.
void complete_column(DataMatrix& m, std::size_t slot) {
  const std::size_t n = m.rows();
  std::vector<double> r(n);
  std::vector<double> best(n);
  double best_norm2 = 0.0;
  for (std::size_t candidate = 0; candidate < n; ++candidate) {
    std::fill(r.begin(), r.end(), 0.0);
    r[candidate] = 1.0;
    for (std::size_t pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < slot; ++j) {
        double proj = 0.0;
        for (std::size_t row = 0; row < n; ++row) proj += m(row, j) * r[row];
        for (std::size_t row = 0; row < n; ++row) r[row] -= proj * m(row, j);
      }
    }
    const double norm2 = squared_norm(r);
    if (norm2 > best_norm2) {
      best_norm2 = norm2;
      best = r;
    }
    if (norm2 > 0.5) break;  // already far from the span; no better needed
  }
  if (!(best_norm2 > 1e-8 / static_cast<double>(n)))
    throw NumericalBreakdown("could not complete an orthonormal basis column");
  const double inv = 1.0 / std::sqrt(best_norm2);
  for (std::size_t row = 0; row < n; ++row) m(row, slot) = best[row] * inv;
}

}  // namespace

double svd_rank_threshold(double sigma_max, std::size_t rows, std::size_t cols) {
  return sigma_max * static_cast<double>(std::max(rows, cols)) * 1e-12;
}

SymmetricEigen symmetric_eigen(const DataMatrix& s) {
  if (s.rows() != s.cols()) throw InvalidMatrix("symmetric_eigen: matrix not square");
  const std::size_t n = s.rows();
  DataMatrix a = s;
  DataMatrix v = DataMatrix::identity(n);

  const double total_norm = a.frobenius_norm();
  const double stop = total_norm * 1e-15;
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Skip rotations that cannot change anything at double precision.
        if (std::abs(apq) <= 1e-18 * (std::abs(app) + std::abs(aqq))) continue;

        const double tau = (aqq - app) / (2.0 * apq);
        const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                    : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;

        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(p, k) = a(k, p);
          a(k, q) = sn * akp + c * akq;
          a(q, k) = a(k, q);
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = DataMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

ThinSvd thin_svd(const DataMatrix& a) {
  if (a.empty()) throw InvalidMatrix("thin_svd: empty matrix");
  if (!a.all_finite()) throw InvalidMatrix("thin_svd: non-finite entries");

  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  const std::size_t q = std::min(n, m);
  const bool gram_of_cols = m <= n;  // eigendecompose aᵀa, else aaᵀ

  const DataMatrix gram = gram_of_cols ? multiply_atb(a, a) : multiply_abt(a, a);
  const SymmetricEigen eig = symmetric_eigen(gram);

  // Multiply the data through the eigenvectors of the Gram matrix; the
  // product norms are the singular values and the normalized products are
  // the missing side's singular vectors.
  DataMatrix known(gram.rows(), q);  // V when gram_of_cols, else U
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t i = 0; i < gram.rows(); ++i) known(i, j) = eig.vectors(i, j);

  const DataMatrix product =
      gram_of_cols ? multiply(a, known) : multiply(a.transposed(), known);

  std::vector<double> sigma(q);
  for (std::size_t j = 0; j < q; ++j) {
    double s2 = 0.0;
    for (std::size_t i = 0; i < product.rows(); ++i) s2 += product(i, j) * product(i, j);
    sigma[j] = std::sqrt(s2);
  }

  const double sigma_max = q == 0 ? 0.0 : *std::max_element(sigma.begin(), sigma.end());
  const double cutoff = svd_rank_threshold(sigma_max, n, m);

  // Recomputed norms can reorder near-ties; restore the nonincreasing order.
  std::vector<std::size_t> order(q);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&sigma](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  DataMatrix derived(product.rows(), q);  // U when gram_of_cols, else V
  DataMatrix known_sorted(known.rows(), q);
  std::vector<double> sigma_sorted(q);
  for (std::size_t j = 0; j < q; ++j) {
    const std::size_t src = order[j];
    sigma_sorted[j] = sigma[src];
    for (std::size_t i = 0; i < known.rows(); ++i) known_sorted(i, j) = known(i, src);
    if (sigma[src] > cutoff) {
      const double inv = 1.0 / sigma[src];
      for (std::size_t i = 0; i < product.rows(); ++i) derived(i, j) = product(i, src) * inv;
    }
  }
  for (std::size_t j = 0; j < q; ++j) {
    if (sigma_sorted[j] <= cutoff) complete_column(derived, j);
  }
  orthonormalize_columns(derived);

  DataMatrix left = gram_of_cols ? std::move(derived) : std::move(known_sorted);
  DataMatrix right = gram_of_cols ? std::move(known_sorted) : std::move(derived);

  // Sign convention: first entry of each left vector with magnitude above
  // 1e-12 is nonnegative; the paired right vector flips with it.
  for (std::size_t j = 0; j < q; ++j) {
    double lead = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(left(i, j)) > 1e-12) {
        lead = left(i, j);
        break;
      }
    }
    if (lead < 0.0) {
      for (std::size_t i = 0; i < n; ++i) left(i, j) = -left(i, j);
      for (std::size_t i = 0; i < m; ++i) right(i, j) = -right(i, j);
    }
  }

  ThinSvd out;
  out.left_vectors = std::move(left);
  out.singular_values = std::move(sigma_sorted);
  out.right_vectors_t = right.transposed();
  const double rank_cut = svd_rank_threshold(
      out.singular_values.empty() ? 0.0 : out.singular_values.front(), n, m);
  out.numerical_rank = static_cast<std::size_t>(std::count_if(
      out.singular_values.begin(), out.singular_values.end(),
      [rank_cut](double s) { return s > rank_cut; }));
  return out;
}

CholeskyFactor CholeskyFactor::compute(const DataMatrix& spd) {
  auto maybe = try_compute(spd);
  if (!maybe) throw NotPositiveDefinite("matrix is not positive definite within tolerance");
  return std::move(*maybe);
}

std::optional<CholeskyFactor> CholeskyFactor::try_compute(const DataMatrix& spd) {
  if (spd.rows() != spd.cols()) throw InvalidMatrix("cholesky: matrix not square");
  const std::size_t n = spd.rows();
  const double tr = spd.trace();
  const double pivot_tol = tr > 0.0 ? 1e-12 * tr / static_cast<double>(n) : 0.0;

  DataMatrix lower(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = spd(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= lower(j, k) * lower(j, k);
    if (!(d > pivot_tol)) return std::nullopt;
    const double ljj = std::sqrt(d);
    lower(j, j) = ljj;
    const double inv = 1.0 / ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = spd(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      lower(i, j) = s * inv;
    }
  }
  return CholeskyFactor(std::move(lower));
}

std::vector<double> CholeskyFactor::forward_solve(std::span<const double> rhs) const {
  const std::size_t n = dim();
  if (rhs.size() != n) throw DimensionMismatch("forward_solve: size mismatch");
  std::vector<double> z(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    double s = z[i];
    for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * z[k];
    z[i] = s / lower_(i, i);
  }
  return z;
}

DataMatrix CholeskyFactor::forward_solve_matrix(const DataMatrix& rhs) const {
  const std::size_t n = dim();
  if (rhs.rows() != n) throw DimensionMismatch("forward_solve_matrix: row count mismatch");
  DataMatrix z = rhs;
  const std::size_t c = rhs.cols();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      const double lik = lower_(i, k);
      for (std::size_t j = 0; j < c; ++j) z(i, j) -= lik * z(k, j);
    }
    const double inv = 1.0 / lower_(i, i);
    for (std::size_t j = 0; j < c; ++j) z(i, j) *= inv;
  }
  return z;
}

DataMatrix CholeskyFactor::solve(const DataMatrix& rhs) const {
  const std::size_t n = dim();
  if (rhs.rows() != n) throw DimensionMismatch("cholesky solve: row count mismatch");
  DataMatrix x = rhs;
  const std::size_t c = rhs.cols();
  // L z = rhs
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      const double lik = lower_(i, k);
      for (std::size_t j = 0; j < c; ++j) x(i, j) -= lik * x(k, j);
    }
    const double inv = 1.0 / lower_(i, i);
    for (std::size_t j = 0; j < c; ++j) x(i, j) *= inv;
  }
  // Lᵀ x = z
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) {
      const double lki = lower_(k, ii);
      for (std::size_t j = 0; j < c; ++j) x(ii, j) -= lki * x(k, j);
    }
    const double inv = 1.0 / lower_(ii, ii);
    for (std::size_t j = 0; j < c; ++j) x(ii, j) *= inv;
  }
  return x;
}

double CholeskyFactor::log_determinant() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) s += std::log(lower_(i, i));
  return 2.0 * s;
}

void CholeskyFactor::rank_one_update(std::span<const double> v) {
  const std::size_t n = dim();
  if (v.size() != n) throw DimensionMismatch("rank_one_update: size mismatch");
  std::vector<double> work(v.begin(), v.end());
  for (std::size_t i = 0; i < n; ++i) {
    const double lii = lower_(i, i);
    const double r = std::sqrt(lii * lii + work[i] * work[i]);
    const double c = r / lii;
    const double s = work[i] / lii;
    lower_(i, i) = r;
    for (std::size_t k = i + 1; k < n; ++k) {
      lower_(k, i) = (lower_(k, i) + s * work[k]) / c;
      work[k] = c * work[k] - s * lower_(k, i);
    }
  }
}

DataMatrix cholesky_solve(const DataMatrix& spd, const DataMatrix& rhs) {
  if (spd.rows() != rhs.rows()) throw DimensionMismatch("cholesky_solve: shape mismatch");
  if (!spd.all_finite() || !rhs.all_finite())
    throw InvalidMatrix("cholesky_solve: non-finite entries");
  return CholeskyFactor::compute(spd).solve(rhs);
}

std::vector<int> qr_column_pivot(const DataMatrix& a, std::size_t k) {
  if (k > a.cols())
    throw InvalidBudget("qr_column_pivot: k = " + std::to_string(k) + " exceeds " +
                        std::to_string(a.cols()) + " columns");
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  DataMatrix residual = a;
  std::vector<bool> used(m, false);
  std::vector<int> pivots;
  pivots.reserve(k);

  double initial_max = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm2 += residual(i, j) * residual(i, j);
    initial_max = std::max(initial_max, norm2);
  }
  const double dead = initial_max * 1e-28;

  std::vector<double> u(n);
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t best = m;
    double best_norm2 = -1.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      double norm2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) norm2 += residual(i, j) * residual(i, j);
      if (norm2 > best_norm2) {
        best_norm2 = norm2;
        best = j;
      }
    }
    used[best] = true;
    pivots.push_back(static_cast<int>(best) + 1);
    // Residual columns that already vanished stay as they are; the pivot
    // order over them falls back to lowest index.
    if (best_norm2 <= dead) continue;
    const double inv = 1.0 / std::sqrt(best_norm2);
    for (std::size_t i = 0; i < n; ++i) u[i] = residual(i, best) * inv;
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      double proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += u[i] * residual(i, j);
      for (std::size_t i = 0; i < n; ++i) residual(i, j) -= proj * u[i];
    }
  }
  return pivots;
}

}  // namespace sensorsel
