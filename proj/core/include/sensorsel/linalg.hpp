#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sensorsel/matrix.hpp"

namespace sensorsel {

/// Thin singular value decomposition a = U diag(σ) Vᵀ with q = min(rows, cols).
struct ThinSvd {
  DataMatrix left_vectors;              // rows(a) × q, orthonormal columns
  std::vector<double> singular_values;  // length q, nonincreasing, ≥ 0
  DataMatrix right_vectors_t;           // q × cols(a), orthonormal rows
  std::size_t numerical_rank = 0;       // count of σ_i above the rank threshold
};

/// Rank cutoff used for numerical_rank: σ_1 · max(rows, cols) · 1e-12.
double svd_rank_threshold(double sigma_max, std::size_t rows, std::size_t cols);

/// Thin SVD via eigendecomposition of the smaller Gram matrix (aᵀa when
/// cols ≤ rows, otherwise aaᵀ). Sign convention: the first entry of each
/// left vector with magnitude above 1e-12 is nonnegative.
ThinSvd thin_svd(const DataMatrix& a);

/// Symmetric eigendecomposition by cyclic Jacobi sweeps.
/// Eigenvalues are returned in nonincreasing order; `vectors` holds the
/// matching eigenvectors as columns.
struct SymmetricEigen {
  std::vector<double> values;
  DataMatrix vectors;
};
SymmetricEigen symmetric_eigen(const DataMatrix& s);

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
///
/// Pivots are accepted only above 1e-12 · trace / n, so marginally
/// semidefinite inputs fail; callers treat that failure as the
/// infeasibility signal for sensor subsets.
class CholeskyFactor {
 public:
  static CholeskyFactor compute(const DataMatrix& spd);  // throws NotPositiveDefinite
  static std::optional<CholeskyFactor> try_compute(const DataMatrix& spd);

  std::size_t dim() const { return lower_.rows(); }
  const DataMatrix& lower() const { return lower_; }

  /// Solve L z = rhs (forward substitution), one column vector.
  std::vector<double> forward_solve(std::span<const double> rhs) const;
  /// Solve L Z = rhs (forward substitution), matrix right-hand side.
  DataMatrix forward_solve_matrix(const DataMatrix& rhs) const;
  /// Solve (L Lᵀ) x = rhs for a matrix right-hand side.
  DataMatrix solve(const DataMatrix& rhs) const;
  /// log det(L Lᵀ) = 2 Σ log L_ii.
  double log_determinant() const;

  /// Rank-one update: factor becomes the Cholesky factor of L Lᵀ + v vᵀ.
  void rank_one_update(std::span<const double> v);

 private:
  explicit CholeskyFactor(DataMatrix lower) : lower_(std::move(lower)) {}
  DataMatrix lower_;
};

/// Solve spd · V = rhs through a Cholesky factorization (never an inverse).
DataMatrix cholesky_solve(const DataMatrix& spd, const DataMatrix& rhs);

/// First k pivot column indices (1-based, pivot order) of column-pivoted QR:
/// each pivot maximizes the remaining column norm after orthogonalization
/// against the previous pivots; exact ties take the lowest index.
std::vector<int> qr_column_pivot(const DataMatrix& a, std::size_t k);

}  // namespace sensorsel
