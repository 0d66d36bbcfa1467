#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sensorsel/errors.hpp"
#include "sensorsel/linalg.hpp"
#include "sensorsel/matrix.hpp"
#include "sensorsel/rng.hpp"
#include "test_support.hpp"

using namespace sensorsel;
using namespace sensorsel::testing;

namespace {

double reconstruction_residual(const DataMatrix& a, const ThinSvd& svd) {
  const std::size_t q = svd.singular_values.size();
  DataMatrix scaled(q, a.cols());
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      scaled(i, j) = svd.singular_values[i] * svd.right_vectors_t(i, j);
  const DataMatrix rebuilt = multiply(svd.left_vectors, scaled);
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double d = a(i, j) - rebuilt(i, j);
      s += d * d;
    }
  return std::sqrt(s);
}

double max_gram_deviation(const DataMatrix& columns) {
  const DataMatrix gram = multiply_atb(columns, columns);
  double worst = 0.0;
  for (std::size_t i = 0; i < gram.rows(); ++i)
    for (std::size_t j = 0; j < gram.cols(); ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(gram(i, j) - expected));
    }
  return worst;
}

}  // namespace

TEST_CASE("matrix construction validates shape and finiteness") {
  CHECK_THROWS_AS(DataMatrix(2, 2, {1.0, 2.0, 3.0}), InvalidMatrix);
  CHECK_THROWS_AS(DataMatrix(1, 2, {1.0, std::nan("")}), InvalidMatrix);
  const DataMatrix m = DataMatrix::from_rows({{1, 2}, {3, 4}});
  CHECK(m(1, 0) == 3.0);
  CHECK(m.transposed()(0, 1) == 3.0);
}

TEST_CASE("products agree with hand results") {
  const DataMatrix a = DataMatrix::from_rows({{1, 2}, {3, 4}});
  const DataMatrix b = DataMatrix::from_rows({{5, 6}, {7, 8}});
  const DataMatrix ab = multiply(a, b);
  CHECK(ab(0, 0) == 19.0);
  CHECK(ab(1, 1) == 50.0);
  const DataMatrix abt = multiply_abt(a, b);
  CHECK(abt(0, 0) == 17.0);
  const DataMatrix atb = multiply_atb(a, b);
  CHECK(atb(0, 0) == 26.0);
}

TEST_CASE("thin_svd on a diagonal matrix") {
  const ThinSvd svd = thin_svd(DataMatrix::from_rows({{3, 0}, {0, 0}}));
  REQUIRE(svd.singular_values.size() == 2);
  CHECK(svd.singular_values[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(svd.singular_values[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(svd.numerical_rank == 1);
}

TEST_CASE("thin_svd of the identity") {
  const ThinSvd svd = thin_svd(DataMatrix::identity(3));
  for (double s : svd.singular_values) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(svd.numerical_rank == 3);
}

TEST_CASE("thin_svd rejects non-finite and empty input") {
  CHECK_THROWS_AS(thin_svd(DataMatrix(0, 0)), InvalidMatrix);
}

TEST_CASE("thin_svd reconstruction and orthonormality on random matrices") {
  RandomStream rng(42);
  const std::size_t shapes[][2] = {{6, 4}, {4, 6}, {30, 30}, {80, 25}, {25, 80}, {200, 200}};
  for (const auto& shape : shapes) {
    const DataMatrix a = random_matrix(rng, shape[0], shape[1]);
    const ThinSvd svd = thin_svd(a);
    CHECK(reconstruction_residual(a, svd) <= 1e-8 * (1.0 + a.frobenius_norm()));
    CHECK(max_gram_deviation(svd.left_vectors) <= 1e-10);
    CHECK(max_gram_deviation(svd.right_vectors_t.transposed()) <= 1e-10);
    for (std::size_t i = 0; i + 1 < svd.singular_values.size(); ++i)
      CHECK(svd.singular_values[i] >= svd.singular_values[i + 1]);
  }
}

TEST_CASE("thin_svd handles rank-deficient input") {
  RandomStream rng(7);
  const DataMatrix a = random_low_rank(rng, 12, 9, 3);
  const ThinSvd svd = thin_svd(a);
  CHECK(svd.numerical_rank == 3);
  CHECK(reconstruction_residual(a, svd) <= 1e-8 * (1.0 + a.frobenius_norm()));
  CHECK(max_gram_deviation(svd.left_vectors) <= 1e-10);
}

TEST_CASE("thin_svd completes many null directions at once") {
  // Square, mostly rank-deficient: most left vectors come from the basis
  // completion, whose candidates get crowded as the null space grows.
  RandomStream rng(8);
  for (std::size_t n : {10, 31, 44}) {
    const DataMatrix a = random_low_rank(rng, n, n, 2);
    const ThinSvd svd = thin_svd(a);
    CHECK(svd.numerical_rank == 2);
    CHECK(reconstruction_residual(a, svd) <= 1e-8 * (1.0 + a.frobenius_norm()));
    CHECK(max_gram_deviation(svd.left_vectors) <= 1e-10);
    CHECK(max_gram_deviation(svd.right_vectors_t.transposed()) <= 1e-10);
  }
}

TEST_CASE("thin_svd sign convention keeps leading left entries nonnegative") {
  RandomStream rng(11);
  const DataMatrix a = random_matrix(rng, 8, 5);
  const ThinSvd svd = thin_svd(a);
  for (std::size_t j = 0; j < svd.singular_values.size(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const double v = svd.left_vectors(i, j);
      if (std::abs(v) > 1e-12) {
        CHECK(v > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("thin_svd is deterministic") {
  RandomStream rng(5);
  const DataMatrix a = random_matrix(rng, 20, 13);
  const ThinSvd first = thin_svd(a);
  const ThinSvd second = thin_svd(a);
  CHECK(first.left_vectors == second.left_vectors);
  CHECK(first.singular_values == second.singular_values);
  CHECK(first.right_vectors_t == second.right_vectors_t);
}

TEST_CASE("cholesky_solve on hand examples") {
  const DataMatrix one = cholesky_solve(DataMatrix::from_rows({{2}}),
                                        DataMatrix::from_rows({{4}}));
  CHECK(one(0, 0) == doctest::Approx(2.0).epsilon(1e-14));

  RandomStream rng(3);
  const DataMatrix rhs = random_matrix(rng, 3, 2);
  const DataMatrix same = cholesky_solve(DataMatrix::identity(3), rhs);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(same(i, j) == doctest::Approx(rhs(i, j)));

  CHECK_THROWS_AS(cholesky_solve(DataMatrix::from_rows({{1, 0}, {0, 0}}),
                                 DataMatrix::from_rows({{1}, {1}})),
                  NotPositiveDefinite);
}

TEST_CASE("cholesky_solve matches the explicit-inverse oracle on random SPD") {
  RandomStream rng(17);
  for (std::size_t n : {2, 5, 13, 50}) {
    const DataMatrix spd = random_spd(rng, n);
    const DataMatrix rhs = random_matrix(rng, n, 3);
    const DataMatrix solution = cholesky_solve(spd, rhs);

    const DataMatrix back = multiply(spd, solution);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        worst = std::max(worst, std::abs(back(i, j) - rhs(i, j)));
    CHECK(worst <= 1e-8 * (1.0 + rhs.frobenius_norm()));

    // Against inv(spd)·rhs with the inverse formed by Gauss-Jordan.
    const DataMatrix via_inverse = multiply(invert_oracle(spd), rhs);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        CHECK(std::abs(solution(i, j) - via_inverse(i, j)) <=
              1e-8 * (1.0 + std::abs(via_inverse(i, j))));
  }
}

TEST_CASE("rank_one_update matches a fresh factorization") {
  RandomStream rng(23);
  const std::size_t n = 6;
  DataMatrix spd = random_spd(rng, n);
  auto factor = CholeskyFactor::compute(spd);
  DataMatrix v_mat = random_matrix(rng, n, 1);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = v_mat(i, 0);

  factor.rank_one_update(v);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) spd(i, j) += v[i] * v[j];
  const auto fresh = CholeskyFactor::compute(spd);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      CHECK(factor.lower()(i, j) == doctest::Approx(fresh.lower()(i, j)).epsilon(1e-9));
}

TEST_CASE("qr_column_pivot basics") {
  const std::vector<int> pivots = qr_column_pivot(DataMatrix::identity(3), 2);
  CHECK(pivots == std::vector<int>{1, 2});

  DataMatrix with_dominant = DataMatrix::identity(3);
  with_dominant(0, 1) = 0.0;
  with_dominant(1, 1) = 10.0;  // column 2 has norm 10 among unit columns
  const std::vector<int> top = qr_column_pivot(with_dominant, 1);
  CHECK(top == std::vector<int>{2});

  CHECK_THROWS_AS(qr_column_pivot(DataMatrix::identity(3), 4), InvalidBudget);
}

TEST_CASE("qr_column_pivot greedily maximizes selected-column volume") {
  RandomStream rng(29);
  const DataMatrix a = random_matrix(rng, 5, 8);
  const std::size_t k = 3;
  const std::vector<int> pivots = qr_column_pivot(a, k);

  // Oracle: at each step the chosen column must maximize the Gram
  // determinant of the chosen set over every remaining candidate.
  std::vector<std::size_t> chosen;
  for (std::size_t step = 0; step < k; ++step) {
    double best_det = -1.0;
    std::size_t best_col = a.cols();
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
      std::vector<std::size_t> trial = chosen;
      trial.push_back(c);
      const DataMatrix cols = a.select_columns(trial);
      const double det = det_oracle(multiply_atb(cols, cols));
      if (det > best_det + 1e-12 * std::abs(best_det)) {
        best_det = det;
        best_col = c;
      }
    }
    CHECK(static_cast<int>(best_col) + 1 == pivots[step]);
    chosen.push_back(best_col);
  }
}

TEST_CASE("symmetric_eigen reproduces the spectrum of a known matrix") {
  // Eigenvalues of [[2,1],[1,2]] are 3 and 1.
  const SymmetricEigen eig = symmetric_eigen(DataMatrix::from_rows({{2, 1}, {1, 2}}));
  CHECK(eig.values[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("operations are deterministic across repeated calls") {
  RandomStream rng(31);
  const DataMatrix spd = random_spd(rng, 8);
  const DataMatrix rhs = random_matrix(rng, 8, 2);
  CHECK(cholesky_solve(spd, rhs) == cholesky_solve(spd, rhs));
  const DataMatrix a = random_matrix(rng, 9, 7);
  CHECK(qr_column_pivot(a, 4) == qr_column_pivot(a, 4));
}
