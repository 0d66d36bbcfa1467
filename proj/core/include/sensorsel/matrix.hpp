#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sensorsel {

/// Dense row-major matrix of doubles.
///
/// Entries are validated to be finite whenever a matrix is built from
/// caller-supplied values; zero-initialized matrices skip the check.
/// Operations treat matrices as values and return fresh results.
///
/// Index convention used throughout the library: raw element accessors
/// (operator(), row()) take 0-based positions, while "index lists" that
/// name sensors or matrix columns in public results are 1-based labels.
class DataMatrix {
 public:
  DataMatrix() = default;
  DataMatrix(std::size_t rows, std::size_t cols);  // zero-filled
  DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static DataMatrix identity(std::size_t n);
  static DataMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) {
    return {values_.data() + i * cols_, cols_};
  }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  DataMatrix transposed() const;

  /// Rows named by 1-based labels, in label-list order.
  DataMatrix select_rows(std::span<const int> labels) const;
  /// Columns named by 0-based positions, in position-list order.
  DataMatrix select_columns(std::span<const std::size_t> positions) const;

  double frobenius_norm() const;
  double squared_frobenius_norm() const;
  double trace() const;
  bool all_finite() const;

  bool operator==(const DataMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// a (r×k) times b (k×c).
DataMatrix multiply(const DataMatrix& a, const DataMatrix& b);
/// a (r×k) times bᵀ for b (c×k).
DataMatrix multiply_abt(const DataMatrix& a, const DataMatrix& b);
/// aᵀ (k×r → r rows of a contracted) times b: result is cols(a) × cols(b).
DataMatrix multiply_atb(const DataMatrix& a, const DataMatrix& b);

/// a times column vector x.
std::vector<double> matvec(const DataMatrix& a, std::span<const double> x);
/// aᵀ times column vector x (x has rows(a) entries).
std::vector<double> matvec_transposed(const DataMatrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);

}  // namespace sensorsel
