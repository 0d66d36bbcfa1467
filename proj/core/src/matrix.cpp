#include "sensorsel/matrix.hpp"

#include <cmath>
#include <string>

#include "sensorsel/errors.hpp"

namespace sensorsel {

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw InvalidMatrix("value count " + std::to_string(values_.size()) + " does not match " +
                        std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  if (!all_finite()) {
    throw InvalidMatrix("matrix contains non-finite entries");
  }
}

DataMatrix DataMatrix::identity(std::size_t n) {
  DataMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DataMatrix DataMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> values;
  values.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw InvalidMatrix("ragged row in matrix literal");
    values.insert(values.end(), row.begin(), row.end());
  }
  return DataMatrix(r, c, std::move(values));
}

DataMatrix DataMatrix::transposed() const {
  DataMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

DataMatrix DataMatrix::select_rows(std::span<const int> labels) const {
  DataMatrix out(labels.size(), cols_);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int label = labels[i];
    if (label < 1 || static_cast<std::size_t>(label) > rows_) {
      throw DimensionMismatch("row label " + std::to_string(label) + " outside 1.." +
                              std::to_string(rows_));
    }
    const auto src = row(static_cast<std::size_t>(label - 1));
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

DataMatrix DataMatrix::select_columns(std::span<const std::size_t> positions) const {
  DataMatrix out(rows_, positions.size());
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (positions[j] >= cols_) {
      throw DimensionMismatch("column position " + std::to_string(positions[j]) + " outside 0.." +
                              std::to_string(cols_ ? cols_ - 1 : 0));
    }
    for (std::size_t i = 0; i < rows_; ++i) out(i, j) = (*this)(i, positions[j]);
  }
  return out;
}

double DataMatrix::frobenius_norm() const { return std::sqrt(squared_frobenius_norm()); }

double DataMatrix::squared_frobenius_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

double DataMatrix::trace() const {
  const std::size_t n = rows_ < cols_ ? rows_ : cols_;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (*this)(i, i);
  return s;
}

bool DataMatrix::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

DataMatrix multiply(const DataMatrix& a, const DataMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("multiply: inner dimensions differ");
  DataMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* out_row = out.row(i).data();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* b_row = b.row(k).data();
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

DataMatrix multiply_abt(const DataMatrix& a, const DataMatrix& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("multiply_abt: inner dimensions differ");
  DataMatrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = dot(a.row(i), b.row(j));
  return out;
}

DataMatrix multiply_atb(const DataMatrix& a, const DataMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("multiply_atb: inner dimensions differ");
  DataMatrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* a_row = a.row(k).data();
    const double* b_row = b.row(k).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a_row[i];
      if (aki == 0.0) continue;
      double* out_row = out.row(i).data();
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aki * b_row[j];
    }
  }
  return out;
}

std::vector<double> matvec(const DataMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matvec: dimension mismatch");
  std::vector<double> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
  return out;
}

std::vector<double> matvec_transposed(const DataMatrix& a, std::span<const double> x) {
  if (a.rows() != x.size()) throw DimensionMismatch("matvec_transposed: dimension mismatch");
  std::vector<double> out(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* a_row = a.row(i).data();
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += xi * a_row[j];
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

}  // namespace sensorsel
