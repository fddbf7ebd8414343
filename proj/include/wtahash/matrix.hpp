#pragma once

// Column-major matrices, one sample per column. Data matrices store float;
// score/accumulator matrices store double (sums are always accumulated in
// double to bound drift at large sample counts).

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wtahash {

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  static Matrix from_values(std::size_t rows, std::size_t cols, std::vector<T> values) {
    if (values.size() != rows * cols)
      throw std::invalid_argument("Matrix::from_values: size mismatch");
    Matrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.values_ = std::move(values);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return values_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return values_[c * rows_ + r]; }
  const T& operator()(std::size_t r, std::size_t c) const { return values_[c * rows_ + r]; }

  std::span<T> col(std::size_t c) { return {values_.data() + c * rows_, rows_}; }
  std::span<const T> col(std::size_t c) const { return {values_.data() + c * rows_, rows_}; }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }
  T* data() { return values_.data(); }
  const T* data() const { return values_.data(); }

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> values_;
};

using DenseMatrix = Matrix<float>;
using ScoreMatrix = Matrix<double>;

// Throws std::invalid_argument naming the first NaN/Inf entry. Inputs are
// rejected at ingestion; internal paths assume finite data afterwards.
void require_finite(const DenseMatrix& m, const std::string& what);

}  // namespace wtahash
