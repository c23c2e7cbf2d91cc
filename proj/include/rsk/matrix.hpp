#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rsk {

/// Dense row-major matrix of doubles.
///
/// Construction from external data validates that every entry is finite.
/// Element access is unchecked; use `at()` when bounds are not already known.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const;

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
  std::vector<double> column(std::size_t j) const;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transpose() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

/// aᵀb without forming the transpose of a.
Matrix transpose_times(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& a);
double trace(const Matrix& a);
double max_abs(const Matrix& a);
/// max |a - b| over entries; shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);
bool all_finite(std::span<const double> v) noexcept;

}  // namespace rsk
