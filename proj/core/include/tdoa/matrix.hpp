#pragma once

#include <cstddef>
#include <vector>

namespace tdoa {

using Vector = std::vector<double>;

// Dense row-major matrix. Every matrix in this project is small (rows = the
// sensor count, columns at most 4), so the representation favours clarity
// over blocking or expression templates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  static Matrix identity(std::size_t n);

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Vector row(std::size_t i) const;
  Vector column(std::size_t j) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix transpose(const Matrix& a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

// A^T A and A^T x without forming the transpose.
Matrix gram(const Matrix& a);
Vector transpose_times(const Matrix& a, const Vector& x);

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& a);

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);
double max_abs(const Matrix& a);
double max_abs(const Vector& a);
double max_abs_diff(const Vector& a, const Vector& b);

}  // namespace tdoa
