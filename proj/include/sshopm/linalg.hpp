#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace sshopm {

using RealVector = std::vector<double>;

/// Dense row-major matrix. Symmetric matrices (𝒜x^{m-2}, projected
/// Hessians, fixed-point Jacobians) use the same type; routines that need
/// symmetry check it on entry.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::size_t rows, std::size_t cols, std::span<const double> row_major);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transpose() const;
  double frobenius_norm() const;
  /// max |a_ij - a_ji|
  double asymmetry() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
RealVector operator*(const Matrix& a, std::span<const double> x);

/// Eigen-decomposition of a symmetric matrix.
struct SymEigen {
  RealVector values;  ///< ascending
  Matrix vectors;     ///< column j pairs with values[j]
};

/// Cyclic Jacobi eigensolver. Sweeps until every off-diagonal magnitude is at
/// most 1e-14 * ||M||_F. Throws ArgumentError if M is not square or deviates
/// from symmetry by more than 1e-12 * max(1, ||M||_F).
SymEigen sym_eig(const Matrix& m);

/// Eigenvalues only, ascending.
RealVector sym_eigenvalues(const Matrix& m);

/// max |w_i| over the eigenvalues of a symmetric matrix.
double spectral_radius(const Matrix& m);

/// n x (n-1) matrix whose columns are an orthonormal basis of x's orthogonal
/// complement: the trailing columns of the Householder reflector that carries
/// e_1 onto +-x. Requires | ||x|| - 1 | <= 1e-12.
Matrix orthonormal_complement(std::span<const double> x);

/// U^T M U
Matrix project(const Matrix& m, const Matrix& u);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace sshopm
