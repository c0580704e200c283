#include "sshopm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sshopm/errors.hpp"

namespace sshopm {

Matrix Matrix::identity(std::size_t n) {
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

Matrix Matrix::from_rows(std::size_t rows, std::size_t cols, std::span<const double> row_major) {
  if (row_major.size() != rows * cols) {
    throw ArgumentError("Matrix::from_rows: expected " + std::to_string(rows * cols) +
                        " entries, got " + std::to_string(row_major.size()));
  }
  Matrix out(rows, cols);
  std::copy(row_major.begin(), row_major.end(), out.data_.begin());
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double Matrix::asymmetry() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
  return worst;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ArgumentError("matrix product: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

RealVector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw ArgumentError("matrix-vector product: size mismatch");
  RealVector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * x[j];
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

namespace {

void check_symmetric(const Matrix& m, const char* who) {
  if (m.rows() != m.cols()) throw ArgumentError(std::string(who) + ": matrix is not square");
  const double scale = std::max(1.0, m.frobenius_norm());
  if (!(m.asymmetry() <= 1e-12 * scale))
    throw ArgumentError(std::string(who) + ": matrix is not symmetric");
}

}  // namespace

SymEigen sym_eig(const Matrix& m) {
  check_symmetric(m, "sym_eig");
  const std::size_t n = m.rows();
  Matrix a = m;
  // Work on the exactly symmetrized copy; the 1e-12 slack above is absorbed here.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
  Matrix v = Matrix::identity(n);

  const double threshold = 1e-14 * m.frobenius_norm();
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= threshold) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation zeroing a(p,q); t is the smaller root of t^2 + 2 tau t - 1 = 0.
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  SymEigen out{RealVector(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

RealVector sym_eigenvalues(const Matrix& m) { return sym_eig(m).values; }

double spectral_radius(const Matrix& m) {
  const auto w = sym_eigenvalues(m);
  double rho = 0.0;
  for (double x : w) rho = std::max(rho, std::abs(x));
  return rho;
}

Matrix orthonormal_complement(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) throw ArgumentError("orthonormal_complement: empty vector");
  const double nrm = norm2(x);
  if (!(std::abs(nrm - 1.0) <= 1e-12))
    throw ArgumentError("orthonormal_complement: x is not a unit vector");

  // H = I - 2 v v^T / (v^T v) with v = x + sign(x_1) e_1 maps e_1 to -sign(x_1) x.
  RealVector v(x.begin(), x.end());
  const double sgn = x[0] >= 0.0 ? 1.0 : -1.0;
  v[0] += sgn;
  const double vv = dot(v, v);

  Matrix u(n, n - 1);
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      u(i, j - 1) = (i == j ? 1.0 : 0.0) - 2.0 * v[i] * v[j] / vv;
  return u;
}

Matrix project(const Matrix& m, const Matrix& u) {
  Matrix out = u.transpose() * (m * u);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = i + 1; j < out.cols(); ++j)
      out(i, j) = out(j, i) = 0.5 * (out(i, j) + out(j, i));
  return out;
}

}  // namespace sshopm
