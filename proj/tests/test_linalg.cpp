#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "sshopm/errors.hpp"
#include "sshopm/linalg.hpp"

using namespace sshopm;

namespace {

Matrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = normal(rng);
  return m;
}

}  // namespace

TEST_CASE("sym_eig matches a dense reference solver") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u}) {
    for (int rep = 0; rep < 10; ++rep) {
      const Matrix m = random_symmetric(n, rng);
      Eigen::MatrixXd em(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) em(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(em);
      const auto got = sym_eig(m);
      for (std::size_t k = 0; k < n; ++k)
        CHECK(got.values[k] == doctest::Approx(ref.eigenvalues()(static_cast<Eigen::Index>(k))).epsilon(1e-12));

      // V diag(w) V^T reconstructs M and V is orthogonal.
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          double rec = 0.0, gram = 0.0;
          for (std::size_t k = 0; k < n; ++k) {
            rec += got.vectors(i, k) * got.values[k] * got.vectors(j, k);
            gram += got.vectors(k, i) * got.vectors(k, j);
          }
          CHECK(std::abs(rec - m(i, j)) < 1e-12 * std::max(1.0, m.frobenius_norm()));
          CHECK(std::abs(gram - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("sym_eig on small closed forms") {
  const double d[] = {2, 1, 1, 2};
  const auto w = sym_eigenvalues(Matrix::from_rows(2, 2, d));
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(3.0));
  CHECK(spectral_radius(Matrix::from_rows(2, 2, std::vector<double>{-4, 0, 0, 1})) == 4.0);
  CHECK(sym_eigenvalues(Matrix(3, 3)) == RealVector{0, 0, 0});
}

TEST_CASE("sym_eig rejects bad input") {
  CHECK_THROWS_AS(sym_eig(Matrix(2, 3)), ArgumentError);
  CHECK_THROWS_AS(sym_eig(Matrix::from_rows(2, 2, std::vector<double>{1, 2, 0, 1})), ArgumentError);
}

TEST_CASE("orthonormal_complement spans the tangent space") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t n : {2u, 3u, 4u, 6u}) {
    for (int rep = 0; rep < 20; ++rep) {
      RealVector x(n);
      for (double& v : x) v = normal(rng);
      const double s = norm2(x);
      for (double& v : x) v /= s;
      const Matrix u = orthonormal_complement(x);
      REQUIRE(u.rows() == n);
      REQUIRE(u.cols() == n - 1);
      for (std::size_t c = 0; c + 1 < n; ++c) {
        double xu = 0.0;
        for (std::size_t i = 0; i < n; ++i) xu += x[i] * u(i, c);
        CHECK(std::abs(xu) < 1e-14);
        for (std::size_t c2 = 0; c2 + 1 < n; ++c2) {
          double g = 0.0;
          for (std::size_t i = 0; i < n; ++i) g += u(i, c) * u(i, c2);
          CHECK(std::abs(g - (c == c2 ? 1.0 : 0.0)) < 1e-14);
        }
      }
    }
  }
  CHECK_THROWS_AS(orthonormal_complement(std::vector<double>{1.0, 1.0}), ArgumentError);
}

TEST_CASE("matrix products and projection") {
  const Matrix a = Matrix::from_rows(2, 3, std::vector<double>{1, 2, 3, 4, 5, 6});
  const Matrix at = a.transpose();
  const Matrix p = a * at;
  CHECK(p(0, 0) == 14);
  CHECK(p(0, 1) == 32);
  CHECK(p(1, 1) == 77);
  const RealVector y = a * std::vector<double>{1, 0, -1};
  CHECK(y == RealVector{-2, -2});
  CHECK(project(Matrix::identity(3), at).asymmetry() == 0.0);
  CHECK(distance(std::vector<double>{0, 3}, std::vector<double>{4, 0}) == 5.0);
}
