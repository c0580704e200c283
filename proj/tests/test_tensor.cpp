#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sshopm/errors.hpp"
#include "sshopm/io.hpp"
#include "sshopm/tensor.hpp"

using namespace sshopm;

TEST_CASE("construction keeps exact symmetry") {
  std::mt19937_64 rng(11);
  for (int m = 1; m <= 5; ++m) {
    for (int n = 1; n <= 4; ++n) {
      const auto a = oracle::random_tensor(m, n, rng);
      CHECK(oracle::exactly_symmetric(a));
      CHECK(a.size() == static_cast<std::size_t>(std::pow(n, m)));
    }
  }
  const SymTensor z(3, 2);
  CHECK(oracle::max_abs(std::vector<double>(z.entries().begin(), z.entries().end())) == 0.0);
}

TEST_CASE("from_unique_entries and indexing") {
  const std::vector<UniqueEntry> e = {{{0, 1, 2}, 1.0}};
  const auto a = SymTensor::from_unique_entries(3, 3, e);
  CHECK(a.at({2, 0, 1}) == 1.0);
  CHECK(a.at({1, 2, 0}) == 1.0);
  CHECK(a.at({0, 0, 1}) == 0.0);
  CHECK(a.multi_index(a.linear_index(std::vector<int>{2, 1, 0})) == std::vector<int>{2, 1, 0});
  const std::vector<UniqueEntry> dup = {{{0, 1}, 1.0}, {{1, 0}, 2.0}};
  CHECK_THROWS_AS(SymTensor::from_unique_entries(2, 2, dup), ArgumentError);
  const std::vector<UniqueEntry> bad = {{{0, 3}, 1.0}};
  CHECK_THROWS_AS(SymTensor::from_unique_entries(2, 2, bad), ArgumentError);
}

TEST_CASE("from_symmetric rejects asymmetric data") {
  CHECK_NOTHROW(SymTensor::from_symmetric(std::vector<double>{1, 2, 2, 3}, 2, 2));
  CHECK_THROWS_AS(SymTensor::from_symmetric(std::vector<double>{1, 2, 2.1, 3}, 2, 2), ArgumentError);
  CHECK_THROWS_AS(SymTensor::symmetrize(std::vector<double>{1, 2, 3}, 2, 2), ArgumentError);
  CHECK_THROWS_AS(SymTensor(20, 10, 1000), ArgumentError);
}

TEST_CASE("contractions agree with the brute-force sum") {
  std::mt19937_64 rng(5);
  for (int m = 2; m <= 5; ++m) {
    for (int n = 1; n <= 4; ++n) {
      const auto a = oracle::random_tensor(m, n, rng);
      const auto x = oracle::random_unit(n, rng);
      CHECK(std::abs(evaluate(a, x) - oracle::brute_f(a, x)) < 1e-12);
      CHECK(oracle::max_abs_diff(::sshopm::apply(a, x), oracle::brute_contract(a, x, 1)) < 1e-12);
      const auto mat = contract_to_matrix(a, x);
      const auto ref = oracle::brute_contract(a, x, 2);
      CHECK(oracle::max_abs_diff(std::vector<double>(mat.data().begin(), mat.data().end()), ref) < 1e-12);
      for (int t = 1; t <= m; ++t) {
        const auto d = multiply(a, x, t);
        CHECK(d.order == m - t);
        CHECK(oracle::max_abs_diff(d.entries, oracle::brute_contract(a, x, m - t)) < 1e-12);
      }
    }
  }
}

TEST_CASE("contraction consistency and homogeneity") {
  std::mt19937_64 rng(8);
  for (int m = 2; m <= 5; ++m) {
    const auto a = oracle::random_tensor(m, 3, rng);
    const auto x = oracle::random_unit(3, rng);
    CHECK(std::abs(dot(x, ::sshopm::apply(a, x)) - evaluate(a, x)) < 1e-12);
    CHECK(oracle::max_abs_diff(contract_to_matrix(a, x) * x, ::sshopm::apply(a, x)) < 1e-12);
    for (double c : {-2.0, 0.5, 3.0}) {
      auto cx = x;
      for (double& v : cx) v *= c;
      CHECK(std::abs(evaluate(a, cx) - std::pow(c, m) * evaluate(a, x)) < 1e-12 * std::pow(std::abs(c), m) * 10);
    }
  }
  const auto a = builtin_corpus("kore02");
  CHECK_THROWS_AS(::sshopm::apply(a, std::vector<double>{1, 0}), ArgumentError);
  CHECK_THROWS_AS(multiply(a, std::vector<double>{1, 0, 0}, 0), ArgumentError);
  CHECK_THROWS_AS(multiply(a, std::vector<double>{1, 0, 0}, 5), ArgumentError);
}

TEST_CASE("complex contraction reduces to the real one on real vectors") {
  const auto a = builtin_corpus("odd33");
  const std::vector<double> x = {0.3, -0.4, 0.5};
  ComplexVector xc;
  for (double v : x) xc.emplace_back(v, 0.0);
  const auto ac = ::sshopm::apply(a, std::span<const Complex>(xc));
  const auto ar = ::sshopm::apply(a, std::span<const double>(x));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(ac[i].real() == doctest::Approx(ar[i]).epsilon(1e-14));
    CHECK(ac[i].imag() == 0.0);
  }
  // No conjugation: f(i x) = i^m f(x).
  ComplexVector ix;
  for (double v : x) ix.emplace_back(0.0, v);
  const Complex fi = evaluate(a, std::span<const Complex>(ix));
  CHECK(std::abs(fi - Complex(0, -1) * evaluate(a, std::span<const double>(x))) < 1e-14);
}

TEST_CASE("gradient and Hessian match finite differences") {
  std::mt19937_64 rng(21);
  for (int m = 2; m <= 5; ++m) {
    for (int n = 2; n <= 4; ++n) {
      const auto a = oracle::random_tensor(m, n, rng);
      const auto x = oracle::random_unit(n, rng);
      const auto g = gradient(a, x);
      const auto fd = oracle::fd_gradient([&](const std::vector<double>& y) { return evaluate(a, y); }, x);
      CHECK(oracle::max_abs_diff(g, fd) <= 1e-5 * std::max(1.0, oracle::max_abs(g)));
      const auto h = hessian(a, x);
      for (int i = 0; i < n; ++i) {
        const auto fdi = oracle::fd_gradient(
            [&](const std::vector<double>& y) { return gradient(a, y)[static_cast<std::size_t>(i)]; }, x);
        for (int j = 0; j < n; ++j) {
          CHECK(std::abs(h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) - fdi[static_cast<std::size_t>(j)]) <=
                1e-5 * std::max(1.0, h.frobenius_norm()));
        }
      }
    }
  }
}

TEST_CASE("identity tensor") {
  std::mt19937_64 rng(2);
  for (int m : {2, 4, 6}) {
    for (int n = 1; n <= 4; ++n) {
      const auto e = identity_tensor(m, n);
      for (std::size_t lin = 0; lin < e.size(); ++lin) {
        const auto idx = oracle::decode(lin, m, n);
        CHECK(std::abs(e.entries()[lin] - oracle::identity_entry(idx)) < 1e-12);
      }
      const auto x = oracle::random_unit(n, rng);
      CHECK(oracle::max_abs_diff(::sshopm::apply(e, x), x) < 1e-12);
      auto y = x;
      for (double& v : y) v *= 1.7;
      auto expect = y;
      for (double& v : expect) v *= std::pow(1.7, m - 2);
      CHECK(oracle::max_abs_diff(::sshopm::apply(e, y), expect) < 1e-12);
    }
  }
  CHECK_THROWS_AS(identity_tensor(3, 2), DomainError);
  CHECK(identity_tensor(4, 2).at({0, 0, 1, 1}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("shift bounds") {
  CHECK(beta_conservative(builtin_corpus("kore02")) == doctest::Approx(55.6620).epsilon(1e-12));
  CHECK(beta_conservative(builtin_corpus("odd33")) == doctest::Approx(9.3560).epsilon(1e-12));
  const auto a = builtin_corpus("kore02");
  const double sampled = beta_sampled(a, 2000, 1);
  CHECK(sampled > 0.0);
  CHECK(sampled <= beta_conservative(a));
  CHECK(beta_sampled(a, 2000, 1) == sampled);
  // 𝒜x^{m-2} = I for the identity, so beta = (m-1).
  CHECK(beta_sampled(identity_tensor(4, 3), 50, 0) == doctest::Approx(3.0).epsilon(1e-12));
}
