#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sshopm/errors.hpp"
#include "sshopm/io.hpp"
#include "sshopm/solver.hpp"

using namespace sshopm;

TEST_CASE("config validation") {
  ShiftConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = {};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = {};
  cfg.alpha = -1;
  CHECK(cfg.mode() == ShiftMode::Concave);
}

TEST_CASE("sshopm rejects bad starts") {
  const auto a = builtin_corpus("kore02");
  CHECK_THROWS_AS(::sshopm::sshopm(a, std::vector<double>{1, 0}, {}), ArgumentError);
  CHECK_THROWS_AS(::sshopm::sshopm(a, std::vector<double>{1, 1, 0}, {}), ArgumentError);
}

TEST_CASE("zero tensor with positive shift stays put") {
  const SymTensor z(4, 3);
  ShiftConfig cfg;
  cfg.alpha = 1.0;
  const std::vector<double> x0 = {0.0, 0.6, 0.8};
  const auto run = ::sshopm::sshopm(z, x0, cfg);
  CHECK(run.pair.converged);
  CHECK(run.pair.lambda == 0.0);
  CHECK(run.pair.x == x0);
  CHECK(run.pair.iterations == 1);
}

TEST_CASE("vanishing update is a numerical failure") {
  // x = e1 is an eigenvector with lambda = -1, so alpha = 1 annihilates it.
  const auto a = builtin_corpus("diag42");
  ShiftConfig cfg;
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(::sshopm::sshopm(a, std::vector<double>{0, 1}, cfg), NumericalFailure);
}

TEST_CASE("convex and concave traces are monotone") {
  const auto a = builtin_corpus("kore02");
  for (double alpha : {2.0, -2.0}) {
    ShiftConfig cfg;
    cfg.alpha = alpha;
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto run = ::sshopm::sshopm(a, random_start(3, s), cfg);
      const auto& st = run.trace.steps;
      REQUIRE(st.size() == static_cast<std::size_t>(run.pair.iterations) + 1);
      CHECK(std::isnan(st.front().dx));
      for (std::size_t k = 1; k < st.size(); ++k) {
        if (alpha > 0)
          CHECK(st[k].lambda >= st[k - 1].lambda - 1e-13);
        else
          CHECK(st[k].lambda <= st[k - 1].lambda + 1e-13);
      }
      CHECK(run.pair.converged);
      CHECK(eigen_residual(a, run.pair.lambda, run.pair.x) < 1e-8);
    }
  }
}

TEST_CASE("identity tensor converges immediately with lambda 1") {
  const auto e = identity_tensor(4, 2);
  const auto run = ::sshopm::sshopm(e, std::vector<double>{0.6, -0.8}, {});
  CHECK(run.pair.converged);
  for (const auto& s : run.trace.steps) CHECK(std::abs(s.lambda - 1.0) < 1e-15);
}

TEST_CASE("classification") {
  CHECK(classify_spectrum(std::vector<double>{-1, -2}) == Classification::NegativeStable);
  CHECK(classify_spectrum(std::vector<double>{1, 2}) == Classification::PositiveStable);
  CHECK(classify_spectrum(std::vector<double>{-1, 2}) == Classification::Unstable);
  CHECK(classify_spectrum(std::vector<double>{1e-9, 2}) == Classification::Degenerate);
  CHECK(classify_spectrum(std::vector<double>{}) == Classification::Degenerate);
  const auto a = builtin_corpus("diag42");
  CHECK(classify(a, 1.0, std::vector<double>{1, 0}) == Classification::NegativeStable);
  CHECK(classify(a, -1.0, std::vector<double>{0, 1}) == Classification::PositiveStable);
  CHECK(to_string(Classification::Unstable) == "Unstable");
}

TEST_CASE("projected Hessian against an explicit basis") {
  std::mt19937_64 rng(4);
  const auto a = oracle::random_tensor(4, 3, rng);
  const auto x = oracle::random_unit(3, rng);
  const double lambda = 0.3;
  const auto c = projected_hessian(a, lambda, x);
  // Any orthonormal tangent basis gives the same spectrum.
  std::vector<double> t1 = {x[1], -x[0], 0.0};
  double s = norm2(t1);
  for (double& v : t1) v /= s;
  const std::vector<double> t2 = {x[1] * t1[2] - x[2] * t1[1], x[2] * t1[0] - x[0] * t1[2], x[0] * t1[1] - x[1] * t1[0]};
  const auto h = contract_to_matrix(a, x);
  auto q = [&](const std::vector<double>& u, const std::vector<double>& v) {
    const auto hv = h * v;
    return 3.0 * dot(u, hv) - lambda * dot(u, v);
  };
  const Matrix ref = Matrix::from_rows(2, 2, std::vector<double>{q(t1, t1), q(t1, t2), q(t2, t1), q(t2, t2)});
  const auto w = sym_eigenvalues(c);
  const auto wr = sym_eigenvalues(ref);
  CHECK(w[0] == doctest::Approx(wr[0]).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(wr[1]).epsilon(1e-12));
}

TEST_CASE("closed-form Jacobian on diag42") {
  const auto a = builtin_corpus("diag42");
  const std::vector<double> x = {1, 0};
  for (double alpha : {0.25, 0.5, 1.0, 2.0, 10.0})
    CHECK(std::abs(spectral_radius(jacobian(a, 1.0, x, alpha)) - alpha / (1 + alpha)) < 1e-10);
  CHECK_THROWS_AS(jacobian(a, 1.0, x, -1.0), DomainError);
  CHECK(is_fixed_point(1.0, 0.0));
  CHECK_FALSE(is_fixed_point(-1.0, 0.5));
  CHECK(is_fixed_point(-1.0, -2.0));
  CHECK_FALSE(is_fixed_point(1.0, -0.5));
}

TEST_CASE("Jacobian matches a finite-difference derivative of the map") {
  const auto a = builtin_corpus("kore02");
  const double alpha = 2.0;
  ShiftConfig cfg;
  cfg.alpha = alpha;
  const auto p = ::sshopm::sshopm(a, random_start(3, 0), cfg).pair;
  REQUIRE(p.converged);
  auto phi = [&](const std::vector<double>& y) {
    auto v = ::sshopm::apply(a, y);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += alpha * y[i];
    const double s = norm2(v);
    for (double& t : v) t /= s;
    return v;
  };
  const auto j = jacobian(a, p.lambda, p.x, alpha);
  // phi is scale invariant, so compare along tangent directions only.
  const Matrix u = orthonormal_complement(p.x);
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<double> up = p.x, dn = p.x, dir(3);
    for (std::size_t i = 0; i < 3; ++i) dir[i] = u(i, c);
    for (std::size_t i = 0; i < 3; ++i) {
      up[i] += 1e-6 * dir[i];
      dn[i] -= 1e-6 * dir[i];
    }
    const auto fu = phi(up), fd = phi(dn);
    const auto jd = j * dir;
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs((fu[i] - fd[i]) / 2e-6 - jd[i]) < 1e-6);
  }
}

TEST_CASE("stability sweep marks undefined cells") {
  const auto a = builtin_corpus("diag42");
  EigenPair p;
  p.lambda = 1.0;
  p.x = {1, 0};
  const std::vector<EigenPair> pairs = {p};
  const std::vector<double> alphas = {-2.0, -1.0, 0.5, 1.0, 2.0};
  const auto rows = stability_sweep(a, pairs, alphas);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].rho.has_value());
  CHECK_FALSE(rows[1].rho.has_value());
  CHECK(*rows[2].rho == doctest::Approx(1.0 / 3.0));
  CHECK(*rows[3].rho == doctest::Approx(0.5));
  CHECK(*rows[4].rho == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("real canonical form and equivalence") {
  EigenPair p;
  p.lambda = 0.5;
  p.x = {-0.6, 0.8};
  const auto even = canonicalize_real(p, 4);
  CHECK(even.x == std::vector<double>{0.6, -0.8});
  CHECK(even.lambda == 0.5);
  CHECK(equivalent(p, even, 4, 1e-12));

  p.lambda = -0.5;
  p.c_spectrum = {-1.0, 2.0};
  p.classification = Classification::Unstable;
  const auto odd = canonicalize_real(p, 3);
  CHECK(odd.lambda == 0.5);
  CHECK(odd.x == std::vector<double>{0.6, -0.8});
  CHECK(odd.c_spectrum == std::vector<double>{-2.0, 1.0});
  CHECK(equivalent(p, odd, 3, 1e-12));
  EigenPair q = p;
  q.x = {0.6, -0.8};
  CHECK_FALSE(equivalent(p, q, 3, 1e-12));
  CHECK(equivalent(p, q, 4, 1e-12));
}

TEST_CASE("canonical forms are idempotent on solver output") {
  const auto a = builtin_corpus("odd33");
  ShiftConfig cfg;
  cfg.alpha = -1.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto p = canonicalize_real(::sshopm::sshopm(a, random_start(3, s), cfg).pair, 3);
    const auto again = canonicalize_real(p, 3);
    CHECK(again.x == p.x);
    CHECK(again.lambda == p.lambda);
    CHECK(p.lambda >= 0.0);
  }
}

TEST_CASE("complex canonical form is phase invariant") {
  const auto a = builtin_corpus("kore02");
  ShiftConfig cfg;
  cfg.alpha = 2.0;
  const auto run = complex_sshopm(a, random_complex_start(3, 4), cfg);
  REQUIRE(run.pair.converged);
  CHECK(eigen_residual(a, run.pair.lambda, run.pair.x) < 1e-8);
  const auto c = canonicalize_complex(run.pair, 4);
  CHECK(std::abs(c.lambda.imag()) < 1e-12);
  CHECK(c.lambda.real() > 0.0);
  CHECK(eigen_residual(a, c.lambda, c.x) < 1e-8);
  for (double phase : {0.3, 1.7, 3.0, -2.2}) {
    auto rot = run.pair;
    const Complex u = std::polar(1.0, phase);
    for (auto& v : rot.x) v *= u;
    rot.lambda *= u * u;
    const auto cr = canonicalize_complex(rot, 4);
    CHECK(equivalent(c, cr, 4, 1e-9));
    double d = 0.0;
    for (std::size_t i = 0; i < 3; ++i) d = std::max(d, std::abs(cr.x[i] - c.x[i]));
    CHECK(d < 1e-9);
  }
}

TEST_CASE("multistart is deterministic and accounts for every trial") {
  const auto a = builtin_corpus("kore02");
  ShiftConfig cfg;
  cfg.alpha = 2.0;
  cfg.seed = 42;
  const auto s1 = multistart(a, cfg, 30);
  const auto s2 = multistart(a, cfg, 30);
  int total = s1.failures;
  for (const auto& e : s1.entries) total += e.occurrences;
  CHECK(total == 30);
  REQUIRE(s1.entries.size() == s2.entries.size());
  for (std::size_t i = 0; i < s1.entries.size(); ++i) {
    CHECK(s1.entries[i].pair.lambda == s2.entries[i].pair.lambda);
    CHECK(s1.entries[i].median_iterations == s2.entries[i].median_iterations);
    if (i > 0) CHECK(s1.entries[i - 1].pair.lambda > s1.entries[i].pair.lambda);
  }
  CHECK(random_start(3, 9) == random_start(3, 9));
  CHECK(std::abs(norm2(random_start(5, 1)) - 1.0) < 1e-15);
}

TEST_CASE("shopm never converges on perm3") {
  const auto a = builtin_corpus("perm3");
  for (std::uint64_t s = 0; s < 10; ++s) CHECK_FALSE(shopm(a, random_start(3, s), {}).pair.converged);
}

TEST_CASE("converged pairs meet the residual contract at large shifts") {
  std::mt19937_64 rng(31);
  const auto a = oracle::random_tensor(4, 3, rng);
  ShiftConfig cfg;
  cfg.alpha = beta_conservative(a) + 1.0;
  cfg.max_iters = 50000;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto p = ::sshopm::sshopm(a, random_start(3, s), cfg).pair;
    REQUIRE(p.converged);
    CHECK(p.residual <= 1e-8);
  }
}

TEST_CASE("complex alpha=0 stagnates in modulus without converging") {
  const auto a = builtin_corpus("kore02");
  const auto run = complex_sshopm(a, random_complex_start(3, 0), {});
  CHECK(run.pair.lambda_converged);
  CHECK_FALSE(run.pair.converged);
  CHECK(std::abs(std::abs(run.pair.lambda) - 0.3656) < 1e-3);
  CHECK(std::abs(run.trace.steps.back().dx - 1.1993) < 1e-3);
}
