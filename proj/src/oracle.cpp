#include "sshopm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <random>
#include <string>

#include "sshopm/errors.hpp"

namespace sshopm {

namespace {

/// Solves m * z = rhs in place with partial pivoting. Returns max/min pivot
/// magnitude (infinity for an exactly singular matrix).
double solve_in_place(Matrix m, RealVector& rhs) {
  const std::size_t n = m.rows();
  double max_pivot = 0.0;
  double min_pivot = std::numeric_limits<double>::infinity();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(piv, c), m(col, c));
      std::swap(rhs[piv], rhs[col]);
    }
    const double p = m(col, col);
    max_pivot = std::max(max_pivot, std::abs(p));
    min_pivot = std::min(min_pivot, std::abs(p));
    if (p == 0.0) return std::numeric_limits<double>::infinity();
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m(r, col) / p;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m(r, c) -= f * m(col, c);
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m(i, c) * rhs[c];
    rhs[i] = s / m(i, i);
  }
  return max_pivot / min_pivot;
}

RealVector system_residual(const SymTensor& a, double lambda, std::span<const double> x) {
  const auto ax = sshopm::apply(a, x);
  RealVector f(x.size() + 1);
  for (std::size_t i = 0; i < x.size(); ++i) f[i] = ax[i] - lambda * x[i];
  f.back() = 0.5 * (dot(x, x) - 1.0);
  return f;
}

}  // namespace

double newton_residual(const SymTensor& a, double lambda, std::span<const double> x) {
  detail::check_vector_length(a, x.size(), "newton_residual");
  return norm2(system_residual(a, lambda, x));
}

NewtonResult newton_refine(const SymTensor& a, double lambda0, std::span<const double> x0,
                           double tol, int max_steps) {
  detail::check_vector_length(a, x0.size(), "newton_refine");
  const std::size_t n = x0.size();
  const double m1 = a.order() - 1;

  NewtonResult out;
  NewtonState& s = out.state;
  s.lambda = lambda0;
  s.x.assign(x0.begin(), x0.end());
  RealVector f = system_residual(a, s.lambda, s.x);
  s.residual_norm = norm2(f);

  int growth = 0;
  while (true) {
    if (!std::isfinite(s.residual_norm)) {
      out.status = NewtonStatus::Diverged;
      return out;
    }
    if (s.residual_norm <= tol) {
      out.status = NewtonStatus::Converged;
      return out;
    }
    if (s.step_count >= max_steps) {
      out.status = NewtonStatus::MaxSteps;
      return out;
    }

    const Matrix h = contract_to_matrix(a, s.x);
    Matrix jac(n + 1, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) jac(i, j) = m1 * h(i, j);
      jac(i, i) -= s.lambda;
      jac(i, n) = -s.x[i];
      jac(n, i) = s.x[i];
    }
    RealVector step(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) step[i] = -f[i];
    if (!(solve_in_place(jac, step) <= 1e14)) {
      out.status = NewtonStatus::Singular;
      return out;
    }

    for (std::size_t i = 0; i < n; ++i) s.x[i] += step[i];
    s.lambda += step[n];
    ++s.step_count;
    f = system_residual(a, s.lambda, s.x);
    const double next = norm2(f);
    growth = next > s.residual_norm ? growth + 1 : 0;
    s.residual_norm = next;
    if (growth >= 5) {
      out.status = NewtonStatus::Diverged;
      return out;
    }
  }
}

std::uint64_t count_bound(int order, int dim) {
  if (order < 2) throw ArgumentError("count_bound: order must be >= 2");
  if (dim < 1) throw ArgumentError("count_bound: dimension must be >= 1");
  if (order == 2) return static_cast<std::uint64_t>(dim);
  // ((m-1)^n - 1)/(m-2) = 1 + (m-1) + ... + (m-1)^{n-1}
  const auto base = static_cast<std::uint64_t>(order - 1);
  std::uint64_t term = 1;
  std::uint64_t total = 0;
  for (int k = 0; k < dim; ++k) {
    if (total > std::numeric_limits<std::uint64_t>::max() - term)
      throw ArgumentError("count_bound: result does not fit in 64 bits");
    total += term;
    if (k + 1 < dim) {
      if (term > std::numeric_limits<std::uint64_t>::max() / base)
        throw ArgumentError("count_bound: result does not fit in 64 bits");
      term *= base;
    }
  }
  return total;
}

Enumeration enumerate_real(const SymTensor& a, int starts, std::uint64_t seed) {
  if (starts < 1) throw ArgumentError("enumerate_real: starts must be >= 1");
  const int m = a.order();
  Enumeration out;
  out.bound = count_bound(m, a.dim());
  PairCatalog<EigenPair> catalog(m);

  RealVector x0(static_cast<std::size_t>(a.dim()));
  for (int s = 0; s < starts; ++s) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(s));
    std::normal_distribution<double> normal(0.0, 1.0);
    double nrm = 0.0;
    do {
      for (double& v : x0) v = normal(rng);
      nrm = norm2(x0);
    } while (nrm == 0.0);
    for (double& v : x0) v /= nrm;

    const auto res = newton_refine(a, evaluate(a, x0), x0);
    if (!res.ok()) {
      ++out.failed_starts;
      continue;
    }
    EigenPair p;
    p.x = res.state.x;
    const double xn = norm2(p.x);
    for (double& v : p.x) v /= xn;
    p.lambda = evaluate(a, p.x);
    p.residual = eigen_residual(a, p.lambda, p.x);
    p.iterations = res.state.step_count;
    p.lambda_converged = p.converged = true;
    p = canonicalize_real(std::move(p), m);
    if (catalog.find(p)) continue;
    p.c_spectrum = sym_eigenvalues(projected_hessian(a, p.lambda, p.x));
    p.classification = classify_spectrum(p.c_spectrum);
    catalog.insert(p);
  }

  out.pairs = catalog.pairs();
  std::stable_sort(out.pairs.begin(), out.pairs.end(),
                   [](const EigenPair& l, const EigenPair& r) { return l.lambda > r.lambda; });
  out.bound_exceeded = out.pairs.size() > out.bound;
  if (out.bound_exceeded) {
    std::cerr << "warning: found " << out.pairs.size() << " distinct real eigenpairs, more than the "
              << out.bound << " equivalence classes a generic tensor of this shape has\n";
  }
  return out;
}

VerifyReport verify_pair(const SymTensor& a, double lambda, std::span<const double> x, double tol,
                         std::span<const double> alphas) {
  detail::check_vector_length(a, x.size(), "verify_pair");
  VerifyReport r;
  r.residual = eigen_residual(a, lambda, x);
  const double nrm = norm2(x);
  r.norm_error = std::abs(nrm - 1.0);
  r.pass = r.residual <= tol && r.norm_error <= tol;

  if (nrm > 0.0) {
    RealVector unit(x.begin(), x.end());
    for (double& v : unit) v /= nrm;
    r.c_spectrum = sym_eigenvalues(projected_hessian(a, lambda, unit));
    r.classification = classify_spectrum(r.c_spectrum);
    for (double alpha : alphas) {
      std::optional<double> rho;
      if (is_fixed_point(lambda, alpha)) rho = spectral_radius(jacobian(a, lambda, unit, alpha));
      r.rho.emplace_back(alpha, rho);
    }
  }
  return r;
}

}  // namespace sshopm
