#include "sshopm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "sshopm/errors.hpp"

namespace sshopm {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::NegativeStable: return "NegativeStable";
    case Classification::PositiveStable: return "PositiveStable";
    case Classification::Unstable: return "Unstable";
    case Classification::Degenerate: return "Degenerate";
  }
  return "Unknown";
}

void ShiftConfig::validate() const {
  if (!(tol > 0.0)) throw ArgumentError("ShiftConfig: tol must be positive");
  if (!(x_tol > 0.0)) throw ArgumentError("ShiftConfig: x_tol must be positive");
  if (max_iters < 1) throw ArgumentError("ShiftConfig: max_iters must be >= 1");
  if (!std::isfinite(alpha) || !std::isfinite(alpha_imag))
    throw ArgumentError("ShiftConfig: alpha must be finite");
}

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kResidualContract = 1e-8;
constexpr double kSignificant = 1e-12;

double hermitian_norm(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

double complex_distance(std::span<const Complex> a, std::span<const Complex> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

void require_unit(double nrm, const char* who) {
  if (!(std::abs(nrm - 1.0) <= kUnitTol))
    throw ArgumentError(std::string(who) + ": start vector must have unit norm");
}

double median(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void attach_classification(const SymTensor& a, EigenPair& p) {
  p.c_spectrum = sym_eigenvalues(projected_hessian(a, p.lambda, p.x));
  p.classification = classify_spectrum(p.c_spectrum);
}

}  // namespace

double eigen_residual(const SymTensor& a, double lambda, std::span<const double> x) {
  const auto ax = sshopm::apply(a, x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (ax[i] - lambda * x[i]) * (ax[i] - lambda * x[i]);
  return std::sqrt(s);
}

double eigen_residual(const SymTensor& a, Complex lambda, std::span<const Complex> x) {
  const auto ax = sshopm::apply(a, x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::norm(ax[i] - lambda * x[i]);
  return std::sqrt(s);
}

Run sshopm(const SymTensor& a, std::span<const double> x0, const ShiftConfig& cfg,
           std::span<const double> x_star) {
  cfg.validate();
  detail::check_vector_length(a, x0.size(), "sshopm");
  require_unit(norm2(x0), "sshopm");
  if (!x_star.empty()) detail::check_vector_length(a, x_star.size(), "sshopm reference");

  const std::size_t n = x0.size();
  const double alpha = cfg.alpha;
  const double sign = cfg.mode() == ShiftMode::Convex ? 1.0 : -1.0;

  Run run;
  RealVector x(x0.begin(), x0.end());
  RealVector ax = sshopm::apply(a, x);
  double lambda = dot(x, ax);

  auto record = [&](int k, double dx) {
    if (!cfg.record_trace) return;
    TraceStep step{k, lambda, 0.0, dx, std::numeric_limits<double>::quiet_NaN()};
    if (!x_star.empty()) step.error = distance(x, x_star);
    run.trace.steps.push_back(step);
  };
  record(0, std::numeric_limits<double>::quiet_NaN());

  RealVector next(n);
  int k = 0;
  bool lambda_ok = false;
  bool x_ok = false;
  bool res_ok = false;
  while (k < cfg.max_iters) {
    ++k;
    for (std::size_t i = 0; i < n; ++i) next[i] = sign * (ax[i] + alpha * x[i]);
    const double nrm = norm2(next);
    const double scale = norm2(ax) + std::abs(alpha);
    if (!(nrm > 1e-14 * scale)) {
      throw NumericalFailure("sshopm: shifted update vanished at iteration " + std::to_string(k) +
                             " (-alpha is an eigenvalue at the current iterate)");
    }
    for (double& v : next) v /= nrm;

    const double dx = distance(next, x);
    x.swap(next);
    ax = sshopm::apply(a, x);
    const double new_lambda = dot(x, ax);
    lambda_ok = std::abs(new_lambda - lambda) < cfg.tol;
    x_ok = dx < cfg.x_tol;
    lambda = new_lambda;
    record(k, dx);
    if (lambda_ok && x_ok) {
      double r2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) r2 += (ax[i] - lambda * x[i]) * (ax[i] - lambda * x[i]);
      res_ok = std::sqrt(r2) <= kResidualContract;
      if (res_ok) break;
    }
  }

  EigenPair& p = run.pair;
  p.lambda = lambda;
  p.x = std::move(x);
  p.residual = eigen_residual(a, p.lambda, p.x);
  p.iterations = k;
  p.lambda_converged = lambda_ok;
  p.converged = lambda_ok && x_ok && res_ok;
  if (p.converged) attach_classification(a, p);
  return run;
}

Run shopm(const SymTensor& a, std::span<const double> x0, ShiftConfig cfg) {
  cfg.alpha = 0.0;
  return sshopm(a, x0, cfg);
}

ComplexRun complex_sshopm(const SymTensor& a, std::span<const Complex> x0,
                          const ShiftConfig& cfg, std::span<const Complex> x_star) {
  cfg.validate();
  detail::check_vector_length(a, x0.size(), "complex_sshopm");
  require_unit(hermitian_norm(x0), "complex_sshopm");
  if (!x_star.empty()) detail::check_vector_length(a, x_star.size(), "complex_sshopm reference");

  const std::size_t n = x0.size();
  const Complex alpha = cfg.complex_alpha();

  ComplexRun run;
  ComplexVector x(x0.begin(), x0.end());
  ComplexVector ax = sshopm::apply(a, x);
  Complex lambda{};
  for (std::size_t i = 0; i < n; ++i) lambda += x[i] * ax[i];  // 𝒜x0^m, unconjugated

  auto record = [&](int k, double dx) {
    if (!cfg.record_trace) return;
    TraceStep step{k, lambda.real(), lambda.imag(), dx, std::numeric_limits<double>::quiet_NaN()};
    if (!x_star.empty()) step.error = complex_distance(x, x_star);
    run.trace.steps.push_back(step);
  };
  record(0, std::numeric_limits<double>::quiet_NaN());

  ComplexVector next(n);
  int k = 0;
  bool lambda_ok = false;
  bool x_ok = false;
  bool res_ok = false;
  while (k < cfg.max_iters) {
    ++k;
    const Complex denom = lambda + alpha;
    if (std::abs(denom) < 1e-14) {
      throw NumericalFailure("complex_sshopm: lambda_k + alpha vanished at iteration " +
                             std::to_string(k));
    }
    for (std::size_t i = 0; i < n; ++i) next[i] = (ax[i] + alpha * x[i]) / denom;
    const double nrm = hermitian_norm(next);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw NumericalFailure("complex_sshopm: update vanished at iteration " + std::to_string(k));
    for (auto& v : next) v /= nrm;

    const double dx = complex_distance(next, x);
    x.swap(next);
    ax = sshopm::apply(a, x);
    Complex new_lambda{};
    for (std::size_t i = 0; i < n; ++i) new_lambda += std::conj(x[i]) * ax[i];
    // The phase of lambda can keep rotating while x cycles; stagnation is
    // judged on the modulus.
    lambda_ok = std::abs(std::abs(new_lambda) - std::abs(lambda)) < cfg.tol;
    x_ok = dx < cfg.x_tol;
    lambda = new_lambda;
    record(k, dx);
    if (lambda_ok && x_ok) {
      double r2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) r2 += std::norm(ax[i] - lambda * x[i]);
      res_ok = std::sqrt(r2) <= kResidualContract;
      if (res_ok) break;
    }
  }

  ComplexEigenPair& p = run.pair;
  p.lambda = lambda;
  p.x = std::move(x);
  p.residual = eigen_residual(a, p.lambda, p.x);
  p.iterations = k;
  p.lambda_converged = lambda_ok;
  p.converged = lambda_ok && x_ok && res_ok;
  return run;
}

Matrix projected_hessian(const SymTensor& a, double lambda, std::span<const double> x) {
  detail::check_vector_length(a, x.size(), "projected_hessian");
  if (!(std::abs(norm2(x) - 1.0) <= kUnitTol))
    throw ArgumentError("projected_hessian: x must be a unit vector");
  Matrix m = contract_to_matrix(a, x);
  const std::size_t n = x.size();
  for (double& v : m.data()) v *= (a.order() - 1);
  for (std::size_t i = 0; i < n; ++i) m(i, i) -= lambda;
  return project(m, orthonormal_complement(x));
}

Classification classify_spectrum(std::span<const double> c_spectrum, double degenerate_tol) {
  bool neg = false;
  bool pos = false;
  for (double w : c_spectrum) {
    if (std::abs(w) <= degenerate_tol) return Classification::Degenerate;
    (w < 0.0 ? neg : pos) = true;
  }
  if (neg && pos) return Classification::Unstable;
  if (neg) return Classification::NegativeStable;
  if (pos) return Classification::PositiveStable;
  return Classification::Degenerate;  // n = 1: empty tangent space
}

Classification classify(const SymTensor& a, double lambda, std::span<const double> x,
                        double degenerate_tol) {
  return classify_spectrum(sym_eigenvalues(projected_hessian(a, lambda, x)), degenerate_tol);
}

bool is_fixed_point(double lambda, double alpha) noexcept {
  return alpha >= 0.0 ? lambda + alpha > 0.0 : lambda + alpha < 0.0;
}

Matrix jacobian(const SymTensor& a, double lambda, std::span<const double> x, double alpha) {
  detail::check_vector_length(a, x.size(), "jacobian");
  if (!(std::abs(norm2(x) - 1.0) <= kUnitTol))
    throw ArgumentError("jacobian: x must be a unit vector");
  if (!is_fixed_point(lambda, alpha)) {
    throw DomainError("jacobian: x is not a fixed point of the shifted map (lambda + alpha = " +
                      std::to_string(lambda + alpha) + ")");
  }
  const std::size_t n = x.size();
  const double m1 = a.order() - 1;
  Matrix j = contract_to_matrix(a, x);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double xx = x[r] * x[c];
      const double eye = r == c ? 1.0 : 0.0;
      j(r, c) = (m1 * (j(r, c) - lambda * xx) + alpha * (eye - xx)) / (lambda + alpha);
    }
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r + 1; c < n; ++c) j(r, c) = j(c, r) = 0.5 * (j(r, c) + j(c, r));
  return j;
}

std::vector<SweepRow> stability_sweep(const SymTensor& a, std::span<const EigenPair> pairs,
                                      std::span<const double> alphas) {
  std::vector<SweepRow> rows;
  rows.reserve(pairs.size() * alphas.size());
  for (std::size_t id = 0; id < pairs.size(); ++id) {
    for (double alpha : alphas) {
      SweepRow row{id, alpha, std::nullopt};
      if (is_fixed_point(pairs[id].lambda, alpha))
        row.rho = spectral_radius(jacobian(a, pairs[id].lambda, pairs[id].x, alpha));
      rows.push_back(row);
    }
  }
  return rows;
}

EigenPair canonicalize_real(EigenPair pair, int order) {
  const bool odd = order % 2 != 0;
  bool flip = false;
  if (odd && std::abs(pair.lambda) > kSignificant) {
    flip = pair.lambda < 0.0;
  } else {
    for (double v : pair.x) {
      if (std::abs(v) > kSignificant) {
        flip = v < 0.0;
        break;
      }
    }
  }
  if (!flip) return pair;

  for (double& v : pair.x) v = -v;
  if (odd) {
    // C(-lambda, -x) = -C(lambda, x)
    pair.lambda = -pair.lambda;
    std::reverse(pair.c_spectrum.begin(), pair.c_spectrum.end());
    for (double& w : pair.c_spectrum) w = -w;
    if (pair.classification == Classification::NegativeStable)
      pair.classification = Classification::PositiveStable;
    else if (pair.classification == Classification::PositiveStable)
      pair.classification = Classification::NegativeStable;
  }
  return pair;
}

ComplexEigenPair canonicalize_complex(ComplexEigenPair pair, int order) {
  const double xx = std::pow(hermitian_norm(pair.x), 2);
  if (!(xx >= 1e-12)) throw DomainError("canonicalize_complex: x^H x is (numerically) zero");
  if (std::abs(pair.lambda) < 1e-14)
    throw DomainError("canonicalize_complex: eigenvalue is zero, the eigenring is degenerate");

  const double root = std::sqrt(xx);
  for (auto& v : pair.x) v /= root;
  pair.residual /= std::pow(root, order - 1);

  const Complex* lead = nullptr;
  for (const auto& v : pair.x) {
    if (std::abs(v) > kSignificant) {
      lead = &v;
      break;
    }
  }
  const double lead_arg = std::arg(*lead);

  // x -> e^{i phi} x sends lambda -> e^{i (m-2) phi} lambda.
  const int p = order - 2;
  double phi = 0.0;
  if (p <= 0) {
    phi = -lead_arg;
  } else {
    const double phi0 = -std::arg(pair.lambda) / p;
    const double width = 2.0 * std::numbers::pi / p;
    // Window is shifted by a hair so a real leading component sits at phase 0
    // instead of jittering to the far edge.
    constexpr double kEdge = 1e-9;
    double target = std::fmod(lead_arg + phi0 + kEdge, width);
    if (target < 0.0) target += width;
    target -= kEdge;
    phi = target - lead_arg;
    pair.lambda = std::abs(pair.lambda) / std::pow(xx, order / 2.0 - 1.0);
  }
  const Complex rot = std::polar(1.0, phi);
  for (auto& v : pair.x) v *= rot;
  return pair;
}

bool equivalent(const EigenPair& a, const EigenPair& b, int order, double tol) {
  if (a.x.size() != b.x.size()) return false;
  const bool odd = order % 2 != 0;
  for (double s : {1.0, -1.0}) {
    const double lambda = odd ? s * a.lambda : a.lambda;
    if (std::abs(b.lambda - lambda) > tol) continue;
    double d = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) d += (b.x[i] - s * a.x[i]) * (b.x[i] - s * a.x[i]);
    if (std::sqrt(d) <= tol) return true;
  }
  return false;
}

bool equivalent(const ComplexEigenPair& a, const ComplexEigenPair& b, int order, double tol) {
  if (a.x.size() != b.x.size()) return false;
  Complex overlap{};
  for (std::size_t i = 0; i < a.x.size(); ++i) overlap += std::conj(a.x[i]) * b.x[i];
  if (std::abs(overlap) == 0.0) return false;
  const Complex rot = overlap / std::abs(overlap);
  double d = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) d += std::norm(b.x[i] - rot * a.x[i]);
  if (std::sqrt(d) > tol) return false;
  const Complex lambda = std::pow(rot, order - 2) * a.lambda;
  return std::abs(b.lambda - lambda) <= tol;
}

RealVector random_start(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  RealVector x(static_cast<std::size_t>(dim));
  double nrm = 0.0;
  do {
    for (double& v : x) v = uni(rng);
    nrm = norm2(x);
  } while (nrm < 1e-8);
  for (double& v : x) v /= nrm;
  return x;
}

ComplexVector random_complex_start(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  ComplexVector x(static_cast<std::size_t>(dim));
  double nrm = 0.0;
  do {
    for (auto& v : x) {
      const double re = uni(rng);
      const double im = uni(rng);
      v = {re, im};
    }
    nrm = hermitian_norm(x);
  } while (nrm < 1e-8);
  for (auto& v : x) v /= nrm;
  return x;
}

namespace {

template <typename Pair, typename Solve, typename Canon, typename Key>
Summary<Pair> run_trials(int order, int trials, Solve&& solve, Canon&& canon, Key&& key) {
  if (trials < 1) throw ArgumentError("multistart: trials must be >= 1");
  PairCatalog<Pair> catalog(order);
  std::vector<std::vector<int>> iterations;
  std::vector<std::size_t> first_trial;
  Summary<Pair> summary;
  summary.trials = trials;
  for (int t = 0; t < trials; ++t) {
    std::optional<Pair> found;
    try {
      found = solve(t);
    } catch (const NumericalFailure&) {
    }
    if (!found || !found->converged) {
      ++summary.failures;
      continue;
    }
    const std::size_t id = catalog.insert(canon(*found));
    if (id == iterations.size()) {
      iterations.emplace_back();
      first_trial.push_back(static_cast<std::size_t>(t));
    }
    iterations[id].push_back(found->iterations);
  }
  for (std::size_t id = 0; id < catalog.size(); ++id) {
    summary.entries.push_back({catalog.pairs()[id], static_cast<int>(iterations[id].size()),
                               median(iterations[id]), first_trial[id]});
  }
  // Keys are rounded so that pairs sharing an eigenvalue keep discovery order.
  std::stable_sort(summary.entries.begin(), summary.entries.end(), [&](const auto& l, const auto& r) {
    return std::round(key(l.pair) * 1e9) > std::round(key(r.pair) * 1e9);
  });
  return summary;
}

}  // namespace

RunSummary multistart(const SymTensor& a, const ShiftConfig& cfg, int trials) {
  cfg.validate();
  ShiftConfig quiet = cfg;
  quiet.record_trace = false;
  return run_trials<EigenPair>(
      a.order(), trials,
      [&](int t) {
        const auto x0 = random_start(a.dim(), cfg.seed + static_cast<std::uint64_t>(t));
        return sshopm(a, x0, quiet).pair;
      },
      [&](const EigenPair& p) { return canonicalize_real(p, a.order()); },
      [](const EigenPair& p) { return p.lambda; });
}

ComplexRunSummary complex_multistart(const SymTensor& a, const ShiftConfig& cfg, int trials) {
  cfg.validate();
  ShiftConfig quiet = cfg;
  quiet.record_trace = false;
  return run_trials<ComplexEigenPair>(
      a.order(), trials,
      [&](int t) {
        const auto x0 = random_complex_start(a.dim(), cfg.seed + static_cast<std::uint64_t>(t));
        return complex_sshopm(a, x0, quiet).pair;
      },
      [&](const ComplexEigenPair& p) {
        return std::abs(p.lambda) < 1e-14 ? p : canonicalize_complex(p, a.order());
      },
      [](const ComplexEigenPair& p) { return std::abs(p.lambda); });
}

}  // namespace sshopm
