#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sshopm/solver.hpp"
#include "sshopm/tensor.hpp"

namespace sshopm {

/// Iterate of Newton's method on the system
///   𝒜x^{m-1} - lambda x = 0,  (x^T x - 1) / 2 = 0.
struct NewtonState {
  double lambda = 0.0;
  RealVector x;
  /// 2-norm of the stacked system residual at (lambda, x).
  double residual_norm = 0.0;
  int step_count = 0;
};

enum class NewtonStatus { Converged, Singular, Diverged, MaxSteps };

struct NewtonResult {
  NewtonStatus status = NewtonStatus::MaxSteps;
  NewtonState state;

  bool ok() const noexcept { return status == NewtonStatus::Converged; }
};

double newton_residual(const SymTensor& a, double lambda, std::span<const double> x);

/// Newton's method with the exact (n+1) x (n+1) Jacobian
///   [ (m-1)𝒜x^{m-2} - lambda I   -x ]
///   [ x^T                         0 ]
/// solved by partially pivoted elimination. Fails as Singular when the pivot
/// ratio exceeds 1e14 and as Diverged when the residual grows five steps in a
/// row or stops being finite.
NewtonResult newton_refine(const SymTensor& a, double lambda0, std::span<const double> x0,
                           double tol = 1e-12, int max_steps = 100);

/// Number of eigenvalue equivalence classes of a generic symmetric tensor:
/// ((m-1)^n - 1) / (m - 2), or n when m = 2.
std::uint64_t count_bound(int order, int dim);

struct Enumeration {
  /// Canonical, classified pairs in descending lambda.
  std::vector<EigenPair> pairs;
  std::uint64_t bound = 0;
  /// More distinct real pairs than count_bound allows; dedup went wrong or the
  /// tensor is not generic.
  bool bound_exceeded = false;
  int failed_starts = 0;
};

/// Real eigenpairs by Newton multistart. Start s draws x0 uniformly on the
/// sphere from seed + s and uses lambda0 = 𝒜x0^m. Meant for desk-scale
/// tensors (n <= 4, m <= 6); completeness is probabilistic.
Enumeration enumerate_real(const SymTensor& a, int starts = 5000, std::uint64_t seed = 0);

struct VerifyReport {
  double residual = 0.0;
  /// | ||x|| - 1 |
  double norm_error = 0.0;
  RealVector c_spectrum;
  std::optional<Classification> classification;
  /// (alpha, rho(J(x; alpha))) for each requested alpha; rho is empty where x
  /// is not a fixed point.
  std::vector<std::pair<double, std::optional<double>>> rho;
  bool pass = false;
};

/// Recomputes everything about a claimed eigenpair; passes when both the
/// residual and the norm error are at most `tol`.
VerifyReport verify_pair(const SymTensor& a, double lambda, std::span<const double> x, double tol,
                         std::span<const double> alphas = {});

}  // namespace sshopm
