#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sshopm/linalg.hpp"
#include "sshopm/tensor.hpp"

namespace sshopm {

/// Sign pattern of the projected Hessian C(lambda, x).
enum class Classification { NegativeStable, PositiveStable, Unstable, Degenerate };

std::string_view to_string(Classification c);

enum class ShiftMode { Convex, Concave };

/// Iteration settings shared by the real and complex solvers.
struct ShiftConfig {
  double alpha = 0.0;
  /// Imaginary part of the shift; read only by complex_sshopm.
  double alpha_imag = 0.0;
  /// Stop threshold on |lambda_{k+1} - lambda_k|.
  double tol = 1e-15;
  /// Stop threshold on ||x_{k+1} - x_k||.
  double x_tol = 1e-10;
  int max_iters = 1000;
  std::uint64_t seed = 0;
  bool record_trace = true;

  ShiftMode mode() const noexcept { return alpha >= 0.0 ? ShiftMode::Convex : ShiftMode::Concave; }
  Complex complex_alpha() const noexcept { return {alpha, alpha_imag}; }

  /// Throws ArgumentError unless tol > 0, x_tol > 0 and max_iters >= 1.
  void validate() const;
};

/// Real Z-eigenpair candidate produced by a solver or the oracle.
struct EigenPair {
  double lambda = 0.0;
  RealVector x;
  /// ||𝒜x^{m-1} - lambda x||
  double residual = 0.0;
  /// Eigenvalues of C(lambda, x), ascending. Filled for converged pairs.
  RealVector c_spectrum;
  std::optional<Classification> classification;
  int iterations = 0;
  /// |lambda_{k+1} - lambda_k| < tol at the last step.
  bool lambda_converged = false;
  /// The lambda, x and residual criteria all held.
  bool converged = false;
};

struct ComplexEigenPair {
  Complex lambda{};
  ComplexVector x;
  double residual = 0.0;
  int iterations = 0;
  bool lambda_converged = false;
  bool converged = false;
};

struct TraceStep {
  int k = 0;
  double lambda = 0.0;
  /// Imaginary part of lambda_k (complex runs only).
  double lambda_imag = 0.0;
  /// ||x_k - x_{k-1}||; NaN at k = 0.
  double dx = std::numeric_limits<double>::quiet_NaN();
  /// ||x_k - x*|| when a reference x* was supplied, NaN otherwise.
  double error = std::numeric_limits<double>::quiet_NaN();
};

struct IterationTrace {
  std::vector<TraceStep> steps;
};

struct Run {
  EigenPair pair;
  IterationTrace trace;
};

struct ComplexRun {
  ComplexEigenPair pair;
  IterationTrace trace;
};

/// Shifted symmetric higher-order power method.
///
/// For alpha >= 0 (convex) iterates x <- normalize(𝒜x^{m-1} + alpha x); for
/// alpha < 0 (concave) the update is negated so that x does not flip sign.
/// Iteration stops once |lambda_{k+1} - lambda_k| < cfg.tol,
/// ||x_{k+1} - x_k|| < cfg.x_tol and ||𝒜x^{m-1} - lambda x|| <= 1e-8 all
/// hold, or after cfg.max_iters steps; the latter returns the last iterate
/// with converged == false. Converged pairs
/// carry their C(lambda, x) spectrum and classification.
///
/// When `x_star` is non-empty the trace records ||x_k - x_star||.
///
/// Throws ArgumentError when x0 is not a unit vector of length n and
/// NumericalFailure when the shifted update vanishes (-alpha is an eigenvalue
/// and x an eigenvector).
Run sshopm(const SymTensor& a, std::span<const double> x0, const ShiftConfig& cfg,
           std::span<const double> x_star = {});

/// Unshifted power method (sshopm with alpha = 0).
Run shopm(const SymTensor& a, std::span<const double> x0, ShiftConfig cfg);

/// Complex SS-HOPM with shift cfg.complex_alpha():
/// x <- normalize((𝒜x^{m-1} + alpha x) / (lambda + alpha)),
/// lambda <- x^H 𝒜x^{m-1}. lambda_0 = 𝒜x0^m.
///
/// Same stopping rule as sshopm, except that the lambda test compares
/// |lambda_{k+1}| with |lambda_k|. A run whose |lambda| stagnates while x
/// keeps moving ends with lambda_converged == true and converged == false.
/// Throws NumericalFailure when |lambda_k + alpha| < 1e-14.
ComplexRun complex_sshopm(const SymTensor& a, std::span<const Complex> x0,
                          const ShiftConfig& cfg, std::span<const Complex> x_star = {});

/// C(lambda, x) = U^T ((m-1) 𝒜x^{m-2} - lambda I) U with U the orthonormal
/// complement of x.
Matrix projected_hessian(const SymTensor& a, double lambda, std::span<const double> x);

Classification classify_spectrum(std::span<const double> c_spectrum, double degenerate_tol = 1e-8);
Classification classify(const SymTensor& a, double lambda, std::span<const double> x,
                        double degenerate_tol = 1e-8);

/// Jacobian of the fixed-point map at an eigenpair:
/// J = ((m-1)(𝒜x^{m-2} - lambda x x^T) + alpha (I - x x^T)) / (lambda + alpha).
///
/// x is a fixed point of the convex map (alpha >= 0) iff lambda + alpha > 0
/// and of the sign-corrected concave map (alpha < 0) iff lambda + alpha < 0.
/// Anything else throws DomainError.
Matrix jacobian(const SymTensor& a, double lambda, std::span<const double> x, double alpha);

/// True when x is a fixed point of the alpha-shifted map (see jacobian).
bool is_fixed_point(double lambda, double alpha) noexcept;

struct SweepRow {
  std::size_t pair_id = 0;
  double alpha = 0.0;
  /// rho(J(x; alpha)); empty where x is not a fixed point of the map.
  std::optional<double> rho;
};

/// rho(J) for every (pair, alpha) combination, pair-major order.
std::vector<SweepRow> stability_sweep(const SymTensor& a, std::span<const EigenPair> pairs,
                                      std::span<const double> alphas);

/// Representative of {(lambda, x), (lambda, -x)} for even m and of
/// {(lambda, x), (-lambda, -x)} for odd m: odd m picks lambda >= 0; otherwise
/// the first component with magnitude above 1e-12 is made positive.
EigenPair canonicalize_real(EigenPair pair, int order);

/// Rescales onto the eigenring representative with real positive lambda and
/// ||x|| = 1, fixing the remaining (m-2)-th root of unity so that the first
/// significant component of x has phase in [0, 2 pi / (m-2)). Throws
/// DomainError when lambda = 0 or x^H x < 1e-12.
ComplexEigenPair canonicalize_complex(ComplexEigenPair pair, int order);

/// (lambda, x) ~ (lambda', x') under the sign equivalence, within `tol` on
/// both |lambda - lambda'| and ||x - x'||.
bool equivalent(const EigenPair& a, const EigenPair& b, int order, double tol);

/// (lambda, x) ~ (e^{i(m-2)phi} lambda, e^{i phi} x) for some phi, within `tol`.
bool equivalent(const ComplexEigenPair& a, const ComplexEigenPair& b, int order, double tol);

/// Deduplicating store of canonical pairs. Ties go to the earliest insert.
template <typename Pair>
class PairCatalog {
 public:
  explicit PairCatalog(int order, double tol = 1e-6) : order_(order), tol_(tol) {}

  std::optional<std::size_t> find(const Pair& p) const {
    for (std::size_t i = 0; i < pairs_.size(); ++i)
      if (equivalent(pairs_[i], p, order_, tol_)) return i;
    return std::nullopt;
  }

  /// Id of the matching pair, inserting `p` when none matches.
  std::size_t insert(const Pair& p) {
    if (auto id = find(p)) return *id;
    pairs_.push_back(p);
    return pairs_.size() - 1;
  }

  const std::vector<Pair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }

 private:
  int order_;
  double tol_;
  std::vector<Pair> pairs_;
};

template <typename Pair>
struct SummaryEntry {
  Pair pair;
  int occurrences = 0;
  double median_iterations = 0.0;
  /// Index of the first trial that reached this pair.
  std::size_t first_trial = 0;
};

/// Distinct pairs found over a batch of trials; occurrences + failures = trials.
template <typename Pair>
struct Summary {
  std::vector<SummaryEntry<Pair>> entries;
  int failures = 0;
  int trials = 0;
};

using RunSummary = Summary<EigenPair>;
using ComplexRunSummary = Summary<ComplexEigenPair>;

/// Start vector for trial seeds: components uniform on [-1, 1], normalized,
/// redrawn while the norm is below 1e-8.
RealVector random_start(int dim, std::uint64_t seed);

/// Complex start: real and imaginary parts independently uniform on [-1, 1].
ComplexVector random_complex_start(int dim, std::uint64_t seed);

/// Runs `trials` SS-HOPM starts (trial i uses seed cfg.seed + i) and groups
/// converged results by canonical equivalence at 1e-6. Entries are ordered by
/// descending lambda.
RunSummary multistart(const SymTensor& a, const ShiftConfig& cfg, int trials);

/// Complex counterpart of multistart; entries are ordered by descending |lambda|.
ComplexRunSummary complex_multistart(const SymTensor& a, const ShiftConfig& cfg, int trials);

/// ||𝒜x^{m-1} - lambda x||
double eigen_residual(const SymTensor& a, double lambda, std::span<const double> x);
double eigen_residual(const SymTensor& a, Complex lambda, std::span<const Complex> x);

}  // namespace sshopm
