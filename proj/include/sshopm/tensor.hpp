#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sshopm/errors.hpp"
#include "sshopm/linalg.hpp"

namespace sshopm {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// One unique entry of a symmetric tensor: a multi-index (0-based, any order)
/// and the value shared by all of its permutations.
struct UniqueEntry {
  std::vector<int> index;
  double value = 0.0;
};

/// Dense real symmetric tensor of order m and dimension n.
///
/// All n^m entries are stored row-major (first index slowest). Every entry is
/// equal, bit for bit, to the entries at all permutations of its index. The
/// object is immutable once built and can be shared freely between threads.
class SymTensor {
 public:
  static constexpr std::size_t kDefaultMaxEntries = 100'000'000;

  /// Zero tensor.
  SymTensor(int order, int dim, std::size_t max_entries = kDefaultMaxEntries);

  /// Each output entry is the mean of `raw` over all permutations of its
  /// index. Groups whose raw values already agree are copied unchanged.
  static SymTensor symmetrize(std::span<const double> raw, int order, int dim,
                              std::size_t max_entries = kDefaultMaxEntries);

  /// Strict variant of symmetrize: rejects raw data whose entries differ from
  /// a permuted counterpart by more than `tol`.
  static SymTensor from_symmetric(std::span<const double> raw, int order, int dim,
                                  double tol = 1e-12,
                                  std::size_t max_entries = kDefaultMaxEntries);

  /// Builds from unique entries; each value lands on every permutation of its
  /// index. Repeating an index group (after sorting) is an ArgumentError.
  static SymTensor from_unique_entries(int order, int dim, std::span<const UniqueEntry> entries,
                                       std::size_t max_entries = kDefaultMaxEntries);

  int order() const noexcept { return order_; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const double> entries() const noexcept { return entries_; }

  /// 0-based multi-index of length order().
  double operator()(std::span<const int> index) const;
  double at(std::initializer_list<int> index) const {
    return (*this)(std::span<const int>(index.begin(), index.size()));
  }

  std::size_t linear_index(std::span<const int> index) const;
  std::vector<int> multi_index(std::size_t linear) const;

  /// The sorted (nondecreasing) multi-indices with nonzero value, in
  /// lexicographic order, with their values.
  std::vector<UniqueEntry> unique_nonzero_entries() const;

  friend bool operator==(const SymTensor&, const SymTensor&) = default;

 private:
  SymTensor(int order, int dim, std::vector<double> entries)
      : order_(order), dim_(dim), entries_(std::move(entries)) {}

  int order_;
  int dim_;
  std::vector<double> entries_;
};

/// Result of a contraction that leaves `order` free indices (a scalar when
/// order == 0).
struct DenseTensor {
  int order = 0;
  int dim = 0;
  std::vector<double> entries;
};

namespace detail {

/// Contracts the trailing index of a row-major order-k tensor with x,
/// `times` times. `entries` holds dim^order values.
template <typename T>
std::vector<T> contract_trailing(std::span<const double> entries, int dim,
                                 std::span<const T> x, int times) {
  std::vector<T> cur(entries.begin(), entries.end());
  const auto n = static_cast<std::size_t>(dim);
  for (int t = 0; t < times; ++t) {
    const std::size_t rows = cur.size() / n;
    std::vector<T> next(rows, T{});
    for (std::size_t r = 0; r < rows; ++r) {
      T acc{};
      const T* row = cur.data() + r * n;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
      next[r] = acc;
    }
    cur = std::move(next);
  }
  return cur;
}

void check_vector_length(const SymTensor& a, std::size_t len, const char* who);

}  // namespace detail

/// 𝒜x^{times}: contracts `times` = m - r indices with x and returns the order-r
/// remainder. Requires 1 <= times <= m.
DenseTensor multiply(const SymTensor& a, std::span<const double> x, int times);

/// f(x) = 𝒜x^m
double evaluate(const SymTensor& a, std::span<const double> x);

/// 𝒜x^{m-1}
RealVector apply(const SymTensor& a, std::span<const double> x);

/// 𝒜x^{m-2} as an n x n symmetric matrix. Requires m >= 2.
Matrix contract_to_matrix(const SymTensor& a, std::span<const double> x);

/// Complex analogues, no conjugation: 𝒜x^{m-1} and 𝒜x^m.
ComplexVector apply(const SymTensor& a, std::span<const Complex> x);
Complex evaluate(const SymTensor& a, std::span<const Complex> x);

/// g(x) = m 𝒜x^{m-1}
RealVector gradient(const SymTensor& a, std::span<const double> x);

/// H(x) = m(m-1) 𝒜x^{m-2}
Matrix hessian(const SymTensor& a, std::span<const double> x);

/// Identity tensor E with E x^{m-1} = ||x||^{m-2} x. Only exists for even m;
/// odd m throws DomainError.
SymTensor identity_tensor(int order, int dim);

/// (m-1) * sum of |a| over all n^m entries; an upper bound on the shift
/// threshold beta(𝒜).
double beta_conservative(const SymTensor& a);

/// (m-1) * max of rho(𝒜x^{m-2}) over `samples` random unit vectors
/// (normalized standard normals from a generator seeded with `seed`). A lower
/// estimate of beta(𝒜).
double beta_sampled(const SymTensor& a, int samples, std::uint64_t seed);

}  // namespace sshopm
