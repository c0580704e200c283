#include "sshopm/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

namespace sshopm {

namespace {

std::size_t checked_size(int order, int dim, std::size_t max_entries) {
  if (order < 1) throw ArgumentError("tensor order must be >= 1, got " + std::to_string(order));
  if (dim < 1) throw ArgumentError("tensor dimension must be >= 1, got " + std::to_string(dim));
  std::size_t total = 1;
  for (int k = 0; k < order; ++k) {
    if (total > max_entries / static_cast<std::size_t>(dim)) {
      throw ArgumentError("tensor with n=" + std::to_string(dim) + ", m=" + std::to_string(order) +
                          " exceeds the cap of " + std::to_string(max_entries) + " entries");
    }
    total *= static_cast<std::size_t>(dim);
  }
  return total;
}

/// Linear index of the sorted version of the multi-index at `linear`.
std::size_t sorted_linear(std::size_t linear, int order, int dim, std::vector<int>& scratch) {
  scratch.resize(static_cast<std::size_t>(order));
  for (int k = order - 1; k >= 0; --k) {
    scratch[static_cast<std::size_t>(k)] = static_cast<int>(linear % static_cast<std::size_t>(dim));
    linear /= static_cast<std::size_t>(dim);
  }
  std::sort(scratch.begin(), scratch.end());
  std::size_t out = 0;
  for (int i : scratch) out = out * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
  return out;
}

void check_finite(std::span<const double> raw) {
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (!std::isfinite(raw[i]))
      throw ArgumentError("tensor entry " + std::to_string(i) + " is not finite");
}

}  // namespace

SymTensor::SymTensor(int order, int dim, std::size_t max_entries)
    : order_(order), dim_(dim), entries_(checked_size(order, dim, max_entries), 0.0) {}

SymTensor SymTensor::symmetrize(std::span<const double> raw, int order, int dim,
                                std::size_t max_entries) {
  const std::size_t total = checked_size(order, dim, max_entries);
  if (raw.size() != total) {
    throw ArgumentError("symmetrize: expected " + std::to_string(total) + " entries, got " +
                        std::to_string(raw.size()));
  }
  check_finite(raw);

  struct Group {
    double sum = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
  };
  std::vector<Group> groups(total);
  std::vector<std::size_t> canon(total);
  std::vector<int> scratch;
  for (std::size_t l = 0; l < total; ++l) {
    const std::size_t c = sorted_linear(l, order, dim, scratch);
    canon[l] = c;
    Group& g = groups[c];
    if (g.count == 0) {
      g.lo = g.hi = raw[l];
    } else {
      g.lo = std::min(g.lo, raw[l]);
      g.hi = std::max(g.hi, raw[l]);
    }
    g.sum += raw[l];
    ++g.count;
  }

  // Every permutation of a multi-index with repeated values occurs equally
  // often among the m! permutations, so the group mean is the permutation mean.
  std::vector<double> out(total);
  for (std::size_t l = 0; l < total; ++l) {
    const Group& g = groups[canon[l]];
    out[l] = g.lo == g.hi ? g.lo : g.sum / static_cast<double>(g.count);
  }
  return SymTensor(order, dim, std::move(out));
}

SymTensor SymTensor::from_symmetric(std::span<const double> raw, int order, int dim, double tol,
                                    std::size_t max_entries) {
  SymTensor sym = symmetrize(raw, order, dim, max_entries);
  for (std::size_t l = 0; l < raw.size(); ++l) {
    if (std::abs(raw[l] - sym.entries_[l]) > tol) {
      throw ArgumentError("tensor is not symmetric: entry " + std::to_string(l) +
                          " deviates from its permutation mean by more than " +
                          std::to_string(tol));
    }
  }
  return sym;
}

SymTensor SymTensor::from_unique_entries(int order, int dim, std::span<const UniqueEntry> entries,
                                         std::size_t max_entries) {
  SymTensor out(order, dim, max_entries);
  std::vector<bool> seen(out.size(), false);
  std::vector<int> idx;
  for (const auto& e : entries) {
    if (e.index.size() != static_cast<std::size_t>(order))
      throw ArgumentError("unique entry has " + std::to_string(e.index.size()) +
                          " indices, expected " + std::to_string(order));
    if (!std::isfinite(e.value)) throw ArgumentError("unique entry value is not finite");
    idx = e.index;
    for (int i : idx)
      if (i < 0 || i >= dim) throw ArgumentError("unique entry index out of range");
    std::sort(idx.begin(), idx.end());
    const std::size_t key = out.linear_index(idx);
    if (seen[key]) throw ArgumentError("duplicate index group in unique entries");
    seen[key] = true;
    do {
      out.entries_[out.linear_index(idx)] = e.value;
    } while (std::next_permutation(idx.begin(), idx.end()));
  }
  return out;
}

std::size_t SymTensor::linear_index(std::span<const int> index) const {
  if (index.size() != static_cast<std::size_t>(order_))
    throw ArgumentError("multi-index length does not match tensor order");
  std::size_t out = 0;
  for (int i : index) {
    if (i < 0 || i >= dim_) throw ArgumentError("multi-index component out of range");
    out = out * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return out;
}

std::vector<int> SymTensor::multi_index(std::size_t linear) const {
  std::vector<int> idx(static_cast<std::size_t>(order_));
  for (int k = order_ - 1; k >= 0; --k) {
    idx[static_cast<std::size_t>(k)] = static_cast<int>(linear % static_cast<std::size_t>(dim_));
    linear /= static_cast<std::size_t>(dim_);
  }
  return idx;
}

double SymTensor::operator()(std::span<const int> index) const {
  return entries_[linear_index(index)];
}

std::vector<UniqueEntry> SymTensor::unique_nonzero_entries() const {
  std::vector<UniqueEntry> out;
  for (std::size_t l = 0; l < entries_.size(); ++l) {
    auto idx = multi_index(l);
    if (!std::is_sorted(idx.begin(), idx.end()) || entries_[l] == 0.0) continue;
    out.push_back({std::move(idx), entries_[l]});
  }
  return out;
}

namespace detail {

void check_vector_length(const SymTensor& a, std::size_t len, const char* who) {
  if (len != static_cast<std::size_t>(a.dim())) {
    throw ArgumentError(std::string(who) + ": vector length " + std::to_string(len) +
                        " does not match tensor dimension " + std::to_string(a.dim()));
  }
}

}  // namespace detail

DenseTensor multiply(const SymTensor& a, std::span<const double> x, int times) {
  detail::check_vector_length(a, x.size(), "multiply");
  if (times < 1 || times > a.order()) {
    throw ArgumentError("multiply: number of contractions must be in [1, " +
                        std::to_string(a.order()) + "], got " + std::to_string(times));
  }
  return DenseTensor{a.order() - times, a.dim(),
                     detail::contract_trailing<double>(a.entries(), a.dim(), x, times)};
}

double evaluate(const SymTensor& a, std::span<const double> x) {
  return multiply(a, x, a.order()).entries.front();
}

RealVector apply(const SymTensor& a, std::span<const double> x) {
  return multiply(a, x, a.order() - 1).entries;
}

Matrix contract_to_matrix(const SymTensor& a, std::span<const double> x) {
  if (a.order() < 2) throw ArgumentError("contract_to_matrix: tensor order must be >= 2");
  const auto n = static_cast<std::size_t>(a.dim());
  if (a.order() == 2) {
    detail::check_vector_length(a, x.size(), "contract_to_matrix");
    return Matrix::from_rows(n, n, a.entries());
  }
  return Matrix::from_rows(n, n, multiply(a, x, a.order() - 2).entries);
}

ComplexVector apply(const SymTensor& a, std::span<const Complex> x) {
  detail::check_vector_length(a, x.size(), "apply");
  return detail::contract_trailing<Complex>(a.entries(), a.dim(), x, a.order() - 1);
}

Complex evaluate(const SymTensor& a, std::span<const Complex> x) {
  detail::check_vector_length(a, x.size(), "evaluate");
  return detail::contract_trailing<Complex>(a.entries(), a.dim(), x, a.order()).front();
}

RealVector gradient(const SymTensor& a, std::span<const double> x) {
  auto g = sshopm::apply(a, x);
  for (double& v : g) v *= a.order();
  return g;
}

Matrix hessian(const SymTensor& a, std::span<const double> x) {
  Matrix h = contract_to_matrix(a, x);
  const double scale = static_cast<double>(a.order()) * (a.order() - 1);
  for (double& v : h.data()) v *= scale;
  return h;
}

SymTensor identity_tensor(int order, int dim) {
  if (order < 2) throw ArgumentError("identity_tensor: order must be >= 2");
  if (order % 2 != 0)
    throw DomainError("identity_tensor: there is no identity tensor for odd order m=" +
                      std::to_string(order));

  auto double_factorial = [](int k) {
    double r = 1.0;
    for (; k > 1; k -= 2) r *= k;
    return r;
  };
  // The normalized sum of delta products counts perfect matchings of the index
  // positions that only pair equal values: prod_v (c_v - 1)!! out of (m - 1)!!.
  const double all_matchings = double_factorial(order - 1);

  std::vector<UniqueEntry> entries;
  std::vector<int> idx(static_cast<std::size_t>(order), 0);
  while (true) {
    std::map<int, int> counts;
    for (int i : idx) ++counts[i];
    bool even = true;
    double matchings = 1.0;
    for (auto [value, c] : counts) {
      if (c % 2 != 0) even = false;
      matchings *= double_factorial(c - 1);
    }
    if (even) entries.push_back({idx, matchings / all_matchings});

    // next nondecreasing multi-index
    int k = order - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == dim - 1) --k;
    if (k < 0) break;
    const int v = idx[static_cast<std::size_t>(k)] + 1;
    for (int j = k; j < order; ++j) idx[static_cast<std::size_t>(j)] = v;
  }
  return SymTensor::from_unique_entries(order, dim, entries);
}

double beta_conservative(const SymTensor& a) {
  double s = 0.0;
  for (double v : a.entries()) s += std::abs(v);
  return (a.order() - 1) * s;
}

double beta_sampled(const SymTensor& a, int samples, std::uint64_t seed) {
  if (samples < 1) throw ArgumentError("beta_sampled: samples must be >= 1");
  if (a.order() < 2) throw ArgumentError("beta_sampled: tensor order must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector x(static_cast<std::size_t>(a.dim()));
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    double nrm = 0.0;
    do {
      for (double& v : x) v = normal(rng);
      nrm = norm2(x);
    } while (nrm == 0.0);
    for (double& v : x) v /= nrm;
    best = std::max(best, spectral_radius(contract_to_matrix(a, x)));
  }
  return (a.order() - 1) * best;
}

}  // namespace sshopm
