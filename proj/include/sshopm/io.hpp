#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sshopm/oracle.hpp"
#include "sshopm/solver.hpp"
#include "sshopm/tensor.hpp"

namespace sshopm {

// Tensor text format:
//
//   # comment
//   tensor <m> <n>
//   <i_1> ... <i_m> <value>
//   ...
//
// Indices are 1-based and need not be sorted; each line sets every
// permutation of its index group. Omitted groups are zero. Repeating a group
// is an error.

/// Throws ParseError (with the offending line number) on malformed input.
SymTensor parse_tensor(std::string_view text);

/// Reads and parses a tensor file. Unreadable files throw ParseError.
SymTensor load_tensor(const std::filesystem::path& path);

/// Canonical text: header, then nonzero unique entries in lexicographic order
/// of their sorted indices, values with 17 significant digits.
std::string write_tensor(const SymTensor& a);

/// Built-in tensors: kore02 (m=4, n=3), odd33 (m=3, n=3), perm3 (m=3, n=3,
/// ones where all indices differ), diag42 (m=4, n=2, a_1111 = 1,
/// a_2222 = -1) and identity-<m>-<n>. Unknown names throw ArgumentError.
SymTensor builtin_corpus(std::string_view name);

/// Names accepted by builtin_corpus, excluding the identity family.
std::vector<std::string> builtin_names();

enum class Format { Table, Csv, Json };

Format parse_format(std::string_view name);

struct RenderContext {
  int order = 0;
  int dim = 0;
  ShiftConfig config;
  int trials = 0;
  bool complex = false;
};

std::string render_summary(const RunSummary& summary, const RenderContext& ctx, Format format);
std::string render_summary(const ComplexRunSummary& summary, const RenderContext& ctx,
                           Format format);
std::string render_enumeration(const Enumeration& e, int order, int dim, Format format);

/// CSV with header `eigenpair_id,alpha,rho,defined`; undefined rows leave rho empty.
std::string render_sweep_csv(std::span<const SweepRow> rows);

/// CSV with header `k,lambda,dx_norm`; dx_norm is empty at k = 0. Complex
/// traces add a lambda_imag column.
std::string render_trace_csv(const IterationTrace& trace, bool complex = false);

/// Parses a comma separated list of reals ("0.5,1,2").
std::vector<double> parse_real_list(std::string_view text);

/// Parses eigenpairs from CSV rows `lambda,x_1,...,x_n` (header and '#' lines
/// skipped). Throws ParseError on malformed rows.
std::vector<EigenPair> parse_pairs_csv(std::string_view text, int dim);

}  // namespace sshopm
