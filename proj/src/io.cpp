#include "sshopm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "sshopm/errors.hpp"

namespace sshopm {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool to_int(std::string_view tok, int& out) {
  const auto* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc{} && p == end;
}

bool to_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc{} && p == end && std::isfinite(out);
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string fixed4(double v) {
  // Avoid printing "-0.0000" for values that round to zero.
  if (std::abs(v) < 5e-5) v = 0.0;
  return fmt::format("{:.4f}", v);
}

std::string vec4(std::span<const double> x) {
  std::string s = "[";
  for (double v : x) s += fmt::format(" {:>7}", fixed4(v));
  return s + " ]";
}

std::string cvec4(std::span<const Complex> x) {
  std::string s = "[";
  for (const auto& v : x) {
    const double im = std::abs(v.imag()) < 5e-5 ? 0.0 : v.imag();
    s += fmt::format(" {}{}{}i", fixed4(v.real()), im < 0 ? "-" : "+", fixed4(std::abs(im)));
  }
  return s + " ]";
}

std::string iters(double median) {
  return median == std::floor(median) ? fmt::format("{:.0f}", median) : fmt::format("{:.1f}", median);
}

nlohmann::json config_json(const RenderContext& ctx) {
  nlohmann::json c;
  c["alpha"] = ctx.config.alpha;
  if (ctx.complex) c["alpha_imag"] = ctx.config.alpha_imag;
  c["tol"] = ctx.config.tol;
  c["x_tol"] = ctx.config.x_tol;
  c["max_iters"] = ctx.config.max_iters;
  c["seed"] = ctx.config.seed;
  c["trials"] = ctx.trials;
  c["complex"] = ctx.complex;
  return c;
}

nlohmann::json tensor_json(int order, int dim) { return {{"m", order}, {"n", dim}}; }

}  // namespace

SymTensor parse_tensor(std::string_view text) {
  int order = 0;
  int dim = 0;
  std::size_t header_line = 0;
  std::vector<UniqueEntry> entries;
  std::set<std::vector<int>> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto tok = split_ws(line);
    if (header_line == 0) {
      if (tok.size() != 3 || tok[0] != "tensor")
        throw ParseError(line_no, "expected header 'tensor <m> <n>'");
      if (!to_int(tok[1], order) || order < 1)
        throw ParseError(line_no, "order must be a positive integer");
      if (!to_int(tok[2], dim) || dim < 1)
        throw ParseError(line_no, "dimension must be a positive integer");
      header_line = line_no;
      continue;
    }

    if (tok.size() != static_cast<std::size_t>(order) + 1) {
      throw ParseError(line_no, fmt::format("expected {} indices and a value, got {} fields", order,
                                            tok.size()));
    }
    std::vector<int> idx(static_cast<std::size_t>(order));
    for (int k = 0; k < order; ++k) {
      int i = 0;
      if (!to_int(tok[static_cast<std::size_t>(k)], i))
        throw ParseError(line_no, fmt::format("index '{}' is not an integer", tok[static_cast<std::size_t>(k)]));
      if (i < 1 || i > dim)
        throw ParseError(line_no, fmt::format("index {} out of range [1, {}]", i, dim));
      idx[static_cast<std::size_t>(k)] = i - 1;
    }
    double value = 0.0;
    if (!to_double(tok.back(), value))
      throw ParseError(line_no, fmt::format("value '{}' is not a finite number", tok.back()));
    std::sort(idx.begin(), idx.end());
    if (!seen.insert(idx).second) throw ParseError(line_no, "duplicate index group");
    entries.push_back({std::move(idx), value});
  }
  if (header_line == 0) throw ParseError(0, "missing 'tensor <m> <n>' header");

  try {
    return SymTensor::from_unique_entries(order, dim, entries);
  } catch (const ArgumentError& e) {
    throw ParseError(header_line, e.what());
  }
}

SymTensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open tensor file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_tensor(buf.str());
}

std::string write_tensor(const SymTensor& a) {
  std::string out = fmt::format("tensor {} {}\n", a.order(), a.dim());
  for (const auto& e : a.unique_nonzero_entries()) {
    for (int i : e.index) out += fmt::format("{} ", i + 1);
    out += num(e.value) + "\n";
  }
  return out;
}

SymTensor builtin_corpus(std::string_view name) {
  auto build = [](int order, int dim, std::initializer_list<std::pair<const char*, double>> list) {
    std::vector<UniqueEntry> entries;
    for (const auto& [digits, value] : list) {
      UniqueEntry e;
      for (const char* c = digits; *c != '\0'; ++c) e.index.push_back(*c - '1');
      e.value = value;
      entries.push_back(std::move(e));
    }
    return SymTensor::from_unique_entries(order, dim, entries);
  };

  if (name == "kore02") {
    return build(4, 3, {{"1111", 0.2883},  {"1112", -0.0031}, {"1113", 0.1973},
                        {"1122", -0.2485}, {"1123", -0.2939}, {"1133", 0.3847},
                        {"1222", 0.2972},  {"1223", 0.1862},  {"1233", 0.0919},
                        {"1333", -0.3619}, {"2222", 0.1241},  {"2223", -0.3420},
                        {"2233", 0.2127},  {"2333", 0.2727},  {"3333", -0.3054}});
  }
  if (name == "odd33") {
    return build(3, 3, {{"111", -0.1281}, {"112", 0.0516}, {"113", -0.0954}, {"122", -0.1958},
                        {"123", -0.1790}, {"133", -0.2676}, {"222", 0.3251}, {"223", 0.2513},
                        {"233", 0.1773},  {"333", 0.0338}});
  }
  if (name == "perm3") return build(3, 3, {{"123", 1.0}});
  if (name == "diag42") return build(4, 2, {{"1111", 1.0}, {"2222", -1.0}});

  constexpr std::string_view prefix = "identity-";
  if (name.starts_with(prefix)) {
    const auto rest = name.substr(prefix.size());
    const auto dash = rest.find('-');
    int order = 0;
    int dim = 0;
    if (dash != std::string_view::npos && to_int(rest.substr(0, dash), order) &&
        to_int(rest.substr(dash + 1), dim)) {
      return identity_tensor(order, dim);
    }
  }
  throw ArgumentError(fmt::format("unknown built-in tensor '{}' (known: kore02, odd33, perm3, "
                                  "diag42, identity-<m>-<n>)",
                                  name));
}

std::vector<std::string> builtin_names() { return {"kore02", "odd33", "perm3", "diag42"}; }

Format parse_format(std::string_view name) {
  if (name == "table") return Format::Table;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ArgumentError(fmt::format("unknown format '{}' (table, csv, json)", name));
}

std::string render_summary(const RunSummary& s, const RenderContext& ctx, Format format) {
  switch (format) {
    case Format::Json: {
      nlohmann::json j;
      j["tensor"] = tensor_json(ctx.order, ctx.dim);
      j["config"] = config_json(ctx);
      j["results"] = nlohmann::json::array();
      for (const auto& e : s.entries) {
        j["results"].push_back({{"lambda", e.pair.lambda},
                                {"x", e.pair.x},
                                {"type", e.pair.classification ? std::string(to_string(*e.pair.classification))
                                                               : std::string("Unclassified")},
                                {"occurrences", e.occurrences},
                                {"median_iters", e.median_iterations}});
      }
      j["failures"] = s.failures;
      return j.dump(2) + "\n";
    }
    case Format::Csv: {
      std::string out = "occurrences,lambda";
      for (int i = 1; i <= ctx.dim; ++i) out += fmt::format(",x{}", i);
      out += ",median_iters,type\n";
      for (const auto& e : s.entries) {
        out += fmt::format("{},{}", e.occurrences, num(e.pair.lambda));
        for (double v : e.pair.x) out += "," + num(v);
        out += fmt::format(",{},{}\n", num(e.median_iterations),
                           e.pair.classification ? to_string(*e.pair.classification) : "");
      }
      out += fmt::format("failures,{}\n", s.failures);
      return out;
    }
    case Format::Table: {
      std::string out = fmt::format("{:<13} {:>8}  {:<{}}  {:>11}  {}\n", "# Occurrences", "lambda",
                                    "x", 8 * ctx.dim + 3, "Median Its.", "Type");
      for (const auto& e : s.entries) {
        out += fmt::format("{:<13} {:>8}  {:<{}}  {:>11}  {}\n", e.occurrences, fixed4(e.pair.lambda),
                           vec4(e.pair.x), 8 * ctx.dim + 3, iters(e.median_iterations),
                           e.pair.classification ? to_string(*e.pair.classification) : "");
      }
      out += fmt::format("failures: {} of {} trials\n", s.failures, s.trials);
      return out;
    }
  }
  return {};
}

std::string render_summary(const ComplexRunSummary& s, const RenderContext& ctx, Format format) {
  switch (format) {
    case Format::Json: {
      nlohmann::json j;
      j["tensor"] = tensor_json(ctx.order, ctx.dim);
      j["config"] = config_json(ctx);
      j["results"] = nlohmann::json::array();
      for (const auto& e : s.entries) {
        nlohmann::json x = nlohmann::json::array();
        for (const auto& v : e.pair.x) x.push_back({v.real(), v.imag()});
        j["results"].push_back({{"lambda", {e.pair.lambda.real(), e.pair.lambda.imag()}},
                                {"abs_lambda", std::abs(e.pair.lambda)},
                                {"x", x},
                                {"type", nullptr},
                                {"occurrences", e.occurrences},
                                {"median_iters", e.median_iterations}});
      }
      j["failures"] = s.failures;
      return j.dump(2) + "\n";
    }
    case Format::Csv: {
      std::string out = "occurrences,abs_lambda,lambda_re,lambda_im";
      for (int i = 1; i <= ctx.dim; ++i) out += fmt::format(",x{0}_re,x{0}_im", i);
      out += ",median_iters\n";
      for (const auto& e : s.entries) {
        out += fmt::format("{},{},{},{}", e.occurrences, num(std::abs(e.pair.lambda)),
                           num(e.pair.lambda.real()), num(e.pair.lambda.imag()));
        for (const auto& v : e.pair.x) out += "," + num(v.real()) + "," + num(v.imag());
        out += "," + num(e.median_iterations) + "\n";
      }
      out += fmt::format("failures,{}\n", s.failures);
      return out;
    }
    case Format::Table: {
      std::string out = fmt::format("{:<13} {:>8}  {:>11}  {}\n", "# Occurrences", "|lambda|",
                                    "Median Its.", "x (eigenring representative)");
      for (const auto& e : s.entries) {
        out += fmt::format("{:<13} {:>8}  {:>11}  {}\n", e.occurrences, fixed4(std::abs(e.pair.lambda)),
                           iters(e.median_iterations), cvec4(e.pair.x));
      }
      out += fmt::format("failures: {} of {} trials\n", s.failures, s.trials);
      return out;
    }
  }
  return {};
}

std::string render_enumeration(const Enumeration& e, int order, int dim, Format format) {
  const std::string bound_line =
      fmt::format("bound = ((m-1)^n - 1)/(m-2) = {} (m={}, n={})", e.bound, order, dim);
  auto type_of = [](const EigenPair& p) {
    return p.classification ? std::string(to_string(*p.classification)) : std::string();
  };
  switch (format) {
    case Format::Json: {
      nlohmann::json j;
      j["tensor"] = tensor_json(order, dim);
      j["results"] = nlohmann::json::array();
      for (const auto& p : e.pairs) {
        j["results"].push_back({{"lambda", p.lambda},
                                {"x", p.x},
                                {"c_spectrum", p.c_spectrum},
                                {"type", type_of(p)},
                                {"residual", p.residual}});
      }
      j["count"] = e.pairs.size();
      j["bound"] = e.bound;
      j["bound_exceeded"] = e.bound_exceeded;
      return j.dump(2) + "\n";
    }
    case Format::Csv: {
      std::string out = "id,lambda";
      for (int i = 1; i <= dim; ++i) out += fmt::format(",x{}", i);
      for (int i = 1; i < dim; ++i) out += fmt::format(",c{}", i);
      out += ",type,residual\n";
      for (std::size_t id = 0; id < e.pairs.size(); ++id) {
        const auto& p = e.pairs[id];
        out += fmt::format("{},{}", id, num(p.lambda));
        for (double v : p.x) out += "," + num(v);
        for (double v : p.c_spectrum) out += "," + num(v);
        out += fmt::format(",{},{}\n", type_of(p), num(p.residual));
      }
      out += "# " + bound_line + "\n";
      return out;
    }
    case Format::Table: {
      std::string out = fmt::format("{:>8}  {:<{}}  {:<{}}  {}\n", "lambda", "x", 8 * dim + 3,
                                    "Eigenvalues of C(lambda,x)", 8 * std::max(dim - 1, 1) + 4, "Type");
      for (const auto& p : e.pairs) {
        std::string c = "{";
        for (double v : p.c_spectrum) c += fmt::format(" {:>7}", fixed4(v));
        c += " }";
        out += fmt::format("{:>8}  {:<{}}  {:<{}}  {}\n", fixed4(p.lambda), vec4(p.x), 8 * dim + 3, c,
                           std::max(26, 8 * std::max(dim - 1, 1) + 4), type_of(p));
      }
      out += fmt::format("{} real eigenpairs; {}\n", e.pairs.size(), bound_line);
      return out;
    }
  }
  return {};
}

std::string render_sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "eigenpair_id,alpha,rho,defined\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{}\n", r.pair_id, num(r.alpha), r.rho ? num(*r.rho) : "",
                       r.rho ? 1 : 0);
  }
  return out;
}

std::string render_trace_csv(const IterationTrace& trace, bool complex) {
  std::string out = complex ? "k,lambda,lambda_imag,dx_norm\n" : "k,lambda,dx_norm\n";
  for (const auto& s : trace.steps) {
    const std::string dx = std::isnan(s.dx) ? "" : num(s.dx);
    if (complex)
      out += fmt::format("{},{},{},{}\n", s.k, num(s.lambda), num(s.lambda_imag), dx);
    else
      out += fmt::format("{},{},{}\n", s.k, num(s.lambda), dx);
  }
  return out;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const auto tok = trim(text.substr(pos, comma - pos));
    double v = 0.0;
    if (!to_double(tok, v)) throw ArgumentError(fmt::format("'{}' is not a finite number", tok));
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

std::vector<EigenPair> parse_pairs_csv(std::string_view text, int dim) {
  std::vector<EigenPair> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#' || std::isalpha(static_cast<unsigned char>(line.front())))
      continue;
    std::vector<double> vals;
    try {
      vals = parse_real_list(line);
    } catch (const ArgumentError& e) {
      throw ParseError(line_no, e.what());
    }
    if (vals.size() != static_cast<std::size_t>(dim) + 1)
      throw ParseError(line_no, fmt::format("expected lambda and {} components", dim));
    EigenPair p;
    p.lambda = vals.front();
    p.x.assign(vals.begin() + 1, vals.end());
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace sshopm
