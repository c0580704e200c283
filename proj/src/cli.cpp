#include "sshopm/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sshopm/basins.hpp"
#include "sshopm/errors.hpp"
#include "sshopm/io.hpp"
#include "sshopm/oracle.hpp"
#include "sshopm/solver.hpp"

namespace sshopm {

namespace {

struct TensorSource {
  std::string file;
  std::string builtin;

  void add(CLI::App* app) {
    auto* f = app->add_option("--tensor", file, "Tensor file");
    auto* b = app->add_option("--builtin", builtin, "Built-in tensor (kore02, odd33, perm3, diag42, identity-M-N)");
    f->excludes(b);
  }

  SymTensor load() const {
    if (!file.empty()) return load_tensor(file);
    if (!builtin.empty()) return builtin_corpus(builtin);
    throw ArgumentError("one of --tensor or --builtin is required");
  }
};

struct SolveFlags {
  std::string alpha = "0";
  double alpha_imag = 0.0;
  double tol = 1e-15;
  double x_tol = 1e-10;
  int max_iters = 1000;
  std::uint64_t seed = 0;

  void add(CLI::App* app, bool with_alpha = true) {
    if (with_alpha) app->add_option("--alpha", alpha, "Shift: a number, auto or auto-neg");
    app->add_option("--tol", tol, "Stop threshold on |lambda_{k+1} - lambda_k|");
    app->add_option("--x-tol", x_tol, "Stop threshold on ||x_{k+1} - x_k||");
    app->add_option("--max-iters", max_iters, "Iteration cap");
    app->add_option("--seed", seed, "Base seed");
  }

  ShiftConfig config(const SymTensor& a) const {
    ShiftConfig cfg;
    if (alpha == "auto") {
      cfg.alpha = beta_conservative(a) + 1.0;
    } else if (alpha == "auto-neg") {
      cfg.alpha = -(beta_conservative(a) + 1.0);
    } else {
      const auto v = parse_real_list(alpha);
      if (v.size() != 1) throw ArgumentError("--alpha takes a single value");
      cfg.alpha = v.front();
    }
    cfg.alpha_imag = alpha_imag;
    cfg.tol = tol;
    cfg.x_tol = x_tol;
    cfg.max_iters = max_iters;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
  }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "stdout") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot write '" + path + "'");
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RealVector unit_vector(const std::string& text, int dim) {
  auto x = parse_real_list(text);
  if (x.size() != static_cast<std::size_t>(dim))
    throw ArgumentError(fmt::format("expected {} components, got {}", dim, x.size()));
  const double nrm = norm2(x);
  if (nrm == 0.0) throw ArgumentError("vector must be nonzero");
  for (double& v : x) v /= nrm;
  return x;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shifted symmetric higher-order power method for tensor eigenpairs", "sshopm"};
  app.require_subcommand(1);

  TensorSource src;
  SolveFlags flags;
  std::string format = "table";
  std::string out_path;
  int trials = 100;
  bool complex = false;
  int starts = 5000;

  auto* solve = app.add_subcommand("solve", "Multistart SS-HOPM summary");
  src.add(solve);
  flags.add(solve);
  solve->add_option("--alpha-imag", flags.alpha_imag, "Imaginary part of the shift (complex mode)");
  solve->add_option("--trials", trials, "Number of random starts")->check(CLI::PositiveNumber);
  solve->add_flag("--complex", complex, "Run complex SS-HOPM");
  solve->add_option("--format", format, "table, csv or json");
  solve->add_option("--out", out_path, "Output file (default stdout)");

  auto* enumerate = app.add_subcommand("enumerate", "All real eigenpairs by Newton multistart");
  src.add(enumerate);
  enumerate->add_option("--starts", starts, "Newton starts")->check(CLI::PositiveNumber);
  enumerate->add_option("--seed", flags.seed, "Base seed");
  enumerate->add_option("--format", format, "table, csv or json");
  enumerate->add_option("--out", out_path, "Output file (default stdout)");

  double alpha_min = 0.0, alpha_max = 10.0;
  int alpha_steps = 41;
  std::string alphas_text;
  std::string pairs_path;
  auto* sweep = app.add_subcommand("sweep-alpha", "Spectral radius of the fixed-point Jacobian over a shift grid");
  src.add(sweep);
  sweep->add_option("--alpha-min", alpha_min, "Smallest shift");
  sweep->add_option("--alpha-max", alpha_max, "Largest shift");
  sweep->add_option("--alpha-steps", alpha_steps, "Grid points")->check(CLI::PositiveNumber);
  sweep->add_option("--alphas", alphas_text, "Explicit comma separated shifts");
  sweep->add_option("--pairs", pairs_path, "CSV of eigenpairs lambda,x1,...,xn (default: enumerate)");
  sweep->add_option("--starts", starts, "Newton starts when enumerating")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", flags.seed, "Base seed");
  sweep->add_option("--out", out_path, "Output file (default stdout)");

  std::string resolution = "360x180";
  std::string prefix = "basins";
  auto* basins = app.add_subcommand("basins", "Basin-of-attraction raster for n = 3");
  src.add(basins);
  flags.add(basins);
  basins->add_option("--resolution", resolution, "WxH");
  basins->add_option("--out", prefix, "Output prefix: PREFIX.ppm and PREFIX_legend.csv");

  std::string x0_text;
  auto* trace = app.add_subcommand("trace", "Per-iteration lambda and step size of one run");
  src.add(trace);
  flags.add(trace);
  trace->add_option("--x0", x0_text, "Comma separated start vector (normalized)");
  trace->add_flag("--complex", complex, "Trace complex SS-HOPM");
  trace->add_option("--alpha-imag", flags.alpha_imag, "Imaginary part of the shift");
  trace->add_option("--out", out_path, "Output file (default stdout)");

  double lambda = 0.0;
  std::string x_text;
  double verify_tol = 1e-8;
  auto* classify_cmd = app.add_subcommand("classify", "Verify and classify a claimed eigenpair");
  src.add(classify_cmd);
  classify_cmd->add_option("--lambda", lambda, "Eigenvalue")->required();
  classify_cmd->add_option("--x", x_text, "Comma separated eigenvector")->required();
  classify_cmd->add_option("--verify-tol", verify_tol, "Residual tolerance");
  classify_cmd->add_option("--alphas", alphas_text, "Shifts at which to report rho(J)");

  auto* tensor_cmd = app.add_subcommand("tensor", "Print a tensor in canonical file form");
  src.add(tensor_cmd);
  tensor_cmd->add_option("--out", out_path, "Output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    const SymTensor a = src.load();

    if (*solve) {
      const Format fmt_kind = parse_format(format);
      const ShiftConfig cfg = flags.config(a);
      RenderContext ctx{a.order(), a.dim(), cfg, trials, complex};
      const std::string text = complex ? render_summary(complex_multistart(a, cfg, trials), ctx, fmt_kind)
                                       : render_summary(multistart(a, cfg, trials), ctx, fmt_kind);
      emit(text, out_path, out);
    } else if (*enumerate) {
      const Format fmt_kind = parse_format(format);
      emit(render_enumeration(enumerate_real(a, starts, flags.seed), a.order(), a.dim(), fmt_kind),
           out_path, out);
    } else if (*sweep) {
      std::vector<double> alphas;
      if (!alphas_text.empty()) {
        alphas = parse_real_list(alphas_text);
      } else if (alpha_steps == 1) {
        alphas = {alpha_min};
      } else {
        for (int k = 0; k < alpha_steps; ++k)
          alphas.push_back(alpha_min + (alpha_max - alpha_min) * k / (alpha_steps - 1));
      }
      std::vector<EigenPair> pairs = pairs_path.empty() ? enumerate_real(a, starts, flags.seed).pairs
                                                        : parse_pairs_csv(read_file(pairs_path), a.dim());
      for (auto& p : pairs) {
        const double nrm = norm2(p.x);
        if (nrm == 0.0) throw ArgumentError("eigenvector must be nonzero");
        for (double& v : p.x) v /= nrm;
      }
      emit(render_sweep_csv(stability_sweep(a, pairs, alphas)), out_path, out);
    } else if (*basins) {
      int w = 0, h = 0;
      char sep = 0;
      std::istringstream rs(resolution);
      if (!(rs >> w >> sep >> h) || sep != 'x' || !rs.eof())
        throw ArgumentError("--resolution must look like 360x180");
      const auto raster = compute_basins(a, flags.config(a), w, h);
      emit(render_ppm(raster), prefix + ".ppm", out);
      emit(render_legend_csv(raster), prefix + "_legend.csv", out);
      out << fmt::format("{} basins, {} of {} cells without a limit; wrote {}.ppm and {}_legend.csv\n",
                         raster.legend.size(), raster.none_count(), raster.ids.size(), prefix, prefix);
    } else if (*trace) {
      const ShiftConfig cfg = flags.config(a);
      if (complex) {
        ComplexVector x0;
        if (x0_text.empty()) {
          x0 = random_complex_start(a.dim(), cfg.seed);
        } else {
          for (double v : unit_vector(x0_text, a.dim())) x0.emplace_back(v, 0.0);
        }
        emit(render_trace_csv(complex_sshopm(a, x0, cfg).trace, true), out_path, out);
      } else {
        const RealVector x0 = x0_text.empty() ? random_start(a.dim(), cfg.seed) : unit_vector(x0_text, a.dim());
        emit(render_trace_csv(sshopm(a, x0, cfg).trace), out_path, out);
      }
    } else if (*classify_cmd) {
      const auto x = parse_real_list(x_text);
      if (x.size() != static_cast<std::size_t>(a.dim()))
        throw ArgumentError(fmt::format("expected {} components, got {}", a.dim(), x.size()));
      const auto alphas = alphas_text.empty() ? std::vector<double>{} : parse_real_list(alphas_text);
      const auto r = verify_pair(a, lambda, x, verify_tol, alphas);
      out << fmt::format("residual {:.3e}\nnorm_error {:.3e}\n", r.residual, r.norm_error);
      out << "c_spectrum";
      for (double v : r.c_spectrum) out << fmt::format(" {:.6f}", v);
      out << fmt::format("\ntype {}\n", r.classification ? to_string(*r.classification) : "");
      for (const auto& [alpha, rho] : r.rho)
        out << fmt::format("rho alpha={} {}\n", alpha, rho ? fmt::format("{:.6f}", *rho) : "undefined");
      out << (r.pass ? "verified\n" : "not an eigenpair\n");
    } else if (*tensor_cmd) {
      emit(write_tensor(a), out_path, out);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace sshopm
