// Batch front-end for the mean-winding diagnostics library.
//
// Subcommands: analyze, gallery, winding, bmo, finsec, factor, probe.
// Reports are CSV bodies plus JSON metadata; CSV bodies are deterministic,
// the timestamp lives in meta.json only.

#include <cstdio>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"
#include "meanwind/analyze.hpp"
#include "meanwind/io.hpp"
#include "meanwind/outer.hpp"
#include "meanwind/parser.hpp"
#include "meanwind/presets.hpp"

namespace {

using namespace meanwind;

struct SymbolArgs {
  std::string symbol;
  std::string preset;
  std::string symbol_file;

  std::string resolve() const {
    int given = (!symbol.empty()) + (!preset.empty()) + (!symbol_file.empty());
    if (given != 1)
      throw CLI::ValidationError(
          "exactly one of --symbol, --preset, --symbol-file is required");
    if (!symbol.empty()) return symbol;
    if (!preset.empty())
      return preset.rfind("preset:", 0) == 0 ? preset : "preset:" + preset;
    return io::read_file(symbol_file);
  }
};

void add_symbol_options(CLI::App* cmd, SymbolArgs& args) {
  cmd->add_option("--symbol", args.symbol, "inline symbol DSL text");
  cmd->add_option("--preset", args.preset, "preset name, e.g. whirl(k=2,alpha=0.5)");
  cmd->add_option("--symbol-file", args.symbol_file, "path to a symbol DSL file");
}

void add_config_options(CLI::App* cmd, cli::RunConfig& config) {
  cmd->add_option("--grid-count", config.grid_count, "tangent grid node count");
  cmd->add_option("--refine", config.grid_refinements, "extra grid refinement points");
  cmd->add_option("--max-depth", config.max_depth, "max unwrap refinement depth");
  cmd->add_option("--tail-tolerance", config.tail_tolerance,
                  "argument variation allowed over the outer decade");
  cmd->add_option("--eta", config.etas,
                  "test functions: alpha:<a> or steps:b0,..,bm|v1,..,vm");
  cmd->add_option("--t-min", config.t_min, "smallest T in the sweep");
  cmd->add_option("--t-max", config.t_max, "largest T in the sweep");
  cmd->add_option("--t-count", config.t_count, "log-spaced T count");
  cmd->add_option("--y-count", config.y_count, "translations per T (span [-T, T])");
  cmd->add_option("--alpha", config.alphas, "generalized winding exponents");
  cmd->add_option("--ratio-threshold", config.ratio_threshold,
                  "divergence threshold for the pairing/H1 ratio");
  cmd->add_option("--bmo-scales", config.bmo_scale_count, "dyadic scale count");
  cmd->add_option("--finsec-K", config.finsec_K, "Fourier coefficient range");
  cmd->add_option("--fft-size", config.finsec_fft_size, "circle sampling size (power of 2)");
  cmd->add_option("--n-list", config.finsec_n_list, "finite section sizes");
  cmd->add_option("--phi-N", config.phi_probe_N, "max power for the phi^n probe");
  cmd->add_option("--aliasing-tol", config.aliasing_tol, "finite-section aliasing gate");
  cmd->add_option("--nehari-margin", config.nehari_margin, "margin around distance 1");
  cmd->add_option("--out", config.out_dir, "output directory for the report bundle");
}

int finish(const cli::AnalyzeResult& result) {
  for (const auto& entry : result.verdicts)
    std::printf("%-36s %-15s %s\n", entry.check.c_str(), entry.verdict.c_str(),
                entry.detail.c_str());
  if (result.exit_code != 0) {
    auto it = result.files.find("MANIFEST");
    if (it != result.files.end()) std::fputs(it->second.c_str(), stderr);
  }
  return result.exit_code;
}

int run_factor(const std::string& weight_expr, int order, const std::string& out_dir) {
  // The weight is a DSL expression in x, read as the circle angle theta.
  const auto expr = symbolkit::parse_expression(weight_expr);
  const auto weight = [&](double theta) {
    const auto v = symbolkit::eval(*expr, symbolkit::Complex(theta, 0.0));
    return v.real();
  };
  const auto factor = hardy::spectral_factor_circle(weight, order);
  io::CsvWriter csv({"k", "re", "im"});
  for (size_t k = 0; k < factor.coeffs.size(); ++k)
    csv.row({io::fmt_int(static_cast<long long>(k)), io::fmt(factor.coeffs[k].real()),
             io::fmt(factor.coeffs[k].imag())});
  std::printf("outer factor coefficients c_0..c_%d (c_0 normalized positive)\n", order);
  std::fputs(csv.str().c_str(), stdout);
  std::printf("residual max| |g_e|^2 - w | = %s\n", io::fmt(factor.residual).c_str());
  if (!out_dir.empty()) {
    io::ensure_directory(out_dir);
    io::write_file(out_dir + "/factor.csv", csv.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean winding diagnostics for Toeplitz symbols on the real line"};
  app.require_subcommand(1);

  cli::RunConfig config;
  SymbolArgs sym;
  std::string config_file;
  std::string out_dir;
  std::string weight_expr;
  int factor_order = 16;

  auto* analyze = app.add_subcommand("analyze", "full pipeline with verdict table");
  add_symbol_options(analyze, sym);
  add_config_options(analyze, config);
  analyze->add_option("--config", config_file, "JSON config file (flags override)");

  auto* gallery = app.add_subcommand("gallery", "run the shipped symbol gallery");
  gallery->add_option("--out", out_dir, "output directory");

  auto* windingc = app.add_subcommand("winding", "trace + winding estimates only");
  add_symbol_options(windingc, sym);
  add_config_options(windingc, config);

  auto* bmoc = app.add_subcommand("bmo", "trace + oscillation diagnostics only");
  add_symbol_options(bmoc, sym);
  add_config_options(bmoc, config);

  auto* finsecc = app.add_subcommand("finsec", "finite-section oracle only");
  add_symbol_options(finsecc, sym);
  add_config_options(finsecc, config);

  auto* factor = app.add_subcommand("factor", "scalar spectral factorization of a circle weight");
  factor->add_option("--weight", weight_expr,
                     "positive weight w(x) with x read as the circle angle")
      ->required();
  factor->add_option("--order", factor_order, "highest returned coefficient index");
  factor->add_option("--out", out_dir, "output directory");

  auto* probe = app.add_subcommand("probe", "phi^n left-invertibility probe (scalar)");
  add_symbol_options(probe, sym);
  add_config_options(probe, config);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gallery->parsed()) {
      const auto result = cli::run_gallery(out_dir);
      std::fputs(result.report_csv.c_str(), stdout);
      return result.exit_code;
    }
    if (factor->parsed()) return run_factor(weight_expr, factor_order, out_dir);

    if (!config_file.empty()) {
      auto loaded = cli::config_from_json(io::read_file(config_file));
      loaded.symbol_source = sym.resolve();
      if (!config.out_dir.empty()) loaded.out_dir = config.out_dir;
      return finish(cli::run_analyze(loaded));
    }

    config.symbol_source = sym.resolve();
    if (windingc->parsed()) {
      config.enable_bmo = false;
      config.enable_finsec = false;
    } else if (bmoc->parsed()) {
      config.enable_winding = false;
      config.enable_finsec = false;
    } else if (finsecc->parsed() || probe->parsed()) {
      config.enable_winding = false;
      config.enable_bmo = false;
    }
    return finish(cli::run_analyze(config));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
