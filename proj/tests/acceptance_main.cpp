// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "meanwind/analyze.hpp"
#include "meanwind/argtrack.hpp"
#include "meanwind/io.hpp"
#include "meanwind/outer.hpp"
#include "meanwind/parser.hpp"
#include "meanwind/presets.hpp"
#include "meanwind/quadrature.hpp"
#include "meanwind/winding.hpp"

using namespace meanwind;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", criterion,
              name.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// 1. Whirl exactness: w_alpha recovers k within 5% at T_max = 1e4.
void criterion_1() {
  struct Case {
    double k, alpha;
  };
  const std::vector<Case> cases = {{2.0, 0.5}, {-3.0, 1.0}, {5.0, 1.0}};
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    cli::RunConfig config;
    config.symbol_source = "preset:whirl(k=" + io::fmt(c.k) + ",alpha=" + io::fmt(c.alpha) + ")";
    config.grid_count = 65537;
    config.t_min = 10.0;
    config.t_max = 1e4;
    config.t_count = 25;
    config.y_count = 41;
    config.alphas = {c.alpha};
    config.etas = {"alpha:" + io::fmt(c.alpha)};
    config.enable_bmo = false;
    config.enable_finsec = false;
    const auto result = cli::run_analyze(config);
    const double elapsed = seconds_since(t0);

    const auto& est = result.data.per_alpha.at(0).direct;
    // The y = 0 window is exact for the whirl family; the sup/inf side that
    // matches sign(k) attains it.
    const double attained = c.k > 0 ? est.upper.value : est.lower.value;
    const double tilde = c.k > 0 ? est.tilde_upper.value : est.tilde_lower.value;
    const bool ok_value = std::abs(attained - c.k) <= 0.05 * std::abs(c.k) &&
                          std::abs(tilde - c.k) <= 0.05 * std::abs(c.k);
    const bool ok_alpha1 =
        c.alpha != 1.0 || (std::abs(est.upper.value - c.k) <= 0.05 * std::abs(c.k) &&
                           std::abs(est.lower.value - c.k) <= 0.05 * std::abs(c.k));
    const bool ok_nodes = result.data.trace_nodes <= 1000000;
    const bool ok_time = elapsed <= 60.0;
    pass = pass && ok_value && ok_alpha1 && ok_nodes && ok_time;
    detail += "(k=" + io::fmt(c.k) + ",a=" + io::fmt(c.alpha) + "): est " +
              io::fmt(attained) + ", " + std::to_string(result.data.trace_nodes) +
              " nodes, " + io::fmt(elapsed) + "s; ";
  }
  report(1, "whirl exactness w_alpha = k (5%, T_max 1e4)", pass, detail);
}

// 2. Linear phase: the window-difference value equals kappa within 1e-9 at
//    every T.
void criterion_2() {
  const double kappa = 2.5;
  const auto sym = symbolkit::parse_symbol("exp(i*2.5*x)");
  const auto grid = symbolkit::SampleGrid::tangent(20001, {}, 2000.0);
  const auto trace = argtrack::unwrap_arg(sym, grid);
  const winding::PairingEngine engine(trace);
  const auto rep = winding::w_alpha(engine, 1.0, winding::log_spaced(1.0, 900.0, 25), 41);
  double worst = 0.0;
  for (size_t i = 0; i < rep.T.size(); ++i) {
    worst = std::max(worst, std::abs(rep.sup_y[i] - kappa));
    worst = std::max(worst, std::abs(rep.inf_y[i] - kappa));
    worst = std::max(worst, std::abs(rep.at_y0[i] - kappa));
  }
  report(2, "linear-phase finite-T exactness (1e-9)", worst <= 1e-9,
         "max |value - kappa| = " + io::fmt(worst));
}

// 3. SAP relations: w1 = -1, uw1 = 2, tilde w1 = 0.5 within 2%, beta = 2.
void criterion_3() {
  cli::RunConfig config;
  config.symbol_source = "preset:sap(km=-1,kp=2)";
  config.grid_count = 40001;
  config.t_min = 10.0;
  config.t_max = 1000.0;
  config.t_count = 25;
  config.y_count = 41;
  config.alphas = {1.0};
  config.enable_bmo = false;
  config.enable_finsec = false;
  const auto result = cli::run_analyze(config);
  const auto& est = result.data.per_alpha.at(0).direct;
  const bool ok = std::abs(est.lower.value - (-1.0)) <= 0.02 &&
                  std::abs(est.upper.value - 2.0) <= 0.04 &&
                  std::abs(est.tilde_upper.value - 0.5) <= 0.01 &&
                  std::abs(est.tilde_lower.value - 0.5) <= 0.01 &&
                  result.data.beta_ok &&
                  std::abs(result.data.beta_lower - 2.0) <= 0.04;
  report(3, "SAP relations w1/uw1/tilde-w1 and beta (2%)", ok,
         "w1 = " + io::fmt(est.lower.value) + ", uw1 = " + io::fmt(est.upper.value) +
             ", tilde = [" + io::fmt(est.tilde_lower.value) + ", " +
             io::fmt(est.tilde_upper.value) + "], beta >= " +
             io::fmt(result.data.beta_lower));
}

// 4. Index formula on rational symbols, wind in {-3..3}.
void criterion_4() {
  bool pass = true;
  std::string detail;
  for (int m = -3; m <= 3; ++m) {
    const auto t0 = std::chrono::steady_clock::now();
    cli::RunConfig config;
    config.symbol_source = "preset:rational(m=" + std::to_string(m) + ")";
    config.grid_count = 20001;
    config.trace_range = 2000.0;
    config.enable_winding = false;
    config.enable_bmo = false;
    config.finsec_K = 70;
    config.finsec_fft_size = 1024;
    config.finsec_n_list = {4, 8, 16, 32, 64};
    const auto result = cli::run_analyze(config);
    const double elapsed = seconds_since(t0);
    const bool ok = result.data.winding_ok && result.data.wind.winding == m &&
                    result.data.index_ok && result.data.index.index == -m &&
                    elapsed <= 10.0;
    pass = pass && ok;
    if (!ok) detail += "m=" + std::to_string(m) + " failed; ";
  }
  report(4, "index formula ind = -wind on rational winds -3..3", pass,
         pass ? "all seven symbols agree" : detail);
}

// 5. H1 scaling law within 1e-5 relative for T in {2, 10, 100}.
void criterion_5() {
  const std::vector<hardy::TestFunction> etas = {
      hardy::eta_alpha(0.5), hardy::eta_alpha(1.0),
      hardy::TestFunction::make({-2.0, 0.0, 1.0, 2.0}, {-0.5, 0.3, 0.7})};
  bool pass = true;
  double worst = 0.0;
  for (const auto& eta : etas) {
    const double base = hardy::h1_norm(eta).total();
    for (double T : {2.0, 10.0, 100.0}) {
      for (double y : {0.0, 5.0}) {
        const double ratio = hardy::h1_norm(hardy::scale_translate(eta, T, y)).total() / base;
        const double rel = std::abs(ratio / T - 1.0);
        worst = std::max(worst, rel);
        pass = pass && rel <= 1e-5;
      }
    }
  }
  report(5, "H1 scaling ||eta_{T,y}|| = T ||eta|| (1e-5)", pass,
         "worst relative deviation = " + io::fmt(worst));
}

// 6. Hilbert closed form vs principal-value quadrature, 100 points each.
void criterion_6() {
  const std::vector<hardy::TestFunction> etas = {
      hardy::eta_alpha(0.5), hardy::eta_alpha(1.0),
      hardy::TestFunction::make({-2.0, 0.0, 1.0, 2.0}, {-0.5, 0.3, 0.7})};
  unsigned state = 123456789u;
  auto next = [&state]() {
    state = state * 1664525u + 1013904223u;
    return static_cast<double>(state) / 4294967296.0;
  };
  bool pass = true;
  double worst = 0.0;
  for (const auto& eta : etas) {
    int done = 0;
    while (done < 100) {
      const double x = -6.0 + 12.0 * next();
      bool near_break = false;
      for (double a : eta.breakpoints) near_break |= std::abs(x - a) < 1e-6;
      if (near_break) continue;
      double delta = 1e30;
      for (double a : eta.breakpoints) delta = std::min(delta, std::abs(x - a));
      delta = std::min(0.5 * delta, 0.1);
      const auto f = [&](double t) { return eta.value(t) / (x - t); };
      double pv = 0.0;
      const double lo = eta.support_min(), hi = eta.support_max();
      if (x > lo && x < hi) {
        pv += quadrature::adaptive_simpson(f, lo, x - delta, 1e-12, 60);
        pv += quadrature::adaptive_simpson(f, x + delta, hi, 1e-12, 60);
      } else {
        pv += quadrature::adaptive_simpson(f, lo, hi, 1e-12, 60);
      }
      pv /= kPi;
      const double err = std::abs(hardy::hilbert_step(eta, x).value - pv);
      worst = std::max(worst, err);
      pass = pass && err <= 1e-8;
      ++done;
    }
  }
  report(6, "Hilbert closed form vs PV quadrature (1e-8)", pass,
         "worst |closed - PV| = " + io::fmt(worst));
}

// 7. Nehari landmarks: dist(w) = 0 within 1e-10, dist(conj w) = 1 within 1e-6.
void criterion_7() {
  const std::vector<int> n_list = {4, 8, 16, 32, 64};
  const auto analytic =
      finsec::fourier_coeffs(symbolkit::make_rational(1), 130, 2048);
  const auto probe_a = finsec::nehari_distance(analytic, n_list);
  const auto conj = finsec::fourier_coeffs(symbolkit::make_rational(-1), 130, 2048);
  const auto probe_c = finsec::nehari_distance(conj, n_list);
  bool monotone = true;
  for (size_t i = 1; i < probe_c.sigma.size(); ++i)
    monotone = monotone && probe_c.sigma[i] >= probe_c.sigma[i - 1] - 1e-12;
  const bool pass = probe_a.distance_lower_bound <= 1e-10 &&
                    std::abs(probe_c.distance_lower_bound - 1.0) <= 1e-6 && monotone;
  report(7, "Nehari landmarks dist(w) = 0, dist(conj w) = 1", pass,
         "dist(w) = " + io::fmt(probe_a.distance_lower_bound) + ", dist(conj w) = " +
             io::fmt(probe_c.distance_lower_bound) +
             (monotone ? ", sections monotone" : ", MONOTONICITY BROKEN"));
}

// 8. Spectral factorization: three weights, residual 1e-6; the |2+w|^2 case
//    recovers coefficients (2, 1, 0, ...) within 1e-8.
void criterion_8() {
  const auto f1 = hardy::spectral_factor_circle([](double) { return 4.0; }, 8);
  const auto f2 =
      hardy::spectral_factor_circle([](double t) { return 5.0 + 4.0 * std::cos(t); }, 16);
  const auto f3 =
      hardy::spectral_factor_circle([](double t) { return std::exp(std::cos(t)); }, 24);
  bool coeffs_ok = std::abs(f2.coeffs[0] - std::complex<double>(2.0, 0.0)) <= 1e-8 &&
                   std::abs(f2.coeffs[1] - std::complex<double>(1.0, 0.0)) <= 1e-8;
  for (size_t k = 2; k < f2.coeffs.size(); ++k)
    coeffs_ok = coeffs_ok && std::abs(f2.coeffs[k]) <= 1e-8;
  const bool pass = f1.residual <= 1e-6 && f2.residual <= 1e-6 && f3.residual <= 1e-6 &&
                    coeffs_ok;
  report(8, "spectral factorization |g_e|^2 = w (1e-6) and (2,1,0,..) (1e-8)", pass,
         "residuals = " + io::fmt(f1.residual) + ", " + io::fmt(f2.residual) + ", " +
             io::fmt(f3.residual));
}

// 9. BMO diagnostics on the canonical phases.
void criterion_9() {
  bool pass = true;
  std::string detail;

  {  // phase sin x: all scales bounded by 2
    const auto trace = argtrack::unwrap_arg(symbolkit::make_preset("phase_sin"),
                                            symbolkit::SampleGrid::tangent(8001, {}, 512.0));
    const auto profile = bmo::oscillation_profile(trace, bmo::dyadic_scales(trace, 9));
    for (const auto& rec : profile.scales) pass = pass && rec.oscillation <= 2.0;
    detail += "sin ok; ";
  }
  {  // phase x: oscillation at scale L equals L/4 within 1e-9
    const auto trace = argtrack::unwrap_arg(symbolkit::make_preset("phase_linear(kappa=1)"),
                                            symbolkit::SampleGrid::tangent(8001, {}, 256.0));
    const auto profile = bmo::oscillation_profile(trace, bmo::dyadic_scales(trace, 8));
    for (const auto& rec : profile.scales) {
      if (std::abs(rec.oscillation - rec.scale / 4.0) > 1e-9) {
        pass = false;
        detail += "L/4 off at scale " + io::fmt(rec.scale) + "; ";
      }
    }
    detail += "x gives L/4; ";
  }
  {  // whirl alpha = 0.5: log-log slope 0.5 +- 0.05
    const auto trace = argtrack::unwrap_arg(symbolkit::make_whirl(2.0, 0.5),
                                            symbolkit::SampleGrid::tangent(8001, {}, 1024.0));
    const auto profile = bmo::oscillation_profile(trace, bmo::dyadic_scales(trace, 9));
    pass = pass && std::abs(profile.growth_slope - 0.5) <= 0.05;
    detail += "whirl slope = " + io::fmt(profile.growth_slope) + "; ";
  }
  {  // monotone phases: matching-direction residual at most 1e-9
    const auto trace = argtrack::unwrap_arg(symbolkit::make_preset("phase_linear(kappa=2)"),
                                            symbolkit::SampleGrid::tangent(8001, {}, 256.0));
    const auto split = bmo::monotone_split(trace, bmo::Direction::NonDecreasing);
    const auto profile =
        bmo::oscillation_profile(split.residual, bmo::dyadic_scales(trace, 8));
    for (const auto& rec : profile.scales) pass = pass && rec.oscillation <= 1e-9;
    detail += "monotone residual silent";
  }
  report(9, "BMO diagnostics (bounds, L/4, sqrt slope, isotonic)", pass, detail);
}

// 10. Theorem 2/3 certificates: -x^2 sign x fires Phi+, +x^2 sign x fires
//     Phi-, the identity fires neither.
void criterion_10() {
  auto run = [](const std::string& source) {
    cli::RunConfig config;
    config.symbol_source = source;
    config.grid_count = 8001;
    config.t_min = 1.0;
    config.t_max = 100.0;
    config.t_count = 20;
    config.y_count = 21;
    config.etas = {"alpha:1"};
    config.enable_bmo = false;
    config.enable_finsec = false;
    return cli::run_analyze(config);
  };
  const auto minus = run("preset:whirl(k=-1,alpha=2)");
  const auto plus = run("preset:whirl(k=1,alpha=2)");
  const auto flat = run("preset:identity");
  const bool pass = minus.data.theorem2.phi_plus_obstruction &&
                    !minus.data.theorem2.phi_minus_obstruction &&
                    plus.data.theorem2.phi_minus_obstruction &&
                    !plus.data.theorem2.phi_plus_obstruction &&
                    !flat.data.theorem2.phi_plus_obstruction &&
                    !flat.data.theorem2.phi_minus_obstruction;
  report(10, "theorem 2/3 ratio certificates fire on +-x^2 sign x only", pass,
         "running extrema: -x^2: " + io::fmt(minus.data.theorem2.running_inf) +
             ", +x^2: " + io::fmt(plus.data.theorem2.running_sup));
}

// 11. Determinism: the gallery, run twice, produces byte-identical CSVs.
void criterion_11() {
  const fs::path base = fs::temp_directory_path() / "meanwind_acceptance_gallery";
  const fs::path dir_a = base / "a", dir_b = base / "b";
  fs::remove_all(base);
  const auto a = cli::run_gallery(dir_a.string());
  const auto b = cli::run_gallery(dir_b.string());
  bool pass = a.report_csv == b.report_csv && a.exit_code == 0 && b.exit_code == 0;
  size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir_a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir_a);
    if (rel.filename() == "meta.json") continue;  // the only timestamped file
    const fs::path other = dir_b / rel;
    if (!fs::exists(other)) {
      pass = false;
      continue;
    }
    if (rel.extension() == ".csv" || rel.extension() == ".json" ||
        rel.filename() == "MANIFEST") {
      ++compared;
      if (io::read_file(entry.path().string()) != io::read_file(other.string()))
        pass = false;
    }
  }
  fs::remove_all(base);
  report(11, "gallery determinism (byte-identical bodies twice)", pass,
         std::to_string(compared) + " files compared, gallery exit " +
             std::to_string(a.exit_code));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  if (g_failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
