#include "meanwind/analyze.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "meanwind/io.hpp"
#include "meanwind/outer.hpp"
#include "meanwind/parser.hpp"
#include "meanwind/presets.hpp"

namespace meanwind::cli {

using nlohmann::json;

EtaSpec parse_eta_spec(const std::string& text) {
  if (text.rfind("alpha:", 0) == 0) {
    const double alpha = std::stod(text.substr(6));
    return {"eta_alpha_" + io::fmt(alpha), hardy::eta_alpha(alpha)};
  }
  if (text.rfind("steps:", 0) == 0) {
    const std::string body = text.substr(6);
    const size_t bar = body.find('|');
    if (bar == std::string::npos)
      throw std::invalid_argument("eta spec: steps need 'b0,..,bm|v1,..,vm'");
    auto parse_list = [](const std::string& s) {
      std::vector<double> out;
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
      return out;
    };
    auto fn = hardy::TestFunction::make(parse_list(body.substr(0, bar)),
                                        parse_list(body.substr(bar + 1)));
    return {"steps_" + std::to_string(symbolkit::fnv1a64(text) % 100000000ull), fn};
  }
  throw std::invalid_argument("eta spec: expected 'alpha:<a>' or 'steps:...'");
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["symbol_source"] = c.symbol_source;
  j["grid_count"] = c.grid_count;
  j["grid_refinements"] = c.grid_refinements;
  j["trace_range"] = c.trace_range;
  j["max_depth"] = c.max_depth;
  j["max_trace_nodes"] = c.max_trace_nodes;
  j["tail_tolerance"] = c.tail_tolerance;
  j["etas"] = c.etas;
  j["t_min"] = c.t_min;
  j["t_max"] = c.t_max;
  j["t_count"] = c.t_count;
  j["y_count"] = c.y_count;
  j["alphas"] = c.alphas;
  j["ratio_threshold"] = c.ratio_threshold;
  j["certificate_tol"] = c.certificate_tol;
  j["mean_motion_window"] = c.mean_motion_window;
  j["bmo_scale_count"] = c.bmo_scale_count;
  j["bmo_slope_threshold"] = c.bmo_slope_threshold;
  j["bmo_residual_threshold"] = c.bmo_residual_threshold;
  j["finsec_K"] = c.finsec_K;
  j["finsec_fft_size"] = c.finsec_fft_size;
  j["finsec_n_list"] = c.finsec_n_list;
  j["phi_probe_N"] = c.phi_probe_N;
  j["aliasing_tol"] = c.aliasing_tol;
  j["nehari_margin"] = c.nehari_margin;
  j["enable_winding"] = c.enable_winding;
  j["enable_bmo"] = c.enable_bmo;
  j["enable_finsec"] = c.enable_finsec;
  j["out_dir"] = c.out_dir;
  return j.dump(2) + "\n";
}

RunConfig config_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("symbol_source", c.symbol_source);
  get("grid_count", c.grid_count);
  get("grid_refinements", c.grid_refinements);
  get("trace_range", c.trace_range);
  get("max_depth", c.max_depth);
  get("max_trace_nodes", c.max_trace_nodes);
  get("tail_tolerance", c.tail_tolerance);
  get("etas", c.etas);
  get("t_min", c.t_min);
  get("t_max", c.t_max);
  get("t_count", c.t_count);
  get("y_count", c.y_count);
  get("alphas", c.alphas);
  get("ratio_threshold", c.ratio_threshold);
  get("certificate_tol", c.certificate_tol);
  get("mean_motion_window", c.mean_motion_window);
  get("bmo_scale_count", c.bmo_scale_count);
  get("bmo_slope_threshold", c.bmo_slope_threshold);
  get("bmo_residual_threshold", c.bmo_residual_threshold);
  get("finsec_K", c.finsec_K);
  get("finsec_fft_size", c.finsec_fft_size);
  get("finsec_n_list", c.finsec_n_list);
  get("phi_probe_N", c.phi_probe_N);
  get("aliasing_tol", c.aliasing_tol);
  get("nehari_margin", c.nehari_margin);
  get("enable_winding", c.enable_winding);
  get("enable_bmo", c.enable_bmo);
  get("enable_finsec", c.enable_finsec);
  get("out_dir", c.out_dir);
  return c;
}

namespace {

json sweep_to_json(const winding::SweepReport& rep) {
  json j;
  j["eta_id"] = rep.eta_id;
  j["y_count"] = rep.y_count;
  j["T"] = rep.T;
  j["sup_y"] = rep.sup_y;
  j["inf_y"] = rep.inf_y;
  j["at_y0"] = rep.at_y0;
  j["upper"] = {{"value", rep.upper.value}, {"drift", rep.upper.drift}};
  j["lower"] = {{"value", rep.lower.value}, {"drift", rep.lower.drift}};
  j["tilde_upper"] = {{"value", rep.tilde_upper.value}, {"drift", rep.tilde_upper.drift}};
  j["tilde_lower"] = {{"value", rep.tilde_lower.value}, {"drift", rep.tilde_lower.drift}};
  return j;
}

json profile_to_json(const bmo::OscillationProfile& p) {
  json scales = json::array();
  for (const auto& s : p.scales)
    scales.push_back({{"scale", s.scale},
                      {"worst_location", s.worst_location},
                      {"oscillation", s.oscillation}});
  return json{{"scales", scales},
              {"growth_slope", p.growth_slope},
              {"fit_residual", p.fit_residual},
              {"flat", p.flat}};
}

std::string profile_csv(const bmo::OscillationProfile& p) {
  io::CsvWriter csv({"scale", "worst_location", "oscillation"});
  for (const auto& s : p.scales)
    csv.row({io::fmt(s.scale), io::fmt(s.worst_location), io::fmt(s.oscillation)});
  return csv.str();
}

struct VerdictBuilder {
  std::vector<VerdictEntry>& out;
  void certificate(const std::string& check, const std::string& detail) {
    out.push_back({check, "certificate", detail});
  }
  void clear(const std::string& check, const std::string& detail) {
    out.push_back({check, "no-obstruction", detail});
  }
  void inapplicable(const std::string& check, const std::string& detail) {
    out.push_back({check, "inapplicable", detail});
  }
};

}  // namespace

AnalyzeResult run_analyze(const RunConfig& config) {
  AnalyzeResult result;
  AnalyzeData& d = result.data;

  const symbolkit::SymbolSpec sym = symbolkit::resolve_symbol(config.symbol_source);
  d.symbol_text = sym.text;
  d.symbol_class = symbolkit::to_string(sym.tag);
  d.symbol_digest = sym.digest;
  d.r = sym.size;

  const double clip =
      config.trace_range > 0.0 ? config.trace_range : std::max(50.0, 4.0 * config.t_max);
  const auto grid =
      symbolkit::SampleGrid::tangent(config.grid_count, config.grid_refinements, clip);
  const auto min_det = symbolkit::min_det_modulus(sym, grid);
  d.min_det = min_det.value;
  d.min_det_x = min_det.argmin_x;

  // --- argument trace ---------------------------------------------------
  argtrack::ArgumentTrace trace;
  if (d.min_det > 1e-12) {
    try {
      trace = argtrack::unwrap_arg(sym, grid, config.max_depth,
                                   static_cast<size_t>(config.max_trace_nodes));
      d.trace_ok = true;
      d.trace_nodes = trace.size();
    } catch (const std::exception& e) {
      d.trace_error = e.what();
    }
  } else {
    d.trace_error = "min |det G| on the grid is " + io::fmt(d.min_det) +
                    " at x = " + io::fmt(d.min_det_x) + "; unwrapping skipped";
  }

  if (d.trace_ok) {
    try {
      d.wind = argtrack::winding_number(trace, config.tail_tolerance);
      d.winding_ok = true;
    } catch (const std::exception& e) {
      d.winding_error = e.what();
    }
  }

  // --- winding module -----------------------------------------------------
  double t_max_eff = config.t_max;
  if (config.enable_winding && d.trace_ok) {
    try {
      const winding::PairingEngine engine(trace);

      std::vector<EtaSpec> etas;
      for (const auto& s : config.etas) etas.push_back(parse_eta_spec(s));

      // Clamp the sweep so every (T, y) support fits inside the trace.
      double allowed = 0.49 * std::min(-engine.xmin(), engine.xmax());
      for (const auto& eta : etas) {
        const double a0 = eta.fn.support_min(), am = eta.fn.support_max();
        const double lo = std::min(a0 - 1.0, -(1.0 + std::abs(a0)));
        const double hi = std::max(am + 1.0, 1.0 + std::abs(am));
        allowed = std::min(allowed, -engine.xmin() / std::abs(lo));
        allowed = std::min(allowed, engine.xmax() / std::abs(hi));
      }
      t_max_eff = std::min(config.t_max, allowed);
      if (!(t_max_eff > config.t_min))
        throw std::invalid_argument("trace too short for the requested T grid (allowed "
                                    "T_max = " + io::fmt(allowed) + ")");
      const auto T_grid = winding::log_spaced(config.t_min, t_max_eff, config.t_count);

      for (const auto& eta : etas)
        d.per_eta.push_back(
            winding::mean_winding(engine, eta.fn, T_grid, config.y_count, eta.id));

      for (double alpha : config.alphas) {
        AlphaEstimates est;
        est.alpha = alpha;
        est.direct = winding::w_alpha(engine, alpha, T_grid, config.y_count);
        est.via_eta = winding::generalized_winding(engine, hardy::eta_alpha(alpha), alpha,
                                                   T_grid, config.y_count,
                                                   "eta_alpha_" + io::fmt(alpha));
        double mismatch = 0.0;
        for (size_t i = 0; i < est.direct.T.size(); ++i) {
          mismatch = std::max(mismatch,
                              std::abs(est.direct.sup_y[i] - est.via_eta.sup_y[i]));
          mismatch = std::max(mismatch,
                              std::abs(est.direct.inf_y[i] - est.via_eta.inf_y[i]));
        }
        est.route_mismatch = mismatch;
        d.per_alpha.push_back(std::move(est));
      }

      // beta(G) >= uw_1(G)/r needs the alpha = 1 estimate.
      for (const auto& est : d.per_alpha) {
        if (est.alpha == 1.0) {
          d.beta_lower = winding::beta_lower_bound(est.direct, sym.size);
          d.beta_ok = true;
        }
      }

      std::vector<hardy::TestFunction> eta_fns;
      std::vector<std::string> eta_ids;
      for (const auto& eta : etas) {
        eta_fns.push_back(eta.fn);
        eta_ids.push_back(eta.id);
      }
      d.theorem2 = winding::theorem2_check(engine, eta_fns, eta_ids, T_grid,
                                           config.y_count, config.ratio_threshold);

      const double extent = std::min(-engine.xmin(), engine.xmax());
      const double window =
          config.mean_motion_window > 0.0 ? config.mean_motion_window : extent / 12.0;
      try {
        d.mm_plus = argtrack::mean_motion(trace, argtrack::Side::PlusInfinity, window);
        d.mm_minus = argtrack::mean_motion(trace, argtrack::Side::MinusInfinity, window);
        d.mm_ok = true;
      } catch (const std::exception&) {
        d.mm_ok = false;
      }

      d.winding_module_ok = true;
    } catch (const std::exception& e) {
      d.winding_module_error = e.what();
    }
  }

  // --- bmo module -----------------------------------------------------------
  if (config.enable_bmo && d.trace_ok) {
    try {
      const auto scales = bmo::dyadic_scales(trace, config.bmo_scale_count);
      d.bmo_report = bmo::theorem1_report(trace, scales, config.bmo_slope_threshold,
                                          config.bmo_residual_threshold);
      d.bmo_ok = true;
    } catch (const std::exception& e) {
      d.bmo_error = e.what();
    }
  }

  // --- finsec module ---------------------------------------------------------
  finsec::CoeffTable coeffs;
  if (config.enable_finsec) {
    try {
      coeffs = finsec::fourier_coeffs(sym, config.finsec_K, config.finsec_fft_size);
      d.finsec_coeffs_ok = true;
      d.aliasing_residual = coeffs.aliasing_residual;
    } catch (const std::exception& e) {
      d.finsec_error = e.what();
    }
  }
  if (d.finsec_coeffs_ok) {
    try {
      d.index = finsec::index_estimate(coeffs, config.finsec_n_list, config.aliasing_tol);
      d.index_ok = true;
    } catch (const std::exception& e) {
      d.index_error = e.what();
    }
    try {
      finsec::CoeffTable u_coeffs;
      if (sym.scalar()) {
        std::vector<Eigen::MatrixXcd> samples;
        samples.reserve(config.finsec_fft_size);
        const double pi = 3.14159265358979323846;
        for (int j = 0; j < config.finsec_fft_size; ++j) {
          const double theta = -pi + (j + 0.5) * (2.0 * pi / config.finsec_fft_size);
          const auto v = sym.det(std::tan(0.5 * theta));
          const double mod = std::abs(v);
          if (!(mod > 0.0)) throw std::domain_error("symbol vanishes on the circle grid");
          Eigen::MatrixXcd m(1, 1);
          m(0, 0) = v / mod;
          samples.push_back(m);
        }
        u_coeffs = finsec::fourier_coeffs_from_samples(samples, config.finsec_K);
      } else {
        if (std::abs(coeffs.min_det_modulus - 1.0) > 1e-8 ||
            std::abs(coeffs.max_det_modulus - 1.0) > 1e-8)
          throw finsec::OracleInapplicable(
              "matrix symbol is not unimodular; the unitary-part factorization "
              "needs matrix spectral factorization (out of scope)");
        u_coeffs = coeffs;
      }
      d.nehari = finsec::nehari_distance(u_coeffs, config.finsec_n_list,
                                         config.nehari_margin);
      d.nehari_ok = true;
    } catch (const std::exception& e) {
      d.nehari_error = e.what();
    }
    if (sym.scalar()) {
      try {
        d.phi_probe =
            finsec::phi_n_probe(sym, config.phi_probe_N, config.finsec_K,
                                config.finsec_fft_size, config.finsec_n_list,
                                config.nehari_margin);
        d.phi_probe_ok = true;
      } catch (const std::exception& e) {
        d.phi_probe_error = e.what();
      }
    } else {
      d.phi_probe_error = "phi^n probe is scalar-only (matrix factorization out of scope)";
    }
  }

  // --- verdict table ----------------------------------------------------------
  VerdictBuilder v{result.verdicts};
  if (d.min_det > 1e-12)
    v.clear("theorem-a-min-det", "sampled min |det G| = " + io::fmt(d.min_det) +
                                     " at x = " + io::fmt(d.min_det_x) +
                                     " (grid-dependent lower-bound certificate)");
  else
    v.certificate("theorem-a-min-det",
                  "sampled |det G| reaches " + io::fmt(d.min_det) + " at x = " +
                      io::fmt(d.min_det_x) + "; T_G cannot be semi-Fredholm");

  if (d.winding_ok && d.index_ok) {
    const bool agree = d.index.index == -d.wind.winding;
    (agree ? v.clear("eq-1.2-index",
                     "winding " + std::to_string(d.wind.winding) + ", finite-section index " +
                         std::to_string(d.index.index) + " (= -winding)")
           : v.certificate("eq-1.2-index",
                           "winding/index mismatch: wind = " + std::to_string(d.wind.winding) +
                               " but index estimate = " + std::to_string(d.index.index)));
  } else if (d.winding_ok) {
    v.inapplicable("eq-1.2-index", "finite-section oracle: " +
                                       (d.index_error.empty() ? d.finsec_error : d.index_error));
  } else {
    v.inapplicable("eq-1.2-index", "winding number: " +
                                       (d.winding_error.empty() ? d.trace_error : d.winding_error));
  }

  if (d.bmo_ok) {
    auto bmo_verdict = [&](const char* check, bool fires, const char* what) {
      if (fires)
        v.certificate(check, std::string("finite-window oscillation growth: ") + what);
      else
        v.clear(check, std::string("no finite-window growth obstruction (") + what + ")");
    };
    bmo_verdict("theorem-1-bmo", d.bmo_report.bmo_obstruction, "arg det G vs BMO, hence Phi");
    bmo_verdict("theorem-1-bmo-plus", d.bmo_report.bmo_plus_obstruction,
                "nondecreasing-split residual, hence Phi+");
    bmo_verdict("theorem-1-bmo-minus", d.bmo_report.bmo_minus_obstruction,
                "nonincreasing-split residual, hence Phi-");
  } else {
    v.inapplicable("theorem-1-bmo", d.bmo_error.empty() ? d.trace_error : d.bmo_error);
  }

  if (d.winding_module_ok) {
    if (d.theorem2.phi_plus_obstruction)
      v.certificate("theorem-2-phi-plus",
                    "pairing/H1 ratio diverges to -inf (running inf " +
                        io::fmt(d.theorem2.running_inf) + "); T_G not in Phi+");
    else
      v.clear("theorem-2-phi-plus",
              "running inf of pairing/H1 ratio = " + io::fmt(d.theorem2.running_inf));
    if (d.theorem2.phi_minus_obstruction)
      v.certificate("theorem-2-phi-minus",
                    "pairing/H1 ratio diverges to +inf (running sup " +
                        io::fmt(d.theorem2.running_sup) + "); T_G not in Phi-");
    else
      v.clear("theorem-2-phi-minus",
              "running sup of pairing/H1 ratio = " + io::fmt(d.theorem2.running_sup));

    for (const auto& est : d.per_alpha) {
      const std::string tag = io::fmt(est.alpha);
      if (est.direct.lower.value < -config.certificate_tol)
        v.certificate("corollary-1-phi-plus-alpha-" + tag,
                      "lower generalized winding " + io::fmt(est.direct.lower.value) +
                          " < 0 (drift " + io::fmt(est.direct.lower.drift) + "); not Phi+");
      else
        v.clear("corollary-1-phi-plus-alpha-" + tag,
                "lower generalized winding " + io::fmt(est.direct.lower.value));
      if (est.direct.upper.value > config.certificate_tol)
        v.certificate("corollary-1-phi-minus-alpha-" + tag,
                      "upper generalized winding " + io::fmt(est.direct.upper.value) +
                          " > 0 (drift " + io::fmt(est.direct.upper.drift) + "); not Phi-");
      else
        v.clear("corollary-1-phi-minus-alpha-" + tag,
                "upper generalized winding " + io::fmt(est.direct.upper.value));
    }
  } else if (config.enable_winding) {
    v.inapplicable("theorem-2-phi-plus",
                   d.winding_module_error.empty() ? d.trace_error : d.winding_module_error);
  }

  if (d.nehari_ok)
    result.verdicts.push_back({"theorem-b-nehari",
                               d.nehari.verdict == finsec::NehariVerdict::LeftInvertible
                                   ? "certificate"
                                   : "inapplicable",
                               finsec::to_string(d.nehari.verdict) + "; dist >= " +
                                   io::fmt(d.nehari.distance_lower_bound)});
  else if (config.enable_finsec)
    v.inapplicable("theorem-b-nehari",
                   d.nehari_error.empty() ? d.finsec_error : d.nehari_error);

  if (d.phi_probe_ok)
    result.verdicts.push_back({"lemma-2.2-phi-probe",
                               d.phi_probe.success_n >= 0 ? "certificate" : "no-obstruction",
                               d.phi_probe.verdict});
  else if (config.enable_finsec)
    v.inapplicable("lemma-2.2-phi-probe", d.phi_probe_error);

  if (d.beta_ok)
    v.clear("beta-lower-bound",
            "beta(G) >= " + io::fmt(d.beta_lower) + " (= upper w_1 / r)");

  // --- files ----------------------------------------------------------------
  result.files["config.json"] = config_to_json(config);

  if (d.trace_ok) result.files["trace.csv"] = argtrack::trace_csv(trace);

  if (d.winding_module_ok) {
    io::CsvWriter csv({"eta_id", "T", "y", "pairing", "h1_norm", "ratio"});
    for (const auto& row : d.theorem2.rows)
      csv.row({row.eta_id, io::fmt(row.T), io::fmt(row.y), io::fmt(row.pairing),
               io::fmt(row.h1), io::fmt(row.ratio)});
    result.files["winding.csv"] = csv.str();

    json jw;
    jw["t_max_effective"] = t_max_eff;
    jw["per_eta"] = json::array();
    for (const auto& rep : d.per_eta) jw["per_eta"].push_back(sweep_to_json(rep));
    jw["per_alpha"] = json::array();
    for (const auto& est : d.per_alpha) {
      json ja;
      ja["alpha"] = est.alpha;
      ja["direct"] = sweep_to_json(est.direct);
      ja["via_eta_alpha"] = sweep_to_json(est.via_eta);
      ja["route_mismatch"] = est.route_mismatch;
      jw["per_alpha"].push_back(ja);
    }
    if (d.beta_ok) jw["beta_lower_bound"] = d.beta_lower;
    if (d.mm_ok) {
      jw["mean_motion_plus"] = {{"slope", d.mm_plus.slope},
                                {"dispersion", d.mm_plus.dispersion},
                                {"detected", d.mm_plus.detected}};
      jw["mean_motion_minus"] = {{"slope", d.mm_minus.slope},
                                 {"dispersion", d.mm_minus.dispersion},
                                 {"detected", d.mm_minus.detected}};
    }
    jw["theorem2"] = {{"running_inf", d.theorem2.running_inf},
                      {"running_sup", d.theorem2.running_sup},
                      {"phi_plus_obstruction", d.theorem2.phi_plus_obstruction},
                      {"phi_minus_obstruction", d.theorem2.phi_minus_obstruction},
                      {"ratio_threshold", d.theorem2.threshold}};
    result.files["winding_summary.json"] = jw.dump(2) + "\n";
  }

  if (d.bmo_ok) {
    result.files["bmo_raw.csv"] = profile_csv(d.bmo_report.raw);
    result.files["bmo_plus.csv"] = profile_csv(d.bmo_report.plus_residual);
    result.files["bmo_minus.csv"] = profile_csv(d.bmo_report.minus_residual);
    json jb;
    jb["raw"] = profile_to_json(d.bmo_report.raw);
    jb["plus_residual"] = profile_to_json(d.bmo_report.plus_residual);
    jb["minus_residual"] = profile_to_json(d.bmo_report.minus_residual);
    jb["bmo_obstruction"] = d.bmo_report.bmo_obstruction;
    jb["bmo_plus_obstruction"] = d.bmo_report.bmo_plus_obstruction;
    jb["bmo_minus_obstruction"] = d.bmo_report.bmo_minus_obstruction;
    jb["classification"] = d.bmo_report.classification;
    jb["slope_threshold"] = d.bmo_report.slope_threshold;
    jb["residual_threshold"] = d.bmo_report.residual_threshold;
    jb["note"] =
        "finite-window diagnostics; BMO membership over all of R is not decidable "
        "from finite data";
    result.files["bmo.json"] = jb.dump(2) + "\n";
  }

  if (d.finsec_coeffs_ok) {
    io::CsvWriter csv({"n", "sigma_min", "ker", "coker", "hankel_sigma"});
    for (size_t i = 0; i < config.finsec_n_list.size(); ++i) {
      const int n = config.finsec_n_list[i];
      std::string sigma_min = "", ker = "", coker = "", hankel = "";
      if (d.index_ok && i < d.index.kernel_dims.size()) {
        ker = io::fmt_int(d.index.kernel_dims[i]);
        coker = ker;
      }
      if (n <= coeffs.K) {
        const auto rep = finsec::svd_report(finsec::toeplitz_section(coeffs, n));
        sigma_min = io::fmt(rep.sigma_min);
        if (ker.empty()) {
          ker = io::fmt_int(rep.kernel_dim);
          coker = io::fmt_int(rep.cokernel_dim);
        }
      }
      if (d.nehari_ok && i < d.nehari.sigma.size()) hankel = io::fmt(d.nehari.sigma[i]);
      csv.row({io::fmt_int(n), sigma_min, ker, coker, hankel});
    }
    result.files["finsec.csv"] = csv.str();

    json jf;
    jf["aliasing_residual"] = d.aliasing_residual;
    jf["det_winding_raw"] = coeffs.det_winding_raw;
    jf["min_det_modulus_circle"] = coeffs.min_det_modulus;
    if (d.index_ok) {
      jf["index"] = {{"value", d.index.index},
                     {"stable", d.index.stable},
                     {"route", d.index.route},
                     {"winding_raw", d.index.winding_raw},
                     {"kernel_dims", d.index.kernel_dims},
                     {"shifted_kernel_dims", d.index.shifted_kernel_dims},
                     {"shift_check_passed", d.index.shift_check_passed}};
    } else {
      jf["index_error"] = d.index_error;
    }
    if (d.nehari_ok) {
      jf["nehari"] = {{"n", d.nehari.n},
                      {"sigma", d.nehari.sigma},
                      {"distance_lower_bound", d.nehari.distance_lower_bound},
                      {"verdict", finsec::to_string(d.nehari.verdict)},
                      {"margin", d.nehari.margin}};
    } else {
      jf["nehari_error"] = d.nehari_error;
    }
    if (d.phi_probe_ok) {
      jf["phi_probe"] = {{"success_n", d.phi_probe.success_n},
                         {"distances", d.phi_probe.distances},
                         {"verdict", d.phi_probe.verdict}};
    } else {
      jf["phi_probe_error"] = d.phi_probe_error;
    }
    result.files["finsec.json"] = jf.dump(2) + "\n";
  }

  json js;
  js["symbol"] = {{"text", d.symbol_text},
                  {"class", d.symbol_class},
                  {"digest", d.symbol_digest},
                  {"r", d.r}};
  js["orientation"] = "x = tan(theta/2); circle coordinate w = e^{i(theta+pi)}; "
                      "the point w = 1 corresponds to x = infinity";
  js["branch"] = "arg fixed in (-pi, pi] at the leftmost trace node";
  js["theorem_a"] = {{"min_det_modulus", d.min_det}, {"argmin_x", d.min_det_x}};
  js["argtrack"] = json::object();
  js["argtrack"]["trace_ok"] = d.trace_ok;
  if (!d.trace_ok) js["argtrack"]["error"] = d.trace_error;
  js["argtrack"]["nodes"] = d.trace_nodes;
  if (d.winding_ok) {
    js["argtrack"]["winding"] = d.wind.winding;
    js["argtrack"]["winding_raw"] = d.wind.raw;
    js["argtrack"]["residual"] = d.wind.residual;
  } else {
    js["argtrack"]["winding_error"] = d.winding_error;
  }
  json jv = json::array();
  for (const auto& entry : result.verdicts)
    jv.push_back({{"check", entry.check}, {"verdict", entry.verdict}, {"detail", entry.detail}});
  js["verdicts"] = jv;
  js["modules"] = {
      {"argtrack", d.trace_ok ? "ok" : "error: " + d.trace_error},
      {"winding", !config.enable_winding ? "disabled"
                  : d.winding_module_ok  ? "ok"
                                         : "error: " + (d.winding_module_error.empty()
                                                            ? d.trace_error
                                                            : d.winding_module_error)},
      {"bmo", !config.enable_bmo ? "disabled"
              : d.bmo_ok         ? "ok"
                                 : "error: " + (d.bmo_error.empty() ? d.trace_error : d.bmo_error)},
      {"finsec", !config.enable_finsec ? "disabled"
                 : d.finsec_coeffs_ok  ? "ok"
                                       : "error: " + d.finsec_error}};
  result.files["summary.json"] = js.dump(2) + "\n";

  // MANIFEST + exit code: 0 iff every enabled module produced its record.
  std::string manifest;
  for (const auto& [name, content] : result.files)
    manifest += name + " written (" + std::to_string(content.size()) + " bytes)\n";
  bool all_ok = d.trace_ok;
  if (!d.trace_ok) manifest += "trace.csv missing: " + d.trace_error + "\n";
  if (config.enable_winding && !d.winding_module_ok) {
    manifest += "winding section missing: " +
                (d.winding_module_error.empty() ? d.trace_error : d.winding_module_error) + "\n";
    all_ok = false;
  }
  if (config.enable_bmo && !d.bmo_ok) {
    manifest += "bmo section missing: " + (d.bmo_error.empty() ? d.trace_error : d.bmo_error) + "\n";
    all_ok = false;
  }
  if (config.enable_finsec && !d.finsec_coeffs_ok) {
    manifest += "finsec section missing: " + d.finsec_error + "\n";
    all_ok = false;
  }
  result.files["MANIFEST"] = manifest;
  result.exit_code = all_ok ? 0 : 1;

  if (!config.out_dir.empty()) {
    io::ensure_directory(config.out_dir);
    for (const auto& [name, content] : result.files)
      io::write_file(config.out_dir + "/" + name, content);
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    json jm;
    jm["generated_at_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    io::write_file(config.out_dir + "/meta.json", jm.dump(2) + "\n");
  }
  return result;
}

}  // namespace meanwind::cli
