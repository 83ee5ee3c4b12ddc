// Batch pipeline: parse -> grid -> unwrap -> {winding, bmo, finsec} ->
// report bundle with a three-valued verdict table
// {certificate, no-obstruction, inapplicable}.
//
// CSV bodies are deterministic (byte-identical across runs of the same
// config); the only timestamped file is meta.json.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "meanwind/argtrack.hpp"
#include "meanwind/bmo.hpp"
#include "meanwind/finsec.hpp"
#include "meanwind/testfn.hpp"
#include "meanwind/winding.hpp"

namespace meanwind::cli {

struct EtaSpec {
  std::string id;
  hardy::TestFunction fn;
};

// "alpha:0.5" for the eta_alpha family, or
// "steps:b0,b1,...,bm|v1,...,vm" for a user step function in the cone.
EtaSpec parse_eta_spec(const std::string& text);

struct RunConfig {
  std::string symbol_source;  // DSL text, file contents, or "preset:..."

  // grid / unwrapping
  int grid_count = 20001;
  std::vector<double> grid_refinements;
  double trace_range = 0.0;  // 0: auto = max(50, 4 * t_max)
  int max_depth = 40;
  long long max_trace_nodes = 2000000;
  double tail_tolerance = 0.2;

  // winding sweeps
  std::vector<std::string> etas = {"alpha:1"};
  double t_min = 1.0, t_max = 500.0;
  int t_count = 25;
  int y_count = 41;
  std::vector<double> alphas = {1.0};
  double ratio_threshold = 25.0;
  double certificate_tol = 0.1;
  double mean_motion_window = 0.0;  // 0: t_max / 10

  // bmo
  int bmo_scale_count = 10;
  double bmo_slope_threshold = 0.2;
  double bmo_residual_threshold = 0.10;

  // finsec
  int finsec_K = 160;
  int finsec_fft_size = 2048;
  std::vector<int> finsec_n_list = {4, 8, 16, 32, 64};
  int phi_probe_N = 4;
  double aliasing_tol = 1e-6;
  double nehari_margin = 0.02;

  bool enable_winding = true;
  bool enable_bmo = true;
  bool enable_finsec = true;

  std::string out_dir;  // empty: in-memory only
};

std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(const std::string& json_text);

struct VerdictEntry {
  std::string check;
  std::string verdict;  // "certificate" | "no-obstruction" | "inapplicable"
  std::string detail;
};

struct AlphaEstimates {
  double alpha = 0.0;
  winding::SweepReport direct;       // window-difference route
  winding::SweepReport via_eta;      // generalized_winding with eta_alpha
  double route_mismatch = 0.0;       // max |direct - via_eta| over the grid
};

struct AnalyzeData {
  std::string symbol_text;
  std::string symbol_class;
  std::uint64_t symbol_digest = 0;
  int r = 1;

  double min_det = 0.0;
  double min_det_x = 0.0;

  bool trace_ok = false;
  std::string trace_error;
  size_t trace_nodes = 0;

  bool winding_ok = false;
  std::string winding_error;
  argtrack::WindingResult wind;

  bool mm_ok = false;
  argtrack::MeanMotionResult mm_plus, mm_minus;

  std::vector<winding::SweepReport> per_eta;   // mean winding per eta
  std::vector<AlphaEstimates> per_alpha;
  bool beta_ok = false;
  double beta_lower = 0.0;
  winding::Theorem2Report theorem2;
  bool winding_module_ok = false;
  std::string winding_module_error;

  bool bmo_ok = false;
  std::string bmo_error;
  bmo::Theorem1Report bmo_report;

  bool finsec_coeffs_ok = false;
  std::string finsec_error;
  double aliasing_residual = 0.0;
  bool index_ok = false;
  std::string index_error;
  finsec::IndexEstimate index;
  bool nehari_ok = false;
  std::string nehari_error;
  finsec::NehariProbe nehari;
  bool phi_probe_ok = false;
  std::string phi_probe_error;
  finsec::PhiProbeResult phi_probe;
};

struct AnalyzeResult {
  AnalyzeData data;
  std::vector<VerdictEntry> verdicts;
  std::map<std::string, std::string> files;  // name -> content
  int exit_code = 0;
};

AnalyzeResult run_analyze(const RunConfig& config);

struct GalleryRow {
  std::string symbol;
  std::string quantity;
  std::string expected;
  double tolerance = 0.0;
  std::string actual;
  bool pass = false;
};

struct GalleryResult {
  std::vector<GalleryRow> rows;
  std::string report_csv;
  int exit_code = 0;  // nonzero iff any row failed
};

// Runs the shipped symbol gallery against stored expected values.
GalleryResult run_gallery(const std::string& out_dir);

}  // namespace meanwind::cli
