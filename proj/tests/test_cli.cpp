#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "meanwind/analyze.hpp"
#include "meanwind/io.hpp"

using namespace meanwind;
using namespace meanwind::cli;

namespace {

RunConfig quick_config(const std::string& source) {
  RunConfig c;
  c.symbol_source = source;
  c.grid_count = 4001;
  c.t_max = 50.0;
  c.t_count = 15;
  c.y_count = 21;
  c.finsec_K = 140;
  c.finsec_fft_size = 2048;
  c.bmo_scale_count = 7;
  return c;
}

std::string verdict_of(const AnalyzeResult& r, const std::string& check) {
  for (const auto& v : r.verdicts)
    if (v.check == check) return v.verdict;
  return "<missing>";
}

}  // namespace

TEST_CASE("config round-trips through JSON unchanged") {
  RunConfig c = quick_config("preset:whirl(k=2,alpha=0.5)");
  c.etas = {"alpha:0.5", "steps:-2,0,1,2|-0.5,0.3,0.7"};
  c.alphas = {0.5, 1.0};
  c.grid_refinements = {0.25, -3.5};
  c.out_dir = "/tmp/somewhere";
  const std::string j1 = config_to_json(c);
  const RunConfig back = config_from_json(j1);
  CHECK(config_to_json(back) == j1);
}

TEST_CASE("eta specs parse") {
  const auto a = parse_eta_spec("alpha:0.5");
  CHECK(a.fn.l1_norm() == doctest::Approx(1.5));
  const auto s = parse_eta_spec("steps:-2,0,1,2|-0.5,0.3,0.7");
  CHECK(s.fn.breakpoints.size() == 4);
  CHECK(s.fn.in_cone);
  CHECK_THROWS(parse_eta_spec("alpha"));
  CHECK_THROWS(parse_eta_spec("steps:1,2|3,4,5"));
}

TEST_CASE("identity analysis: clean verdicts, exit 0, full bundle") {
  const auto result = run_analyze(quick_config("preset:identity"));
  CHECK(result.exit_code == 0);
  CHECK(verdict_of(result, "theorem-a-min-det") == "no-obstruction");
  CHECK(verdict_of(result, "eq-1.2-index") == "no-obstruction");
  CHECK(verdict_of(result, "theorem-1-bmo") == "no-obstruction");
  CHECK(verdict_of(result, "theorem-2-phi-plus") == "no-obstruction");
  CHECK(verdict_of(result, "theorem-2-phi-minus") == "no-obstruction");
  CHECK(verdict_of(result, "theorem-b-nehari") == "certificate");
  CHECK(verdict_of(result, "lemma-2.2-phi-probe") == "certificate");
  for (const char* name :
       {"config.json", "trace.csv", "winding.csv", "winding_summary.json",
        "bmo_raw.csv", "bmo_plus.csv", "bmo_minus.csv", "bmo.json", "finsec.csv",
        "finsec.json", "summary.json", "MANIFEST"})
    CHECK(result.files.count(name) == 1);
  CHECK(result.data.wind.winding == 0);
  CHECK(result.data.beta_ok);
  CHECK(result.data.beta_lower == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("whirl analysis: obstruction verdicts and honest inapplicability") {
  auto config = quick_config("preset:whirl(k=2,alpha=0.5)");
  config.alphas = {0.5};
  const auto result = run_analyze(config);
  CHECK(result.exit_code == 0);
  CHECK(verdict_of(result, "theorem-1-bmo") == "certificate");
  CHECK(verdict_of(result, "theorem-1-bmo-plus") == "no-obstruction");
  CHECK(verdict_of(result, "corollary-1-phi-minus-alpha-0.5") == "certificate");
  CHECK(verdict_of(result, "eq-1.2-index") == "inapplicable");
  CHECK_FALSE(result.data.winding_ok);
  CHECK_FALSE(result.data.index_ok);
  CHECK(result.data.per_alpha.at(0).direct.upper.value ==
        doctest::Approx(2.0).epsilon(0.05));
  CHECK(result.data.per_alpha.at(0).route_mismatch < 1e-9);
}

TEST_CASE("vanishing determinant produces a partial bundle and exit 1") {
  // grid refinement at 0 pins the zero of x/(x+i)
  auto config = quick_config("x/(x+i)");
  config.grid_refinements = {0.0};
  const auto result = run_analyze(config);
  CHECK(result.exit_code == 1);
  CHECK(verdict_of(result, "theorem-a-min-det") == "certificate");
  CHECK(result.files.count("trace.csv") == 0);
  const std::string& manifest = result.files.at("MANIFEST");
  CHECK(manifest.find("missing") != std::string::npos);
}

TEST_CASE("analysis output is deterministic byte-for-byte") {
  auto config = quick_config("preset:sap(km=-1,kp=2)");
  const auto a = run_analyze(config);
  const auto b = run_analyze(config);
  REQUIRE(a.files.size() == b.files.size());
  for (const auto& [name, content] : a.files) {
    REQUIRE(b.files.count(name) == 1);
    CHECK(content == b.files.at(name));
  }
}

TEST_CASE("bundles are written to disk with a manifest and metadata") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "meanwind_test_bundle";
  fs::remove_all(dir);
  auto config = quick_config("preset:rational(m=1)");
  config.out_dir = dir.string();
  const auto result = run_analyze(config);
  CHECK(result.exit_code == 0);
  for (const auto& [name, content] : result.files) {
    const fs::path p = dir / name;
    REQUIRE(fs::exists(p));
    CHECK(io::read_file(p.string()) == content);
  }
  CHECK(fs::exists(dir / "meta.json"));  // the only timestamped file
  fs::remove_all(dir);
}

TEST_CASE("csv writer enforces width and renders comments first") {
  io::CsvWriter csv({"a", "b"});
  csv.row({"1", "2"});
  csv.comment("note");
  CHECK(csv.str() == "# note\na,b\n1,2\n");
  CHECK_THROWS(csv.row({"only-one"}));
}

TEST_CASE("summary places the index cross-check on rational symbols") {
  auto config = quick_config("preset:rational(m=2)");
  config.trace_range = 2000.0;  // long tails for the winding certification
  const auto result = run_analyze(config);
  CHECK(result.data.winding_ok);
  CHECK(result.data.wind.winding == 2);
  CHECK(result.data.index_ok);
  CHECK(result.data.index.index == -2);
  CHECK(verdict_of(result, "eq-1.2-index") == "no-obstruction");
  CHECK(result.files.at("summary.json").find("\"winding\": 2") != std::string::npos);
}
