#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "meanwind/argtrack.hpp"
#include "meanwind/parser.hpp"
#include "meanwind/presets.hpp"

using namespace meanwind;
using namespace meanwind::argtrack;
using meanwind::symbolkit::SampleGrid;

namespace {

constexpr double kPi = std::numbers::pi;

double value_at(const ArgumentTrace& t, double x) {
  const auto it = std::lower_bound(t.nodes.begin(), t.nodes.end(), x);
  REQUIRE(it != t.nodes.end());
  REQUIRE(*it == doctest::Approx(x).epsilon(1e-12));
  return t.values[static_cast<size_t>(it - t.nodes.begin())];
}

}  // namespace

TEST_CASE("identity unwraps to the constant zero trace") {
  const auto trace = unwrap_arg(symbolkit::make_identity(1), SampleGrid::tangent(501));
  for (double v : trace.values) CHECK(v == 0.0);
}

TEST_CASE("exp(ix) unwraps to slope one; increment over [-10,10] is 20") {
  const auto sym = symbolkit::parse_symbol("exp(i*x)");
  const auto trace = unwrap_arg(sym, SampleGrid::tangent(2001, {}, 10.0));
  CHECK(trace.min() == doctest::Approx(-10.0));
  CHECK(trace.max() == doctest::Approx(10.0));
  const double offset = trace.values.front() - trace.nodes.front();
  for (size_t i = 0; i < trace.size(); ++i)
    CHECK(trace.values[i] - trace.nodes[i] == doctest::Approx(offset).epsilon(1e-12));
  CHECK(trace.values.back() - trace.values.front() == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("whirl phase matches its closed form 2 sign(x) |x|^{1/2}") {
  const auto sym = symbolkit::make_whirl(2.0, 0.5);
  const auto trace = unwrap_arg(sym, SampleGrid::tangent(4001, {0.0, 100.0}, 100.0));
  const double v0 = value_at(trace, 0.0);
  const double v100 = value_at(trace, 100.0);
  CHECK(v100 - v0 == doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("trace step invariant and principal-argument consistency hold") {
  const auto sym = symbolkit::make_sap(-1.0, 2.0);
  const auto trace = unwrap_arg(sym, SampleGrid::tangent(2001, {}, 200.0));
  for (size_t i = 1; i < trace.size(); ++i)
    CHECK(std::abs(trace.values[i] - trace.values[i - 1]) < kPi / 2.0);
  for (size_t i = 0; i < trace.size(); i += 37) {
    const auto d = sym.det(trace.nodes[i]);
    const auto unit = d / std::abs(d);
    const std::complex<double> rebuilt = std::polar(1.0, trace.values[i]);
    CHECK(std::abs(rebuilt - unit) < 1e-9);
  }
}

TEST_CASE("branch is fixed in (-pi, pi] at the leftmost node") {
  const auto sym = symbolkit::parse_symbol("exp(i*x)");
  const auto trace = unwrap_arg(sym, SampleGrid::tangent(101, {}, 50.0));
  CHECK(trace.values.front() > -kPi);
  CHECK(trace.values.front() <= kPi);
}

TEST_CASE("refining the grid only shifts shared nodes by a common constant") {
  const auto sym = symbolkit::parse_symbol("phi(x)*exp(i*sin(x))");
  const auto base_grid = SampleGrid::tangent(801, {}, 300.0);
  const auto fine_grid = SampleGrid::tangent(801, {0.123, 5.67, -44.4, 210.0}, 300.0);
  const auto base = unwrap_arg(sym, base_grid);
  const auto fine = unwrap_arg(sym, fine_grid);
  double diff0 = 0.0;
  bool first = true;
  for (double x : base_grid.nodes) {
    const double d = value_at(fine, x) - value_at(base, x);
    if (first) {
      diff0 = d;
      first = false;
    }
    CHECK(d == doctest::Approx(diff0).epsilon(1e-8));
  }
}

TEST_CASE("winding numbers of rational symbols") {
  const auto grid = SampleGrid::tangent(4001, {}, 2000.0);
  for (int m : {-3, -1, 0, 2, 3}) {
    const auto trace = unwrap_arg(symbolkit::make_rational(m), grid);
    const auto w = winding_number(trace);
    CHECK(w.winding == m);
    CHECK(std::abs(w.residual) < 0.01);
  }
}

TEST_CASE("winding is invariant under a constant unimodular factor") {
  const auto grid = SampleGrid::tangent(2001, {}, 1000.0);
  const auto plain = unwrap_arg(symbolkit::parse_symbol("phi(x)^2"), grid);
  const auto rotated =
      unwrap_arg(symbolkit::parse_symbol("exp(1.234i)*phi(x)^2"), grid);
  CHECK(winding_number(plain).winding == 2);
  CHECK(winding_number(rotated).winding == 2);
  // the raw traces differ by a constant
  const double shift = rotated.values.front() - plain.values.front();
  for (size_t i = 100; i < grid.nodes.size(); i += 400) {
    const double x = grid.nodes[i];
    CHECK(value_at(rotated, x) - value_at(plain, x) ==
          doctest::Approx(shift).epsilon(1e-9));
  }
}

TEST_CASE("whirl symbols fail tail certification") {
  const auto trace =
      unwrap_arg(symbolkit::make_whirl(2.0, 0.5), SampleGrid::tangent(2001, {}, 1000.0));
  CHECK_THROWS_AS(winding_number(trace), NonConvergentTails);
}

TEST_CASE("jump symbols certify tails but flag a half-integer residual") {
  const auto trace =
      unwrap_arg(symbolkit::make_jump(kPi), SampleGrid::tangent(4001, {}, 2000.0));
  const auto w = winding_number(trace);
  CHECK(std::abs(std::abs(w.residual) - 0.5) < 0.01);
}

TEST_CASE("product trace equals sum of traces up to a 2 pi multiple") {
  const auto grid = SampleGrid::tangent(1501, {}, 400.0);
  const auto f = unwrap_arg(symbolkit::parse_symbol("phi(x)"), grid);
  const auto g = unwrap_arg(symbolkit::parse_symbol("(x+2*i)/(x+i)"), grid);
  const auto fg = unwrap_arg(symbolkit::parse_symbol("phi(x)*(x+2*i)/(x+i)"), grid);
  double c0 = 0.0;
  bool first = true;
  for (double x : grid.nodes) {
    const double c = value_at(fg, x) - value_at(f, x) - value_at(g, x);
    if (first) {
      c0 = c;
      first = false;
      CHECK(std::abs(std::remainder(c0, 2.0 * kPi)) < 1e-8);
    }
    CHECK(c == doctest::Approx(c0).epsilon(1e-8));
  }
}

TEST_CASE("mean motion of a pure linear phase") {
  const auto trace =
      unwrap_arg(symbolkit::parse_symbol("exp(i*3*x)"), SampleGrid::tangent(2001, {}, 600.0));
  const auto plus = mean_motion(trace, Side::PlusInfinity, 50.0);
  const auto minus = mean_motion(trace, Side::MinusInfinity, 50.0);
  CHECK(plus.detected);
  CHECK(plus.slope == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(minus.slope == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("mean motions of the blended SAP symbol") {
  const auto trace =
      unwrap_arg(symbolkit::make_sap(-1.0, 2.0), SampleGrid::tangent(4001, {}, 1200.0));
  const auto plus = mean_motion(trace, Side::PlusInfinity, 100.0);
  const auto minus = mean_motion(trace, Side::MinusInfinity, 100.0);
  CHECK(plus.slope == doctest::Approx(2.0).epsilon(0.01));
  CHECK(minus.slope == doctest::Approx(-1.0).epsilon(0.01));
}

TEST_CASE("sublinear whirl phase has zero mean motion") {
  const auto trace =
      unwrap_arg(symbolkit::make_whirl(2.0, 0.5), SampleGrid::tangent(4001, {}, 1200.0));
  const auto plus = mean_motion(trace, Side::PlusInfinity, 100.0);
  CHECK(std::abs(plus.slope) < 0.05);
}

TEST_CASE("mean motion demands enough trace extent") {
  const auto trace =
      unwrap_arg(symbolkit::parse_symbol("exp(i*x)"), SampleGrid::tangent(501, {}, 20.0));
  CHECK_THROWS(mean_motion(trace, Side::PlusInfinity, 50.0));
}

TEST_CASE("depth exhaustion is reported with the offending segment") {
  const auto sym = symbolkit::parse_symbol("exp(i*50*x)");
  try {
    unwrap_arg(sym, SampleGrid::tangent(11, {}, 10.0), 2);
    FAIL("expected DepthExhausted");
  } catch (const DepthExhausted& e) {
    CHECK(e.segment_a < e.segment_b);
  }
}

TEST_CASE("vanishing determinant at a node is reported") {
  const auto sym = symbolkit::parse_symbol("x/(x+i)");
  CHECK_THROWS_AS(unwrap_arg(sym, SampleGrid::tangent(101, {0.0}, 50.0)),
                  ZeroDeterminant);
}

TEST_CASE("trace node budget is enforced") {
  const auto sym = symbolkit::parse_symbol("exp(i*40*x)");
  CHECK_THROWS_WITH_AS(unwrap_arg(sym, SampleGrid::tangent(101, {}, 100.0), 40, 500),
                       doctest::Contains("node budget"), std::runtime_error);
}

TEST_CASE("trace CSV carries the digest and conventions") {
  const auto sym = symbolkit::make_identity(1);
  const auto trace = unwrap_arg(sym, SampleGrid::tangent(11, {}, 5.0));
  const std::string csv = trace_csv(trace);
  CHECK(csv.find("symbol_digest=") != std::string::npos);
  CHECK(csv.find("x=tan(theta/2)") != std::string::npos);
  CHECK(csv.find("x,arg\n") != std::string::npos);
}
