#include <cmath>
#include <functional>
#include <numbers>

#include "doctest.h"
#include "meanwind/winding.hpp"

using namespace meanwind;
using namespace meanwind::winding;
using meanwind::argtrack::ArgumentTrace;
using meanwind::hardy::TestFunction;
using meanwind::hardy::eta_alpha;

namespace {

constexpr double kPi = std::numbers::pi;

// Synthetic traces: the winding machinery only sees (nodes, values), so unit
// tests drive it with closed-form phases on dense uniform grids.
ArgumentTrace synthetic(double X, size_t n, const std::function<double(double)>& phase) {
  ArgumentTrace t;
  t.nodes.reserve(n + 1);
  t.values.reserve(n + 1);
  for (size_t i = 0; i <= n; ++i) {
    const double x = -X + 2.0 * X * static_cast<double>(i) / static_cast<double>(n);
    t.nodes.push_back(x);
    t.values.push_back(phase(x));
  }
  return t;
}

const auto linear = [](double k) { return [k](double x) { return k * x; }; };
const auto whirl_phase = [](double k, double a) {
  return [k, a](double x) {
    return k * (x >= 0 ? 1.0 : -1.0) * std::pow(std::abs(x), a);
  };
};

}  // namespace

TEST_CASE("pairing of a constant trace vanishes for every test function") {
  const auto trace = synthetic(100.0, 1000, [](double) { return 7.3; });
  const PairingEngine engine(trace);
  for (const auto& eta : {eta_alpha(1.0), eta_alpha(0.5)})
    for (double T : {1.0, 5.0, 40.0})
      for (double y : {-20.0, 0.0, 13.5})
        CHECK(std::abs(engine.pairing(eta, T, y)) < 1e-12);
}

TEST_CASE("pairing of a linear trace equals T times the first moment") {
  const auto trace = synthetic(500.0, 2000, linear(1.0));
  const PairingEngine engine(trace);
  const auto e1 = eta_alpha(1.0);  // int eta1(u) u du = 1
  for (double T : {1.0, 10.0, 100.0})
    CHECK(engine.pairing(e1, T, 0.0) == doctest::Approx(T).epsilon(1e-9));
}

TEST_CASE("pairing obeys the Hoelder bound for bounded traces") {
  const auto trace = synthetic(200.0, 5000, [](double x) { return std::sin(3.0 * x); });
  const PairingEngine engine(trace);
  const auto e = eta_alpha(0.5);
  for (double T : {2.0, 20.0, 90.0})
    for (double y : {-50.0, 0.0, 71.0})
      CHECK(std::abs(engine.pairing(e, T, y)) <= 1.0 * e.l1_norm() + 1e-9);
}

TEST_CASE("pairing is invariant under the trace branch constant") {
  auto trace = synthetic(300.0, 3000, whirl_phase(2.0, 0.5));
  const PairingEngine engine(trace);
  for (double& v : trace.values) v += 2.0 * kPi;
  const PairingEngine shifted(trace);
  const auto e = eta_alpha(1.0);
  for (double T : {5.0, 50.0, 140.0})
    for (double y : {-100.0, 0.0, 60.0})
      CHECK(std::abs(engine.pairing(e, T, y) - shifted.pairing(e, T, y)) < 1e-9);
}

TEST_CASE("support outside the trace range is an error with the needed range") {
  const auto trace = synthetic(50.0, 500, linear(1.0));
  const PairingEngine engine(trace);
  CHECK_THROWS_AS(engine.pairing(eta_alpha(1.0), 60.0, 0.0), SupportError);
  CHECK_THROWS_AS(engine.integral(-60.0, 0.0), SupportError);
}

TEST_CASE("w_alpha equals generalized_winding with eta_alpha") {
  const auto traces = {
      synthetic(2000.0, 20000, whirl_phase(2.0, 0.5)),
      synthetic(2000.0, 20000, linear(-1.5)),
      synthetic(2000.0, 20000, [](double x) { return std::sin(x) + 0.1 * x; }),
  };
  const auto T_grid = log_spaced(1.0, 900.0, 15);
  for (const auto& trace : traces) {
    const PairingEngine engine(trace);
    for (double alpha : {0.5, 1.0}) {
      const auto direct = w_alpha(engine, alpha, T_grid, 21);
      const auto via = generalized_winding(engine, eta_alpha(alpha), alpha, T_grid, 21);
      for (size_t i = 0; i < T_grid.size(); ++i) {
        CHECK(std::abs(direct.sup_y[i] - via.sup_y[i]) < 1e-9);
        CHECK(std::abs(direct.inf_y[i] - via.inf_y[i]) < 1e-9);
        CHECK(std::abs(direct.at_y0[i] - via.at_y0[i]) < 1e-9);
      }
    }
  }
}

TEST_CASE("linear phase: the window-difference value is kappa at every T") {
  const double kappa = -2.5;
  const auto trace = synthetic(3000.0, 60000, linear(kappa));
  const PairingEngine engine(trace);
  const auto rep = w_alpha(engine, 1.0, log_spaced(1.0, 1400.0, 20), 21);
  for (size_t i = 0; i < rep.T.size(); ++i) {
    CHECK(rep.sup_y[i] == doctest::Approx(kappa).epsilon(1e-9));
    CHECK(rep.inf_y[i] == doctest::Approx(kappa).epsilon(1e-9));
  }
  CHECK(rep.upper.value == doctest::Approx(kappa).epsilon(1e-9));
  CHECK(rep.lower.value == doctest::Approx(kappa).epsilon(1e-9));
}

TEST_CASE("whirl phases recover k on the attained side") {
  // alpha = 1/2, k > 0: the y = 0 window is exact and maximal.
  const auto trace = synthetic(2500.0, 50000, whirl_phase(2.0, 0.5));
  const PairingEngine engine(trace);
  const auto rep = w_alpha(engine, 0.5, log_spaced(1.0, 1200.0, 20), 41);
  CHECK(rep.upper.value == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(rep.tilde_upper.value == doctest::Approx(2.0).epsilon(1e-4));
  // k < 0 mirrors through the lower estimate.
  const auto neg = synthetic(2500.0, 50000, whirl_phase(-2.0, 0.5));
  const auto nrep = w_alpha(PairingEngine(neg), 0.5, log_spaced(1.0, 1200.0, 20), 41);
  CHECK(nrep.lower.value == doctest::Approx(-2.0).epsilon(1e-4));
}

TEST_CASE("sign equivariance: negating the phase swaps and negates estimates") {
  const auto plus = synthetic(1500.0, 30000, whirl_phase(1.0, 0.7));
  const auto minus = synthetic(1500.0, 30000, whirl_phase(-1.0, 0.7));
  const auto T_grid = log_spaced(2.0, 700.0, 12);
  const auto rp = w_alpha(PairingEngine(plus), 0.7, T_grid, 21);
  const auto rm = w_alpha(PairingEngine(minus), 0.7, T_grid, 21);
  for (size_t i = 0; i < T_grid.size(); ++i) {
    CHECK(rp.sup_y[i] == doctest::Approx(-rm.inf_y[i]).epsilon(1e-12));
    CHECK(rp.inf_y[i] == doctest::Approx(-rm.sup_y[i]).epsilon(1e-12));
  }
  CHECK(rp.upper.value == doctest::Approx(-rm.lower.value).epsilon(1e-12));
}

TEST_CASE("chain ordering holds on every sweep report") {
  const auto traces = {
      synthetic(1500.0, 20000, whirl_phase(2.0, 0.5)),
      synthetic(1500.0, 20000, [](double x) { return std::sin(x); }),
      synthetic(1500.0, 20000, linear(0.8)),
  };
  for (const auto& trace : traces) {
    const PairingEngine engine(trace);
    const auto rep = mean_winding(engine, eta_alpha(1.0), log_spaced(1.0, 700.0, 15), 41);
    CHECK(rep.lower.value <= rep.tilde_lower.value + 1e-12);
    CHECK(rep.tilde_lower.value <= rep.tilde_upper.value + 1e-12);
    CHECK(rep.tilde_upper.value <= rep.upper.value + 1e-12);
  }
}

TEST_CASE("limit symbols: mean winding estimates follow the jump formulas") {
  // chi rises from L- to L+ = L- + Delta with Delta > 0; K = L = 1 for eta_1.
  const double Lminus = -1.0, Delta = 3.0;
  const auto trace = synthetic(4000.0, 80000, [=](double x) {
    return Lminus + Delta * (0.5 + std::atan(5.0 * x) / kPi);
  });
  const PairingEngine engine(trace);
  const auto rep = mean_winding(engine, eta_alpha(1.0), log_spaced(1.0, 1900.0, 20), 41);
  CHECK(rep.tilde_upper.value == doctest::Approx(Delta).epsilon(0.02));
  CHECK(rep.tilde_lower.value == doctest::Approx(Delta).epsilon(0.02));
  CHECK(rep.upper.value == doctest::Approx(Delta).epsilon(0.02));   // L * Delta_+
  CHECK(std::abs(rep.lower.value) < 0.05);                          // L * Delta_- = 0
}

TEST_CASE("generalized winding accepts a custom normalization rho") {
  const auto trace = synthetic(2000.0, 30000, linear(2.0));
  const PairingEngine engine(trace);
  const auto T_grid = log_spaced(1.0, 900.0, 12);
  // rho(T) = T^2 reproduces alpha = 1 up to the missing (1+alpha)/2 factor
  // of the window-difference form: pairing route has int eta1(u) u du = 1.
  const auto rep = generalized_winding_rho(
      engine, eta_alpha(1.0), [](double T) { return T * T; }, T_grid, 21);
  CHECK(rep.tilde_upper.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("beta lower bound divides the upper estimate by r") {
  const auto trace = synthetic(2000.0, 30000, linear(2.0));
  const auto rep = w_alpha(PairingEngine(trace), 1.0, log_spaced(1.0, 900.0, 12), 21);
  CHECK(beta_lower_bound(rep, 1) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(beta_lower_bound(rep, 2) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS(beta_lower_bound(rep, 0));
}

TEST_CASE("theorem 2 ratios: quadratic phases fire, identity does not") {
  const auto T_grid = log_spaced(1.0, 120.0, 15);
  const std::vector<TestFunction> etas = {eta_alpha(1.0)};
  const std::vector<std::string> ids = {"eta1"};

  const auto down = synthetic(600.0, 30000, whirl_phase(-1.0, 2.0));
  const auto rep_down = theorem2_check(PairingEngine(down), etas, ids, T_grid, 21);
  CHECK(rep_down.phi_plus_obstruction);
  CHECK_FALSE(rep_down.phi_minus_obstruction);

  const auto up = synthetic(600.0, 30000, whirl_phase(1.0, 2.0));
  const auto rep_up = theorem2_check(PairingEngine(up), etas, ids, T_grid, 21);
  CHECK(rep_up.phi_minus_obstruction);
  CHECK_FALSE(rep_up.phi_plus_obstruction);

  const auto flat = synthetic(600.0, 3000, [](double) { return 0.0; });
  const auto rep_flat = theorem2_check(PairingEngine(flat), etas, ids, T_grid, 21);
  CHECK_FALSE(rep_flat.phi_plus_obstruction);
  CHECK_FALSE(rep_flat.phi_minus_obstruction);
  CHECK(rep_flat.running_inf == 0.0);
  CHECK(rep_flat.running_sup == 0.0);

  // rows carry the CSV columns
  REQUIRE_FALSE(rep_up.rows.empty());
  CHECK(rep_up.rows.front().eta_id == "eta1");
  CHECK(rep_up.rows.front().h1 > 0.0);
}

TEST_CASE("log_spaced grids are ascending and hit the endpoints") {
  const auto g = log_spaced(0.5, 800.0, 25);
  CHECK(g.front() == doctest::Approx(0.5));
  CHECK(g.back() == 800.0);
  for (size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK_THROWS(log_spaced(0.0, 1.0, 5));
  CHECK_THROWS(log_spaced(2.0, 1.0, 5));
}
