// Mean winding numbers of arg det G estimated from an argument trace.
//
// The pairing (1/T) int eta((x-y)/T) arg(x) dx is integrated exactly: the
// dilated test function is a step function and the trace is piecewise
// linear, so every term is closed-form. All quadrature error therefore lives
// in the trace itself.
//
// limsup/liminf over T are replaced by extrema over the last decade of a
// log-spaced T grid; every estimate carries the spread over that decade as a
// drift diagnostic. Certificates are one-sided: the theorems are necessary
// conditions, so reports say "certificate" / "no obstruction" /
// "inapplicable", never "is (semi-)Fredholm".

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "meanwind/argtrack.hpp"
#include "meanwind/testfn.hpp"

namespace meanwind::winding {

class SupportError : public std::runtime_error {
 public:
  SupportError(double need_lo, double need_hi, double have_lo, double have_hi)
      : std::runtime_error("pairing: support [" + std::to_string(need_lo) + ", " +
                           std::to_string(need_hi) + "] exceeds trace range [" +
                           std::to_string(have_lo) + ", " + std::to_string(have_hi) + "]") {}
};

class PairingEngine {
 public:
  explicit PairingEngine(const argtrack::ArgumentTrace& trace);

  double xmin() const { return nodes_.front(); }
  double xmax() const { return nodes_.back(); }

  // int_a^b arg(x) dx, exact on the piecewise-linear trace; [a,b] within range.
  double integral(double a, double b) const;

  // (1/T) int eta((x-y)/T) arg(x) dx
  double pairing(const hardy::TestFunction& eta, double T, double y) const;

 private:
  double cumulative(double t) const;

  std::vector<double> nodes_, values_;
  std::vector<double> prefix_;  // compensated running integral
};

std::vector<double> log_spaced(double t_min, double t_max, int count);

struct EstimateWithDrift {
  double value = 0.0;
  double drift = 0.0;  // spread over the last decade of T
};

// One (T, y) sweep of the pairing, under a caller-chosen normalization
// factor scale(T) applied on top of the pairing's 1/T.
struct SweepReport {
  std::string eta_id;
  std::vector<double> T;
  std::vector<double> sup_y, inf_y, at_y0;  // normalized pairing statistics
  EstimateWithDrift upper, lower;            // sup_y then limsup / inf_y then liminf
  EstimateWithDrift tilde_upper, tilde_lower;  // y = 0 variants
  int y_count = 0;
};

// Mean winding numbers (normalization 1/T).
SweepReport mean_winding(const PairingEngine& engine, const hardy::TestFunction& eta,
                         const std::vector<double>& T_grid, int y_count = 41,
                         const std::string& eta_id = "eta");

// Generalized winding numbers with 1/T^{1+alpha} in place of 1/T.
SweepReport generalized_winding(const PairingEngine& engine,
                                const hardy::TestFunction& eta, double alpha,
                                const std::vector<double>& T_grid, int y_count = 41,
                                const std::string& eta_id = "eta");

// As above with a user normalization rho(T), T/rho(T) -> 0.
SweepReport generalized_winding_rho(const PairingEngine& engine,
                                    const hardy::TestFunction& eta,
                                    const std::function<double(double)>& rho,
                                    const std::vector<double>& T_grid, int y_count = 41,
                                    const std::string& eta_id = "eta");

// Direct evaluation of the window-difference form
//   (1+alpha)/(2 T^{1+alpha}) [ int_y^{T+y} - int_{y-T}^y ] arg(x) dx,
// algebraically identical to generalized_winding with eta_alpha.
SweepReport w_alpha(const PairingEngine& engine, double alpha,
                    const std::vector<double>& T_grid, int y_count = 41);

// Corollary-of-Theorem-3 bound: beta(G) >= uw_1(G) / r.
double beta_lower_bound(const SweepReport& w_alpha_1, int r);

struct Theorem2Row {
  std::string eta_id;
  double T, y, pairing, h1, ratio;
};

struct Theorem2Report {
  std::vector<Theorem2Row> rows;
  double running_inf = 0.0, running_sup = 0.0;
  // Divergence of the per-T extreme ratio over the last decade:
  // monotone and beyond the threshold.
  bool phi_plus_obstruction = false;   // ratio inf -> -inf: T_G not in Phi_+
  bool phi_minus_obstruction = false;  // ratio sup -> +inf: T_G not in Phi_-
  double threshold = 0.0;
};

Theorem2Report theorem2_check(const PairingEngine& engine,
                              const std::vector<hardy::TestFunction>& etas,
                              const std::vector<std::string>& eta_ids,
                              const std::vector<double>& T_grid, int y_count = 41,
                              double ratio_threshold = 25.0);

}  // namespace meanwind::winding
