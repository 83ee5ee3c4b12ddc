// Mean-zero step functions with closed-form Hilbert transform.
//
// The cone of admissible test functions consists of compactly supported
// mean-zero functions whose cumulative integral stays nonpositive; for step
// functions both properties are decidable exactly at the breakpoints. The
// Hilbert transform of a step function is a finite sum of logarithms,
//   (H eta)(x) = (1/pi) sum_j v_j log(|x - a_{j-1}| / |x - a_j|),
// and its L1 norm is computed by adaptive quadrature on a finite window plus
// an analytic tail from the moment expansion
//   (H eta)(x) = (1/pi) (m1/x^2 + m2/x^3 + O(x^-4)),  m_k = int t^k eta dt.

#pragma once

#include <stdexcept>
#include <vector>

namespace meanwind::hardy {

struct TestFunction {
  std::vector<double> breakpoints;  // a_0 < a_1 < ... < a_m
  std::vector<double> levels;       // value on (a_{j-1}, a_j); zero outside
  bool in_cone = false;             // cumulative integral <= 0 everywhere

  // Validates layout, renormalizes the total integral to zero (inputs must
  // already be mean-zero to 1e-14 relative), and checks the cone condition
  // when require_cone is set.
  static TestFunction make(std::vector<double> breakpoints, std::vector<double> levels,
                           bool require_cone = true);

  double value(double x) const;
  double l1_norm() const;
  double moment(int k) const;      // int t^k eta(t) dt, exact (k <= 3)
  double support_min() const { return breakpoints.front(); }
  double support_max() const { return breakpoints.back(); }
  double cumulative_min() const;   // min over breakpoints of int_{-inf}^{a_j}
};

// eta_alpha = (1+alpha)/2 (chi_[0,1] - chi_[-1,0]); in the cone for alpha > 0.
TestFunction eta_alpha(double alpha);

// eta((x - y)/T): breakpoints map to a_j T + y, levels unchanged.
TestFunction scale_translate(const TestFunction& eta, double T, double y);

struct HilbertValue {
  double value = 0.0;
  bool at_breakpoint = false;  // evaluated at x +- delta and averaged
};

HilbertValue hilbert_step(const TestFunction& eta, double x);

struct H1Norm {
  double l1 = 0.0;           // ||eta||_L1, exact
  double hilbert_l1 = 0.0;   // ||H eta||_L1, quadrature + analytic tail
  double error_bound = 0.0;  // reported budget for hilbert_l1
  double total() const { return l1 + hilbert_l1; }
};

H1Norm h1_norm(const TestFunction& eta, double tol = 1e-6);

}  // namespace meanwind::hardy
