// Matrix symbols on the real line: evaluation, determinants, the Cayley
// pullback to the unit circle, and the sampled minimum-determinant check.
//
// Circle convention (stated in every report): x = tan(theta/2) with
// theta in (-pi, pi), and the circle coordinate is w = phi(x) = e^{i(theta+pi)},
// so theta -> +-pi corresponds to x -> +-infinity and the point w = 1 is the
// unique possible discontinuity of the pulled-back symbol.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "meanwind/expr.hpp"
#include "meanwind/grid.hpp"

namespace meanwind::symbolkit {

enum class SymbolClass { Custom, Whirl, AlmostPeriodic, Sap, Rational };

std::string to_string(SymbolClass c);

struct SymbolSpec {
  int size = 1;                   // r
  std::vector<ExprPtr> entries;   // row-major, size*size
  SymbolClass tag = SymbolClass::Custom;
  std::string text;               // canonical printed form
  std::uint64_t digest = 0;       // FNV-1a of the canonical form

  const Expr& entry(int row, int col) const { return *entries[row * size + col]; }
  bool scalar() const { return size == 1; }

  Eigen::MatrixXcd eval(double x) const;
  Eigen::MatrixXcd eval_at(Complex z) const;  // near-real complex points
  Complex det(double x) const;                // LU with partial pivoting

  struct DetValue {
    Complex det;
    double arg_slope;  // |d/dx arg det| = |Im(det'/det)|, a.e.
  };
  // Determinant with the local phase slope (Jacobi's formula for r > 1);
  // drives the derivative-guided trace refinement.
  DetValue det_with_slope(double x) const;
};

// Builds a spec from an entry grid: canonical text and digest are derived.
SymbolSpec make_symbol(int size, std::vector<ExprPtr> entries,
                       SymbolClass tag = SymbolClass::Custom);

// G(tan(theta/2)); theta = +-pi is rejected (the point 1 on the circle).
Eigen::MatrixXcd cayley_pullback(const SymbolSpec& sym, double theta);

// Inverse boundary map: theta for a given real x, in (-pi, pi).
double cayley_theta(double x);

struct MinDetResult {
  double value = 0.0;   // min over grid of |det G|
  double argmin_x = 0.0;
};

// Sampled lower-bound certificate for |det G| on the grid; grid-dependent.
MinDetResult min_det_modulus(const SymbolSpec& sym, const SampleGrid& grid);

// Inner function C e^{iaz} prod_j (|z_j^2+1|/(z_j^2+1)) (z-z_j)/(z-conj z_j),
// evaluated on the closed upper half-plane. |C| = 1, a >= 0, Im z_j > 0.
Complex inner_eval(double a, Complex unimodular_constant,
                   const std::vector<Complex>& zeros, Complex z);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace meanwind::symbolkit
