// Outer functions from boundary modulus and scalar spectral factorization.
//
// outer_from_modulus evaluates g(z) = exp(u(z) + iv(z)) with
//   (u+iv)(z) = (1/pi i) int [ 1/(t-z) - t/(1+t^2) ] log k(t) dt
// for z in the upper half-plane, from a sampled k > 0 on a finite grid
// (held constant beyond the grid; the tail contribution is evaluated in
// closed form and reported).
//
// spectral_factor_circle produces the analytic (outer) factor g_e of a
// positive circle weight w = |g_e|^2 by the log/cepstral route: Fourier
// coefficients of log w, nonnegative half with the zero mode halved,
// exponentiated in coefficient space by the power-series recursion
//   n g_n = sum_{k=1..n} k h_k g_{n-k},  g_0 = exp(h_0).
// The constant coefficient is normalized positive real.

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "meanwind/grid.hpp"
#include "meanwind/symbol.hpp"

namespace meanwind::hardy {

using Complex = std::complex<double>;

struct SampledModulus {
  std::vector<double> nodes;   // strictly increasing
  std::vector<double> values;  // k > 0
};

struct OuterValue {
  Complex value;        // g(z)
  double tail_weight;   // |log k(edge)| mass assigned to the two tails
};

OuterValue outer_from_modulus(const SampledModulus& k, Complex z, double tol = 1e-8);

struct SpectralFactor {
  std::vector<Complex> coeffs;  // c_0 ... c_N of the outer factor
  double residual;              // max over grid of | |g_e|^2 - w |
  Complex eval(Complex z) const;  // sum c_k z^k
};

SpectralFactor spectral_factor_circle(const std::function<double(double)>& w, int N,
                                      int grid_size = 0);

// Pointwise unimodular part G/|G| of a scalar symbol on a grid.
std::vector<Complex> unimodular_part(const symbolkit::SymbolSpec& sym,
                                     const symbolkit::SampleGrid& grid);

}  // namespace meanwind::hardy
