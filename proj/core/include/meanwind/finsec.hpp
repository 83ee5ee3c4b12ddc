// Finite sections of block Toeplitz matrices through the circle pullback,
// SVD-based kernel data, the winding-route index estimate, Hankel/Nehari
// distance probes, and the phi^n left-invertibility probe.
//
// The oracle is gated by an aliasing residual (tail energy of the last
// octave of Fourier coefficients): symbols without limits at +-infinity pull
// back to circle symbols discontinuous at the point 1, where finite sections
// are unreliable; the gate turns a silent wrong answer into a reported
// inapplicability.
//
// Square truncations always have dim ker T_n = dim ker T_n^*; the
// operator-level kernel/cokernel asymmetry is recovered by the winding route
// and the coefficient-shift cross-check, and reports state which route
// produced the index.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "meanwind/symbol.hpp"

namespace meanwind::finsec {

using Complex = std::complex<double>;

class OracleInapplicable : public std::runtime_error {
 public:
  explicit OracleInapplicable(const std::string& why)
      : std::runtime_error("finite-section oracle not applicable: " + why) {}
};

struct CoeffTable {
  int r = 1;
  int K = 0;         // coefficients stored for k in [-K, K]
  int fft_size = 0;  // sampling grid size M
  std::vector<Eigen::MatrixXcd> coeffs;  // index k + K

  double aliasing_residual = 0.0;  // tail-energy fraction of the last octave
  double det_winding_raw = 0.0;    // circle winding of det of the samples
  double det_winding_max_step = 0.0;
  double min_det_modulus = 0.0;    // over the circle samples
  double max_det_modulus = 0.0;

  const Eigen::MatrixXcd& at(int k) const {
    if (k < -K || k > K) throw std::out_of_range("CoeffTable::at: |k| > K");
    return coeffs[static_cast<size_t>(k + K)];
  }
};

// Fourier coefficients of the pulled-back symbol, sampled at the midpoint
// circle grid theta_j = -pi + (j+1/2) 2pi/M (never hits theta = +-pi).
// fft_size must be a power of two >= 8K.
CoeffTable fourier_coeffs(const symbolkit::SymbolSpec& sym, int K, int fft_size);

// Same transform for externally supplied samples at the midpoint grid.
CoeffTable fourier_coeffs_from_samples(const std::vector<Eigen::MatrixXcd>& samples,
                                       int K);

// Block entry (j, l) = hat G_{j - l}, 0 <= j, l < n; requires n <= K.
Eigen::MatrixXcd toeplitz_section(const CoeffTable& coeffs, int n);

struct SvdReport {
  double sigma_min = 0.0, sigma_max = 0.0;
  int kernel_dim = 0;     // #{sigma < threshold}
  int cokernel_dim = 0;   // same count for a square truncation
  double threshold = 0.0;
  bool threshold_stable = false;  // counts agree one decade up and down
  std::vector<double> singular_values;  // descending
};

// threshold <= 0 selects the default 1e-6 * sigma_max.
SvdReport svd_report(const Eigen::MatrixXcd& section, double threshold = 0.0);

struct IndexEstimate {
  int index = 0;
  bool stable = false;
  std::string route;               // how the index was produced
  double winding_raw = 0.0;        // circle winding of det before rounding
  std::vector<int> n_list;
  std::vector<int> kernel_dims;          // per n, numerical kernel of T_n(G)
  std::vector<int> shifted_kernel_dims;  // per n, kernel of T_n(w^{-m} G)
  bool shift_check_passed = false;
};

// Index by the winding of det of the pulled-back symbol, cross-checked by
// the coefficient-shift sections (w^{-m} G must have trivial numerical
// kernels when the winding is m). Gated by the aliasing residual.
IndexEstimate index_estimate(const CoeffTable& coeffs, const std::vector<int>& n_list,
                             double aliasing_tol = 1e-6);

enum class NehariVerdict { LeftInvertible, NearOne, Inconclusive };

std::string to_string(NehariVerdict v);

struct NehariProbe {
  std::vector<int> n;
  std::vector<double> sigma;        // largest Hankel singular value per n
  double distance_lower_bound = 0.0;
  NehariVerdict verdict = NehariVerdict::Inconclusive;
  double margin = 0.02;
  double aliasing_residual = 0.0;
};

// Hankel sections H_n with block entries hat U_{-(j+l+1)}; per-n largest
// singular values are nondecreasing (nested compressions) and converge to
// dist(U, H-infinity) for smooth U by the Nehari correspondence.
// Precondition: |det U| = 1 on the samples within 1e-8.
NehariProbe nehari_distance(const CoeffTable& u_coeffs, const std::vector<int>& n_list,
                            double margin = 0.02, double aliasing_tol = 1e-3);

struct PhiProbeResult {
  int success_n = -1;               // first n with distance < 1 - margin
  std::vector<double> distances;    // per n = 0..N
  std::vector<NehariVerdict> verdicts;
  std::string verdict;              // summary sentence
  double aliasing_residual = 0.0;
};

// Scalar probe: for n = 0..N multiply by phi^n (a coefficient shift of the
// unimodular part) and test left invertibility through the Nehari distance.
// Success certifies "Phi+ consistent (at n)"; exhausting N proves nothing.
PhiProbeResult phi_n_probe(const symbolkit::SymbolSpec& sym, int N, int K,
                           int fft_size, const std::vector<int>& n_list,
                           double margin = 0.02);

}  // namespace meanwind::finsec
