// Finite-window mean-oscillation diagnostics.
//
// BMO membership over all of R is not decidable from finite data; these
// routines certify only finite-window growth obstructions (the contrapositive
// direction) and say so in every report. The monotone component of the
// BMO+/- splits is estimated by L2 isotonic regression (pool adjacent
// violators), which is exact for purely monotone inputs.

#pragma once

#include <string>
#include <vector>

#include "meanwind/argtrack.hpp"

namespace meanwind::bmo {

struct ScaleRecord {
  double scale = 0.0;
  double worst_location = 0.0;  // left end of the worst window
  double oscillation = 0.0;     // sup over windows of (1/L) int_J |f - f_J|
};

struct OscillationProfile {
  std::vector<ScaleRecord> scales;   // ascending scale
  double growth_slope = 0.0;         // log-log fit over the top scales
  double fit_residual = 0.0;         // multiplicative deviation from power law
  bool flat = false;                 // all oscillation values negligibly small

  bool growth_fires(double slope_threshold = 0.2,
                    double residual_threshold = 0.10) const {
    return !flat && growth_slope > slope_threshold && fit_residual < residual_threshold;
  }
};

// Sliding windows of length L with stride L/4, oscillation computed exactly
// on the piecewise-linear trace.
OscillationProfile oscillation_profile(const argtrack::ArgumentTrace& trace,
                                       const std::vector<double>& scales);

// Dyadic scales range/2, range/4, ..., `count` of them (ascending order).
std::vector<double> dyadic_scales(const argtrack::ArgumentTrace& trace, int count = 10);

enum class Direction { NonDecreasing, NonIncreasing };

// Unweighted L2 isotonic regression (pool adjacent violators).
std::vector<double> isotonic_fit(const std::vector<double>& values, Direction dir);

struct MonotoneSplit {
  argtrack::ArgumentTrace monotone;  // best monotone fit v
  argtrack::ArgumentTrace residual;  // u = f - v
};

MonotoneSplit monotone_split(const argtrack::ArgumentTrace& trace, Direction dir);

struct Theorem1Report {
  OscillationProfile raw;             // surrogate for arg det G in BMO
  OscillationProfile plus_residual;   // after removing a nondecreasing part
  OscillationProfile minus_residual;  // after removing a nonincreasing part
  bool bmo_obstruction = false;        // raw profile grows: not Phi
  bool bmo_plus_obstruction = false;   // plus residual grows: not Phi_+
  bool bmo_minus_obstruction = false;  // minus residual grows: not Phi_-
  std::string classification;          // human-readable summary
  double slope_threshold = 0.2;
  double residual_threshold = 0.10;
};

Theorem1Report theorem1_report(const argtrack::ArgumentTrace& trace,
                               const std::vector<double>& scales,
                               double slope_threshold = 0.2,
                               double residual_threshold = 0.10);

}  // namespace meanwind::bmo
