// Continuous branch of arg det G on the real line.
//
// The trace is built by adaptive unwrapping: raw phase steps are kept below
// pi/2 by bisecting segments, which removes the aliasing ambiguity a plain
// pi threshold would leave near +-pi. The branch is fixed by taking the
// value at the leftmost node in (-pi, pi]; everything downstream is
// invariant under the remaining additive 2*pi*n constant.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "meanwind/grid.hpp"
#include "meanwind/symbol.hpp"

namespace meanwind::argtrack {

struct ArgumentTrace {
  std::vector<double> nodes;          // strictly increasing
  std::vector<double> values;         // unwrapped argument, radians
  std::vector<int> segment_depth;     // refinement depth per final segment
  std::uint64_t symbol_digest = 0;

  double min() const { return nodes.front(); }
  double max() const { return nodes.back(); }
  size_t size() const { return nodes.size(); }
};

class DepthExhausted : public std::runtime_error {
 public:
  DepthExhausted(double a, double b, int depth)
      : std::runtime_error("unwrap_arg: refinement depth " + std::to_string(depth) +
                           " exhausted on segment [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]; the symbol oscillates faster than resolvable"),
        segment_a(a),
        segment_b(b) {}
  double segment_a, segment_b;
};

class ZeroDeterminant : public std::runtime_error {
 public:
  explicit ZeroDeterminant(double x)
      : std::runtime_error("unwrap_arg: det G vanishes at x = " + std::to_string(x)),
        at_x(x) {}
  double at_x;
};

class NonConvergentTails : public std::runtime_error {
 public:
  NonConvergentTails(double left, double right, double tol)
      : std::runtime_error(
            "winding_number: argument tails not flat (variation " +
            std::to_string(left) + " / " + std::to_string(right) + " vs tolerance " +
            std::to_string(tol) + "); the index formula does not apply"),
        left_variation(left),
        right_variation(right) {}
  double left_variation, right_variation;
};

// Adaptive unwrapping: a segment is accepted only when its raw phase step is
// below pi/2 and the exact derivative of arg det bounds the possible motion
// across the segment (width * slope <= pi/4); otherwise it is bisected, up
// to max_depth. max_nodes caps the trace size for runaway phases.
ArgumentTrace unwrap_arg(const symbolkit::SymbolSpec& sym,
                         const symbolkit::SampleGrid& grid, int max_depth = 40,
                         size_t max_nodes = 2000000);

struct WindingResult {
  int winding = 0;
  double raw = 0.0;        // (values.back() - values.front()) / 2pi
  double residual = 0.0;   // raw - winding; ~0.5 signals unequal limits of G
  double tail_variation_left = 0.0;
  double tail_variation_right = 0.0;
};

// Precondition: over the outermost decade in x on each side the argument
// varies by less than tail_tolerance (certifies finite limits); throws
// NonConvergentTails otherwise. A rounding residual near 1/2 signals that
// the limits of G itself differ (arg jump an odd multiple of pi).
WindingResult winding_number(const ArgumentTrace& trace, double tail_tolerance = 0.2);

enum class Side { MinusInfinity, PlusInfinity };

struct MeanMotionResult {
  double slope = 0.0;        // extrapolated mean motion
  double dispersion = 0.0;   // spread of slopes across windows
  bool detected = false;
  std::vector<double> window_slopes;  // per dyadic window, small to large
};

// Least-squares slope of the trace over 5 dyadically growing windows at the
// chosen end; requires the trace to extend at least 10*window to that side.
MeanMotionResult mean_motion(const ArgumentTrace& trace, Side side, double window,
                             double dispersion_threshold = 0.05);

// Two-column CSV (x, arg); the header comment carries the symbol digest and
// the branch and orientation conventions.
std::string trace_csv(const ArgumentTrace& trace);

}  // namespace meanwind::argtrack
