#include "meanwind/argtrack.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

namespace meanwind::argtrack {

using symbolkit::Complex;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct NodeSample {
  double x;
  Complex det;
  double slope;  // |d/dx arg det|
};

struct Unwrapper {
  const symbolkit::SymbolSpec& sym;
  int max_depth;
  size_t max_nodes;
  ArgumentTrace trace;

  NodeSample sample(double x) const {
    const auto dv = sym.det_with_slope(x);
    if (!(std::abs(dv.det) > 0.0)) throw ZeroDeterminant(x);
    return {x, dv.det, dv.arg_slope};
  }

  // Appends the node (x, value continuous with the previous one), re-snapped
  // to the principal argument so exp(i*value) stays exactly on det/|det|.
  void append(const NodeSample& n, double step, int depth) {
    if (trace.nodes.size() >= max_nodes)
      throw std::runtime_error("unwrap_arg: trace node budget exceeded (" +
                               std::to_string(max_nodes) + ")");
    const double prev = trace.values.back();
    const double principal = std::arg(n.det);
    const double k = std::round((prev + step - principal) / kTwoPi);
    trace.nodes.push_back(n.x);
    trace.values.push_back(principal + kTwoPi * k);
    trace.segment_depth.push_back(depth);
  }

  // A segment is accepted when the raw phase step is below pi/2 AND the
  // derivative bound certifies the argument cannot have wrapped unseen:
  // width * max(endpoint slopes) <= pi/4. The second test is what makes the
  // huge outer segments of the tangent grid safe for fast phases.
  void segment(const NodeSample& a, const NodeSample& b, int depth) {
    const double step = std::arg(b.det / a.det);
    const double width = b.x - a.x;
    const double slope = std::max(a.slope, b.slope);
    if (std::abs(step) < kPi / 2.0 && width * slope <= kPi / 4.0) {
      append(b, step, depth);
      return;
    }
    if (depth >= max_depth) throw DepthExhausted(a.x, b.x, depth);
    const double xm = 0.5 * (a.x + b.x);
    if (!(xm > a.x && xm < b.x)) throw DepthExhausted(a.x, b.x, depth);
    const NodeSample m = sample(xm);
    segment(a, m, depth + 1);
    segment(m, b, depth + 1);
  }
};

double lsq_slope(const std::vector<double>& xs, const std::vector<double>& vs,
                 size_t begin, size_t end) {
  const size_t n = end - begin;
  double mx = 0.0, mv = 0.0;
  for (size_t i = begin; i < end; ++i) {
    mx += xs[i];
    mv += vs[i];
  }
  mx /= static_cast<double>(n);
  mv /= static_cast<double>(n);
  double sxx = 0.0, sxv = 0.0;
  for (size_t i = begin; i < end; ++i) {
    const double dx = xs[i] - mx;
    sxx += dx * dx;
    sxv += dx * (vs[i] - mv);
  }
  return sxv / sxx;
}

}  // namespace

ArgumentTrace unwrap_arg(const symbolkit::SymbolSpec& sym,
                         const symbolkit::SampleGrid& grid, int max_depth,
                         size_t max_nodes) {
  if (grid.nodes.size() < 2)
    throw std::invalid_argument("unwrap_arg: grid needs at least 2 nodes");
  Unwrapper u{sym, max_depth, max_nodes, {}};
  u.trace.symbol_digest = sym.digest;
  u.trace.nodes.reserve(grid.nodes.size());
  u.trace.values.reserve(grid.nodes.size());

  NodeSample prev = u.sample(grid.nodes.front());
  u.trace.nodes.push_back(prev.x);
  u.trace.values.push_back(std::arg(prev.det));  // branch fixed in (-pi, pi]

  for (size_t i = 1; i < grid.nodes.size(); ++i) {
    const NodeSample next = u.sample(grid.nodes[i]);
    u.segment(prev, next, 0);
    prev = next;
  }
  return u.trace;
}

WindingResult winding_number(const ArgumentTrace& trace, double tail_tolerance) {
  const size_t n = trace.size();
  if (n < 4) throw std::invalid_argument("winding_number: trace too short");

  // Tail windows are the outermost decade in x on each side (|x| >= end/10);
  // for a symbol with finite limits the variation there shrinks under grid
  // refinement, which a fixed fraction of nodes would not.
  size_t left_end = std::max<size_t>(2, n / 10);
  size_t right_begin = n - std::max<size_t>(2, n / 10);
  if (trace.min() < 0.0) {
    const double cut = trace.min() / 10.0;
    const auto it = std::upper_bound(trace.nodes.begin(), trace.nodes.end(), cut);
    left_end = std::max<size_t>(2, static_cast<size_t>(it - trace.nodes.begin()));
  }
  if (trace.max() > 0.0) {
    const double cut = trace.max() / 10.0;
    const auto it = std::lower_bound(trace.nodes.begin(), trace.nodes.end(), cut);
    right_begin = std::min(n - 2, static_cast<size_t>(it - trace.nodes.begin()));
  }

  auto variation = [&](size_t begin, size_t end) {
    double lo = trace.values[begin], hi = trace.values[begin];
    for (size_t i = begin; i < end; ++i) {
      lo = std::min(lo, trace.values[i]);
      hi = std::max(hi, trace.values[i]);
    }
    return hi - lo;
  };
  const double var_left = variation(0, left_end);
  const double var_right = variation(right_begin, n);
  if (var_left > tail_tolerance || var_right > tail_tolerance)
    throw NonConvergentTails(var_left, var_right, tail_tolerance);

  WindingResult res;
  res.raw = (trace.values.back() - trace.values.front()) / kTwoPi;
  res.winding = static_cast<int>(std::lround(res.raw));
  res.residual = res.raw - res.winding;
  res.tail_variation_left = var_left;
  res.tail_variation_right = var_right;
  return res;
}

MeanMotionResult mean_motion(const ArgumentTrace& trace, Side side, double window,
                             double dispersion_threshold) {
  if (!(window > 0.0)) throw std::invalid_argument("mean_motion: window must be > 0");
  const double extent =
      side == Side::PlusInfinity ? trace.max() : -trace.min();
  if (extent < 10.0 * window)
    throw std::invalid_argument(
        "mean_motion: trace must extend at least 10*window toward the chosen side");

  MeanMotionResult res;
  const double factors[] = {0.5, 1.0, 2.0, 4.0, 8.0};
  for (double f : factors) {
    const double w = f * window;
    size_t begin = 0, end = trace.size();
    if (side == Side::PlusInfinity) {
      const double cut = trace.max() - w;
      begin = static_cast<size_t>(
          std::lower_bound(trace.nodes.begin(), trace.nodes.end(), cut) -
          trace.nodes.begin());
    } else {
      const double cut = trace.min() + w;
      end = static_cast<size_t>(
          std::upper_bound(trace.nodes.begin(), trace.nodes.end(), cut) -
          trace.nodes.begin());
    }
    if (end - begin < 8) continue;  // window too thin on this trace
    res.window_slopes.push_back(lsq_slope(trace.nodes, trace.values, begin, end));
  }
  if (res.window_slopes.size() < 2)
    throw std::invalid_argument("mean_motion: too few usable windows");

  const auto [lo, hi] =
      std::minmax_element(res.window_slopes.begin(), res.window_slopes.end());
  res.dispersion = *hi - *lo;
  const size_t m = res.window_slopes.size();
  res.slope = 0.5 * (res.window_slopes[m - 1] + res.window_slopes[m - 2]);
  res.detected = res.dispersion <= dispersion_threshold;
  return res;
}

std::string trace_csv(const ArgumentTrace& trace) {
  std::string out;
  char buf[80];
  std::snprintf(buf, sizeof(buf), "# symbol_digest=%016llx",
                static_cast<unsigned long long>(trace.symbol_digest));
  out += buf;
  out += " branch=leftmost-node-principal orientation=x=tan(theta/2)\n";
  out += "x,arg\n";
  for (size_t i = 0; i < trace.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", trace.nodes[i], trace.values[i]);
    out += buf;
  }
  return out;
}

}  // namespace meanwind::argtrack
