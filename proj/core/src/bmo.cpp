#include "meanwind/bmo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace meanwind::bmo {

namespace {

// Piecewise-linear trace with a compensated prefix integral; supports exact
// window means and exact integrals of |f - c|.
class Piecewise {
 public:
  explicit Piecewise(const argtrack::ArgumentTrace& trace)
      : x_(trace.nodes), v_(trace.values) {
    prefix_.resize(x_.size());
    prefix_[0] = 0.0;
    double sum = 0.0, comp = 0.0;
    for (size_t i = 1; i < x_.size(); ++i) {
      const double seg = 0.5 * (v_[i] + v_[i - 1]) * (x_[i] - x_[i - 1]);
      const double y = seg - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
      prefix_[i] = sum;
    }
  }

  double xmin() const { return x_.front(); }
  double xmax() const { return x_.back(); }

  double value(double t, size_t hint) const {
    const size_t j = segment_of(t, hint);
    const double w = (t - x_[j]) / (x_[j + 1] - x_[j]);
    return v_[j] + (v_[j + 1] - v_[j]) * w;
  }

  size_t segment_of(double t, size_t hint) const {
    size_t j = hint;
    while (j + 2 < x_.size() && x_[j + 1] <= t) ++j;
    while (j > 0 && x_[j] > t) --j;
    return j;
  }

  double integral(double a, double b, size_t hint_a) const {
    a = std::clamp(a, xmin(), xmax());
    b = std::clamp(b, xmin(), xmax());
    return cumulative(b, segment_of(b, hint_a)) - cumulative(a, segment_of(a, hint_a));
  }

  // int_a^b |f - c| with f linear per segment, split at sign changes.
  double abs_deviation(double a, double b, double c, size_t hint) const {
    a = std::clamp(a, xmin(), xmax());
    b = std::clamp(b, xmin(), xmax());
    double acc = 0.0;
    size_t j = segment_of(a, hint);
    double p = a;
    double gp = value(a, j) - c;
    while (p < b) {
      while (j + 2 < x_.size() && x_[j + 1] <= p) ++j;
      const double q = std::min(b, x_[j + 1]);
      const double gq = value(q, j) - c;
      if (gp == 0.0 || gq == 0.0 || (gp > 0.0) == (gq > 0.0)) {
        acc += 0.5 * std::abs(gp + gq) * (q - p);
      } else {
        const double root = p + (q - p) * gp / (gp - gq);
        acc += 0.5 * std::abs(gp) * (root - p) + 0.5 * std::abs(gq) * (q - root);
      }
      p = q;
      gp = gq;
    }
    return acc;
  }

 private:
  double cumulative(double t, size_t j) const {
    const double vt = value(t, j);
    return prefix_[j] + 0.5 * (v_[j] + vt) * (t - x_[j]);
  }

  const std::vector<double>& x_;
  const std::vector<double>& v_;
  std::vector<double> prefix_;
};

struct LogLogFit {
  double slope = 0.0;
  double residual = 0.0;  // multiplicative: exp(rms log deviation) - 1
  bool valid = false;
};

LogLogFit fit_top_scales(const std::vector<ScaleRecord>& scales, size_t top) {
  LogLogFit fit;
  const size_t n = scales.size();
  const size_t use = std::min(top, n);
  if (use < 2) return fit;
  std::vector<double> lx, ly;
  for (size_t i = n - use; i < n; ++i) {
    if (!(scales[i].oscillation > 0.0)) return fit;
    lx.push_back(std::log(scales[i].scale));
    ly.push_back(std::log(scales[i].oscillation));
  }
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(ly.size());
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  double ss = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    const double pred = my + fit.slope * (lx[i] - mx);
    ss += (ly[i] - pred) * (ly[i] - pred);
  }
  fit.residual = std::exp(std::sqrt(ss / static_cast<double>(lx.size()))) - 1.0;
  fit.valid = true;
  return fit;
}

}  // namespace

std::vector<double> dyadic_scales(const argtrack::ArgumentTrace& trace, int count) {
  const double range = trace.max() - trace.min();
  std::vector<double> scales;
  double L = range / 2.0;
  for (int i = 0; i < count; ++i) {
    scales.push_back(L);
    L /= 2.0;
  }
  std::sort(scales.begin(), scales.end());
  return scales;
}

OscillationProfile oscillation_profile(const argtrack::ArgumentTrace& trace,
                                       const std::vector<double>& scales) {
  if (trace.size() < 2) throw std::invalid_argument("oscillation_profile: trace too short");
  Piecewise f(trace);
  const double range = f.xmax() - f.xmin();

  OscillationProfile profile;
  double vmax = 0.0;
  for (double v : trace.values) vmax = std::max(vmax, std::abs(v));

  std::vector<double> sorted = scales;
  std::sort(sorted.begin(), sorted.end());
  for (double L : sorted) {
    if (!(L > 0.0) || L > range)
      throw std::invalid_argument("oscillation_profile: scale exceeds trace range");
    ScaleRecord rec;
    rec.scale = L;
    const double stride = L / 4.0;
    size_t hint = 0;
    double s = f.xmin();
    for (;;) {
      const double e = s + L;
      hint = f.segment_of(s, hint);
      const double mean = f.integral(s, e, hint) / L;
      const double osc = f.abs_deviation(s, e, mean, hint) / L;
      if (osc > rec.oscillation) {
        rec.oscillation = osc;
        rec.worst_location = s;
      }
      if (e >= f.xmax()) break;
      s = std::min(s + stride, f.xmax() - L);
    }
    profile.scales.push_back(rec);
  }

  double omax = 0.0;
  for (const auto& r : profile.scales) omax = std::max(omax, r.oscillation);
  profile.flat = omax <= 1e-12 * (1.0 + vmax);
  if (!profile.flat) {
    const LogLogFit fit = fit_top_scales(profile.scales, 4);
    if (fit.valid) {
      profile.growth_slope = fit.slope;
      profile.fit_residual = fit.residual;
    } else {
      profile.flat = true;
    }
  }
  return profile;
}

std::vector<double> isotonic_fit(const std::vector<double>& values, Direction dir) {
  const size_t n = values.size();
  std::vector<double> v = values;
  if (dir == Direction::NonIncreasing)
    for (double& x : v) x = -x;

  // Pool adjacent violators with unit weights.
  std::vector<double> mean(n), weight(n);
  std::vector<size_t> count(n);
  size_t blocks = 0;
  for (size_t i = 0; i < n; ++i) {
    mean[blocks] = v[i];
    weight[blocks] = 1.0;
    count[blocks] = 1;
    ++blocks;
    while (blocks > 1 && mean[blocks - 2] >= mean[blocks - 1]) {
      const double w = weight[blocks - 2] + weight[blocks - 1];
      mean[blocks - 2] =
          (mean[blocks - 2] * weight[blocks - 2] + mean[blocks - 1] * weight[blocks - 1]) / w;
      weight[blocks - 2] = w;
      count[blocks - 2] += count[blocks - 1];
      --blocks;
    }
  }

  std::vector<double> out;
  out.reserve(n);
  for (size_t b = 0; b < blocks; ++b)
    out.insert(out.end(), count[b], mean[b]);
  if (dir == Direction::NonIncreasing)
    for (double& x : out) x = -x;
  return out;
}

MonotoneSplit monotone_split(const argtrack::ArgumentTrace& trace, Direction dir) {
  MonotoneSplit split;
  split.monotone.nodes = trace.nodes;
  split.monotone.symbol_digest = trace.symbol_digest;
  split.monotone.values = isotonic_fit(trace.values, dir);
  split.residual.nodes = trace.nodes;
  split.residual.symbol_digest = trace.symbol_digest;
  split.residual.values.resize(trace.values.size());
  for (size_t i = 0; i < trace.values.size(); ++i)
    split.residual.values[i] = trace.values[i] - split.monotone.values[i];
  return split;
}

Theorem1Report theorem1_report(const argtrack::ArgumentTrace& trace,
                               const std::vector<double>& scales,
                               double slope_threshold, double residual_threshold) {
  Theorem1Report rep;
  rep.slope_threshold = slope_threshold;
  rep.residual_threshold = residual_threshold;
  rep.raw = oscillation_profile(trace, scales);
  rep.plus_residual =
      oscillation_profile(monotone_split(trace, Direction::NonDecreasing).residual, scales);
  rep.minus_residual =
      oscillation_profile(monotone_split(trace, Direction::NonIncreasing).residual, scales);

  rep.bmo_obstruction = rep.raw.growth_fires(slope_threshold, residual_threshold);
  rep.bmo_plus_obstruction =
      rep.plus_residual.growth_fires(slope_threshold, residual_threshold);
  rep.bmo_minus_obstruction =
      rep.minus_residual.growth_fires(slope_threshold, residual_threshold);

  if (rep.bmo_plus_obstruction && rep.bmo_minus_obstruction)
    rep.classification = "finite-window obstruction to BMO+ and BMO- (hence to Phi)";
  else if (rep.bmo_plus_obstruction)
    rep.classification = "finite-window obstruction to BMO+ (hence to Phi+)";
  else if (rep.bmo_minus_obstruction)
    rep.classification = "finite-window obstruction to BMO- (hence to Phi-)";
  else if (rep.bmo_obstruction)
    rep.classification = "finite-window obstruction to BMO (hence to Phi)";
  else
    rep.classification = "no obstruction found";
  return rep;
}

}  // namespace meanwind::bmo
