#include "meanwind/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "meanwind/quadrature.hpp"

namespace meanwind::hardy {

namespace {

constexpr double kPi = std::numbers::pi;

double total_integral(const std::vector<double>& a, const std::vector<double>& v) {
  double s = 0.0;
  for (size_t j = 0; j < v.size(); ++j) s += v[j] * (a[j + 1] - a[j]);
  return s;
}

}  // namespace

TestFunction TestFunction::make(std::vector<double> breakpoints,
                                std::vector<double> levels, bool require_cone) {
  if (breakpoints.size() < 2 || levels.size() + 1 != breakpoints.size())
    throw std::invalid_argument("TestFunction: need m+1 breakpoints and m levels");
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw std::invalid_argument("TestFunction: breakpoints must be strictly increasing");
  for (double a : breakpoints)
    if (!std::isfinite(a)) throw std::invalid_argument("TestFunction: breakpoint not finite");

  double scale = 0.0;
  for (size_t j = 0; j < levels.size(); ++j)
    scale += std::abs(levels[j]) * (breakpoints[j + 1] - breakpoints[j]);
  if (!(scale > 0.0)) throw std::invalid_argument("TestFunction: function is identically zero");

  // Total integral must vanish: accept inputs within 1e-14 of zero, then
  // renormalize so the computed sum is zero to rounding.
  double I = total_integral(breakpoints, levels);
  if (std::abs(I) > 1e-14 * scale)
    throw std::invalid_argument("TestFunction: total integral must be zero");
  const double length = breakpoints.back() - breakpoints.front();
  for (double& v : levels) v -= I / length;
  I = total_integral(breakpoints, levels);
  levels.back() -= I / (breakpoints.back() - breakpoints[breakpoints.size() - 2]);

  TestFunction eta;
  eta.breakpoints = std::move(breakpoints);
  eta.levels = std::move(levels);

  // Cone condition: the cumulative integral is piecewise linear, so its
  // maximum over R is attained at a breakpoint.
  {
    double cum = 0.0, cmax = 0.0;
    for (size_t j = 0; j < eta.levels.size(); ++j) {
      cum += eta.levels[j] * (eta.breakpoints[j + 1] - eta.breakpoints[j]);
      cmax = std::max(cmax, cum);
    }
    eta.in_cone = cmax <= 1e-12 * scale;
  }
  if (require_cone && !eta.in_cone)
    throw std::invalid_argument(
        "TestFunction: cumulative integral must stay nonpositive (cone condition)");
  return eta;
}

double TestFunction::value(double x) const {
  if (x < breakpoints.front() || x >= breakpoints.back()) return 0.0;
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  const size_t j = static_cast<size_t>(it - breakpoints.begin());
  if (j == 0 || j > levels.size()) return 0.0;
  return levels[j - 1];
}

double TestFunction::l1_norm() const {
  double s = 0.0;
  for (size_t j = 0; j < levels.size(); ++j)
    s += std::abs(levels[j]) * (breakpoints[j + 1] - breakpoints[j]);
  return s;
}

double TestFunction::moment(int k) const {
  double s = 0.0;
  for (size_t j = 0; j < levels.size(); ++j) {
    const double a = breakpoints[j], b = breakpoints[j + 1];
    s += levels[j] * (std::pow(b, k + 1) - std::pow(a, k + 1)) / (k + 1);
  }
  return s;
}

double TestFunction::cumulative_min() const {
  double cum = 0.0, cmin = 0.0;
  for (size_t j = 0; j < levels.size(); ++j) {
    cum += levels[j] * (breakpoints[j + 1] - breakpoints[j]);
    cmin = std::min(cmin, cum);
  }
  return cmin;
}

TestFunction eta_alpha(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("eta_alpha: alpha must be > 0");
  const double h = 0.5 * (1.0 + alpha);
  return TestFunction::make({-1.0, 0.0, 1.0}, {-h, h});
}

TestFunction scale_translate(const TestFunction& eta, double T, double y) {
  if (!(T > 0.0)) throw std::invalid_argument("scale_translate: T must be > 0");
  TestFunction out = eta;
  for (double& a : out.breakpoints) a = a * T + y;
  return out;
}

namespace {

double hilbert_closed_form(const TestFunction& eta, double x) {
  double s = 0.0;
  for (size_t j = 0; j < eta.levels.size(); ++j)
    s += eta.levels[j] * (std::log(std::abs(x - eta.breakpoints[j])) -
                          std::log(std::abs(x - eta.breakpoints[j + 1])));
  return s / kPi;
}

}  // namespace

HilbertValue hilbert_step(const TestFunction& eta, double x) {
  for (double a : eta.breakpoints) {
    if (x == a) {
      // Principal value exists but the log form is singular here; nudge by
      // the documented offset (at least a few ulps at large |x|).
      const double delta =
          std::max(1e-12, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(x));
      const double left = hilbert_closed_form(eta, x - delta);
      const double right = hilbert_closed_form(eta, x + delta);
      return {0.5 * (left + right), true};
    }
  }
  return {hilbert_closed_form(eta, x), false};
}

H1Norm h1_norm(const TestFunction& eta, double tol) {
  H1Norm out;
  out.l1 = eta.l1_norm();

  const double I = total_integral(eta.breakpoints, eta.levels);
  if (std::abs(I) > 1e-12 * out.l1)
    throw std::invalid_argument("h1_norm: nonzero mean, Hilbert tail not integrable");

  const double m1 = eta.moment(1);
  const double m2 = eta.moment(2);
  const double A = std::max(std::abs(eta.support_min()), std::abs(eta.support_max()));
  const double L1 = out.l1;

  // Window radius X: over each tail, |H eta| = |m1|/(pi x^2) up to the m2
  // term and a geometric remainder. The m2 corrections of the two tails
  // cancel, so they are charged to the error bound instead. X grows until
  // the tail error fits a quarter of the budget and the leading moment term
  // dominates (one consistent sign on each tail).
  const double rem_budget = 0.25 * tol;
  double X = 4.0 * A;
  auto rem_bound = [&](double R) {
    return (L1 * A * A * A) / (3.0 * kPi * R * R * R * (1.0 - A / R));
  };
  auto tail_err = [&](double R) {
    return std::abs(m2) / (kPi * R * R) + 2.0 * rem_bound(R);
  };
  while (tail_err(X) > rem_budget) X *= 2.0;
  auto lead = [&](double R) { return std::abs(m1) / (kPi * R * R); };
  auto next_terms = [&](double R) {
    return std::abs(m2) / (kPi * R * R * R) +
           (L1 * A * A * A) / (kPi * R * R * R * R * (1.0 - A / R));
  };
  if (std::abs(m1) > 0.0)
    while (lead(X) <= next_terms(X)) X *= 2.0;

  double tail_estimate = 0.0;
  const double tail_error = tail_err(X);
  if (std::abs(m1) > 0.0)
    tail_estimate = 2.0 * std::abs(m1) / (kPi * X);
  else if (std::abs(m2) > 0.0)
    tail_estimate = std::abs(m2) / (kPi * X * X);

  // Quadrature window split at breakpoints (log singularities at both ends of
  // each piece are inset by a few ulps; the strips contribute O(d log d)).
  std::vector<double> cuts;
  cuts.push_back(-X);
  for (double a : eta.breakpoints) cuts.push_back(a);
  cuts.push_back(X);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double quad_tol = 0.5 * tol / static_cast<double>(cuts.size());
  double quad = 0.0, inset_slop = 0.0;
  const auto f = [&](double x) { return std::abs(hilbert_closed_form(eta, x)); };
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double p = cuts[i], q = cuts[i + 1];
    const double d = std::max(1e-13, 32.0 * std::numeric_limits<double>::epsilon() *
                                         std::max(std::abs(p), std::abs(q)));
    if (q - p <= 2.0 * d) continue;
    quad += quadrature::adaptive_simpson(f, p + d, q - d, quad_tol);
    const double vmax = std::max(std::abs(f(p + d)), std::abs(f(q - d)));
    inset_slop += 2.0 * d * (vmax + 1.0);
  }

  out.hilbert_l1 = quad + tail_estimate;
  out.error_bound = 0.5 * tol + tail_error + inset_slop;
  return out;
}

}  // namespace meanwind::hardy
