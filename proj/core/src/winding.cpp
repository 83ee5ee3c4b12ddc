#include "meanwind/winding.hpp"

#include <algorithm>
#include <cmath>

namespace meanwind::winding {

PairingEngine::PairingEngine(const argtrack::ArgumentTrace& trace)
    : nodes_(trace.nodes), values_(trace.values) {
  if (nodes_.size() < 2) throw std::invalid_argument("PairingEngine: trace too short");
  prefix_.resize(nodes_.size());
  prefix_[0] = 0.0;
  // Kahan-compensated prefix sums keep the exact-integration promise at the
  // 1e-9 level on million-node traces.
  double sum = 0.0, comp = 0.0;
  for (size_t i = 1; i < nodes_.size(); ++i) {
    const double seg =
        0.5 * (values_[i] + values_[i - 1]) * (nodes_[i] - nodes_[i - 1]);
    const double y = seg - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    prefix_[i] = sum;
  }
}

double PairingEngine::cumulative(double t) const {
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  size_t j = static_cast<size_t>(it - nodes_.begin());
  if (j == 0) return 0.0;                      // t == nodes_.front()
  if (j >= nodes_.size()) j = nodes_.size() - 1;
  else --j;
  if (j == nodes_.size() - 1) return prefix_.back();
  const double x0 = nodes_[j], x1 = nodes_[j + 1];
  const double v0 = values_[j], v1 = values_[j + 1];
  const double vt = v0 + (v1 - v0) * (t - x0) / (x1 - x0);
  return prefix_[j] + 0.5 * (v0 + vt) * (t - x0);
}

double PairingEngine::integral(double a, double b) const {
  if (a > b) return -integral(b, a);
  if (a < nodes_.front() || b > nodes_.back())
    throw SupportError(a, b, nodes_.front(), nodes_.back());
  return cumulative(b) - cumulative(a);
}

double PairingEngine::pairing(const hardy::TestFunction& eta, double T, double y) const {
  if (!(T > 0.0)) throw std::invalid_argument("pairing: T must be > 0");
  const double lo = y + T * eta.support_min();
  const double hi = y + T * eta.support_max();
  if (lo < nodes_.front() || hi > nodes_.back())
    throw SupportError(lo, hi, nodes_.front(), nodes_.back());
  double acc = 0.0;
  double left = cumulative(lo);
  for (size_t j = 0; j < eta.levels.size(); ++j) {
    const double right = cumulative(y + T * eta.breakpoints[j + 1]);
    acc += eta.levels[j] * (right - left);
    left = right;
  }
  return acc / T;
}

std::vector<double> log_spaced(double t_min, double t_max, int count) {
  if (!(t_min > 0.0) || !(t_max > t_min) || count < 2)
    throw std::invalid_argument("log_spaced: need 0 < t_min < t_max and count >= 2");
  std::vector<double> out(count);
  const double l0 = std::log(t_min), l1 = std::log(t_max);
  for (int i = 0; i < count; ++i)
    out[i] = std::exp(l0 + (l1 - l0) * i / (count - 1));
  out.back() = t_max;
  return out;
}

namespace {

std::vector<double> y_grid_for(double T, int y_count) {
  std::vector<double> ys(y_count);
  if (y_count == 1) {
    ys[0] = 0.0;
    return ys;
  }
  for (int i = 0; i < y_count; ++i)
    ys[i] = T * (-1.0 + 2.0 * i / (y_count - 1));
  return ys;
}

// Extrema over the last decade of T, with the spread as drift diagnostic.
EstimateWithDrift decade_extreme(const std::vector<double>& T,
                                 const std::vector<double>& stat, bool take_max) {
  const double cutoff = T.back() / 10.0;
  double best = 0.0, lo = 0.0, hi = 0.0;
  bool first = true;
  for (size_t i = 0; i < T.size(); ++i) {
    if (T[i] < cutoff && i + 1 != T.size()) continue;
    if (first) {
      best = lo = hi = stat[i];
      first = false;
      continue;
    }
    best = take_max ? std::max(best, stat[i]) : std::min(best, stat[i]);
    lo = std::min(lo, stat[i]);
    hi = std::max(hi, stat[i]);
  }
  return {best, hi - lo};
}

SweepReport sweep(const PairingEngine& engine, const hardy::TestFunction& eta,
                  const std::vector<double>& T_grid, int y_count,
                  const std::function<double(double)>& scale,
                  const std::string& eta_id) {
  if (T_grid.empty()) throw std::invalid_argument("sweep: empty T grid");
  SweepReport rep;
  rep.eta_id = eta_id;
  rep.T = T_grid;
  rep.y_count = y_count;
  rep.sup_y.reserve(T_grid.size());
  rep.inf_y.reserve(T_grid.size());
  rep.at_y0.reserve(T_grid.size());
  for (double T : T_grid) {
    const double s = scale(T);
    double sup = 0.0, inf = 0.0, y0 = 0.0;
    bool first = true;
    for (double y : y_grid_for(T, y_count)) {
      const double p = engine.pairing(eta, T, y) * s;
      if (first) {
        sup = inf = p;
        first = false;
      } else {
        sup = std::max(sup, p);
        inf = std::min(inf, p);
      }
      if (y == 0.0) y0 = p;
    }
    if (y_count % 2 == 0) y0 = engine.pairing(eta, T, 0.0) * s;
    rep.sup_y.push_back(sup);
    rep.inf_y.push_back(inf);
    rep.at_y0.push_back(y0);
  }
  rep.upper = decade_extreme(rep.T, rep.sup_y, true);
  rep.lower = decade_extreme(rep.T, rep.inf_y, false);
  rep.tilde_upper = decade_extreme(rep.T, rep.at_y0, true);
  rep.tilde_lower = decade_extreme(rep.T, rep.at_y0, false);
  return rep;
}

}  // namespace

SweepReport mean_winding(const PairingEngine& engine, const hardy::TestFunction& eta,
                         const std::vector<double>& T_grid, int y_count,
                         const std::string& eta_id) {
  return sweep(engine, eta, T_grid, y_count, [](double) { return 1.0; }, eta_id);
}

SweepReport generalized_winding(const PairingEngine& engine,
                                const hardy::TestFunction& eta, double alpha,
                                const std::vector<double>& T_grid, int y_count,
                                const std::string& eta_id) {
  if (!(alpha > 0.0)) throw std::invalid_argument("generalized_winding: alpha must be > 0");
  return sweep(engine, eta, T_grid, y_count,
               [alpha](double T) { return std::pow(T, -alpha); }, eta_id);
}

SweepReport generalized_winding_rho(const PairingEngine& engine,
                                    const hardy::TestFunction& eta,
                                    const std::function<double(double)>& rho,
                                    const std::vector<double>& T_grid, int y_count,
                                    const std::string& eta_id) {
  return sweep(engine, eta, T_grid, y_count,
               [&rho](double T) { return T / rho(T); }, eta_id);
}

SweepReport w_alpha(const PairingEngine& engine, double alpha,
                    const std::vector<double>& T_grid, int y_count) {
  if (!(alpha > 0.0)) throw std::invalid_argument("w_alpha: alpha must be > 0");
  SweepReport rep;
  rep.eta_id = "window-difference";
  rep.T = T_grid;
  rep.y_count = y_count;
  for (double T : T_grid) {
    const double norm = (1.0 + alpha) / (2.0 * std::pow(T, 1.0 + alpha));
    double sup = 0.0, inf = 0.0, y0 = 0.0;
    bool first = true;
    for (double y : y_grid_for(T, y_count)) {
      const double bracket = engine.integral(y, y + T) - engine.integral(y - T, y);
      const double v = norm * bracket;
      if (first) {
        sup = inf = v;
        first = false;
      } else {
        sup = std::max(sup, v);
        inf = std::min(inf, v);
      }
      if (y == 0.0) y0 = v;
    }
    rep.sup_y.push_back(sup);
    rep.inf_y.push_back(inf);
    rep.at_y0.push_back(y0);
  }
  rep.upper = decade_extreme(rep.T, rep.sup_y, true);
  rep.lower = decade_extreme(rep.T, rep.inf_y, false);
  rep.tilde_upper = decade_extreme(rep.T, rep.at_y0, true);
  rep.tilde_lower = decade_extreme(rep.T, rep.at_y0, false);
  return rep;
}

double beta_lower_bound(const SweepReport& w_alpha_1, int r) {
  if (r < 1) throw std::invalid_argument("beta_lower_bound: r must be >= 1");
  return w_alpha_1.upper.value / r;
}

Theorem2Report theorem2_check(const PairingEngine& engine,
                              const std::vector<hardy::TestFunction>& etas,
                              const std::vector<std::string>& eta_ids,
                              const std::vector<double>& T_grid, int y_count,
                              double ratio_threshold) {
  if (etas.size() != eta_ids.size())
    throw std::invalid_argument("theorem2_check: etas and ids must align");
  Theorem2Report rep;
  rep.threshold = ratio_threshold;
  bool first_row = true;

  for (size_t e = 0; e < etas.size(); ++e) {
    const double h1 = hardy::h1_norm(etas[e]).total();
    std::vector<double> per_t_inf, per_t_sup;
    for (double T : T_grid) {
      double tinf = 0.0, tsup = 0.0;
      bool first = true;
      for (double y : y_grid_for(T, y_count)) {
        const double p = engine.pairing(etas[e], T, y);
        const double ratio = p / h1;
        rep.rows.push_back({eta_ids[e], T, y, p, h1, ratio});
        if (first_row) {
          rep.running_inf = rep.running_sup = ratio;
          first_row = false;
        } else {
          rep.running_inf = std::min(rep.running_inf, ratio);
          rep.running_sup = std::max(rep.running_sup, ratio);
        }
        if (first) {
          tinf = tsup = ratio;
          first = false;
        } else {
          tinf = std::min(tinf, ratio);
          tsup = std::max(tsup, ratio);
        }
      }
      per_t_inf.push_back(tinf);
      per_t_sup.push_back(tsup);
    }

    // Divergence over the last decade: strictly monotone and past the
    // threshold at T_max.
    const double cutoff = T_grid.back() / 10.0;
    std::vector<double> dec_inf, dec_sup;
    for (size_t i = 0; i < T_grid.size(); ++i) {
      if (T_grid[i] < cutoff) continue;
      dec_inf.push_back(per_t_inf[i]);
      dec_sup.push_back(per_t_sup[i]);
    }
    if (dec_inf.size() >= 3) {
      bool down = true, up = true;
      for (size_t i = 1; i < dec_inf.size(); ++i) {
        down = down && dec_inf[i] < dec_inf[i - 1];
        up = up && dec_sup[i] > dec_sup[i - 1];
      }
      if (down && dec_inf.back() < -ratio_threshold) rep.phi_plus_obstruction = true;
      if (up && dec_sup.back() > ratio_threshold) rep.phi_minus_obstruction = true;
    }
  }
  return rep;
}

}  // namespace meanwind::winding
