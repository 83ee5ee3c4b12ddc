#include "meanwind/outer.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "meanwind/quadrature.hpp"

namespace meanwind::hardy {

namespace {

constexpr double kPi = std::numbers::pi;

// F(t) = log(t - z) - (1/2) log(1 + t^2), the antiderivative of the Herglotz
// kernel. For Im z > 0 the path t -> t - z stays in the lower half-plane, so
// the principal branch is continuous in t; F(-inf) = -i pi, F(+inf) = 0.
Complex kernel_antiderivative(double t, Complex z) {
  return std::log(Complex(t, 0.0) - z) - 0.5 * std::log1p(t * t);
}

}  // namespace

OuterValue outer_from_modulus(const SampledModulus& k, Complex z, double tol) {
  if (k.nodes.size() < 2 || k.nodes.size() != k.values.size())
    throw std::invalid_argument("outer_from_modulus: need a sampled grid of k");
  if (!(z.imag() > 0.0))
    throw std::domain_error("outer_from_modulus: z must satisfy Im z > 0");
  for (size_t i = 0; i < k.values.size(); ++i) {
    if (!(k.values[i] > 0.0))
      throw std::domain_error("outer_from_modulus: k must be positive at every node");
    if (i + 1 < k.nodes.size() && !(k.nodes[i] < k.nodes[i + 1]))
      throw std::invalid_argument("outer_from_modulus: nodes must be strictly increasing");
  }

  // log k interpolated linearly between nodes.
  const auto logk = [&](double t) {
    const auto it = std::upper_bound(k.nodes.begin(), k.nodes.end(), t);
    size_t j = static_cast<size_t>(it - k.nodes.begin());
    if (j == 0) return std::log(k.values.front());
    if (j >= k.nodes.size()) return std::log(k.values.back());
    const double t0 = k.nodes[j - 1], t1 = k.nodes[j];
    const double l0 = std::log(k.values[j - 1]), l1 = std::log(k.values[j]);
    return l0 + (l1 - l0) * (t - t0) / (t1 - t0);
  };

  const auto integrand = [&](double t) {
    const Complex kern = 1.0 / (Complex(t, 0.0) - z) - Complex(t / (1.0 + t * t), 0.0);
    return kern * logk(t);
  };

  const double lo = k.nodes.front(), hi = k.nodes.back();

  // Refine near Re z where the kernel peaks with width Im z.
  std::vector<double> cuts{lo, hi};
  const double xr = z.real(), y = z.imag();
  for (double c : {xr - 8.0 * y, xr - y, xr, xr + y, xr + 8.0 * y})
    if (c > lo && c < hi) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Complex integral(0.0, 0.0);
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    integral += quadrature::adaptive_simpson(integrand, cuts[i], cuts[i + 1],
                                             tol / static_cast<double>(cuts.size()), 60);

  // Tails with k held constant at its edge values:
  //   west: log k(lo) * (F(lo) - F(-inf)),  east: log k(hi) * (F(inf) - F(hi)).
  const Complex west = std::log(k.values.front()) *
                       (kernel_antiderivative(lo, z) - Complex(0.0, -kPi));
  const Complex east = std::log(k.values.back()) * (-kernel_antiderivative(hi, z));

  OuterValue out;
  out.tail_weight = std::abs(west) + std::abs(east);
  const Complex uv = (integral + west + east) / Complex(0.0, kPi);
  out.value = std::exp(uv);
  return out;
}

Complex SpectralFactor::eval(Complex z) const {
  Complex acc(0.0, 0.0);
  for (size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
  return acc;
}

SpectralFactor spectral_factor_circle(const std::function<double(double)>& w, int N,
                                      int grid_size) {
  if (N < 0) throw std::invalid_argument("spectral_factor_circle: N must be >= 0");
  int M = grid_size;
  if (M <= 0) {
    M = 256;
    while (M < 8 * (N + 1)) M *= 2;
  }
  if (M < 2 * (N + 1))
    throw std::invalid_argument("spectral_factor_circle: grid too small for N");

  // Sample log w on the uniform circle grid.
  std::vector<double> logw(M);
  for (int j = 0; j < M; ++j) {
    const double theta = 2.0 * kPi * j / M;
    const double wj = w(theta);
    if (!(wj > 0.0))
      throw std::domain_error("spectral_factor_circle: w must be positive on the grid");
    logw[j] = std::log(wj);
  }

  Eigen::FFT<double> fft;
  std::vector<Complex> in(logw.begin(), logw.end()), hat(M);
  fft.fwd(hat, in);
  for (auto& c : hat) c /= static_cast<double>(M);

  // Analytic half of log w: h_0 = c_0 / 2, h_k = c_k for 1 <= k <= M/2 - 1.
  const int H = M / 2;
  std::vector<Complex> h(H, Complex(0.0, 0.0));
  h[0] = 0.5 * hat[0];
  for (int k = 1; k < H; ++k) h[k] = hat[k];

  // Exponentiate the truncated series: n g_n = sum_{k=1}^{n} k h_k g_{n-k}.
  std::vector<Complex> g(H, Complex(0.0, 0.0));
  g[0] = std::exp(h[0]);
  for (int n = 1; n < H; ++n) {
    Complex s(0.0, 0.0);
    for (int k = 1; k <= n; ++k) s += static_cast<double>(k) * h[k] * g[n - k];
    g[n] = s / static_cast<double>(n);
  }

  SpectralFactor out;
  out.coeffs.assign(g.begin(), g.begin() + std::min(H, N + 1));
  out.coeffs.resize(N + 1, Complex(0.0, 0.0));

  // Fix the unitary constant: c_0 positive real (it already is up to
  // rounding, since hat[0] is real for a real weight).
  if (std::abs(out.coeffs[0]) > 0.0) {
    const Complex phase = out.coeffs[0] / std::abs(out.coeffs[0]);
    for (auto& c : out.coeffs) c /= phase;
  }

  // Residual of |g_e|^2 against w on a 2(N+1)-point grid (and the fft grid).
  double residual = 0.0;
  for (int j = 0; j < M; ++j) {
    const double theta = 2.0 * kPi * j / M;
    const Complex z = std::polar(1.0, theta);
    const double mag2 = std::norm(out.eval(z));
    residual = std::max(residual, std::abs(mag2 - w(theta)));
  }
  out.residual = residual;
  return out;
}

std::vector<Complex> unimodular_part(const symbolkit::SymbolSpec& sym,
                                     const symbolkit::SampleGrid& grid) {
  if (!sym.scalar())
    throw std::invalid_argument("unimodular_part: scalar symbols only");
  std::vector<Complex> out;
  out.reserve(grid.nodes.size());
  for (double x : grid.nodes) {
    const Complex v = sym.det(x);
    const double m = std::abs(v);
    if (!(m > 0.0))
      throw std::domain_error("unimodular_part: symbol vanishes at x = " +
                              std::to_string(x));
    out.push_back(v / m);
  }
  return out;
}

}  // namespace meanwind::hardy
