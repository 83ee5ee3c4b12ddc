#include "meanwind/finsec.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace meanwind::finsec {

namespace {

constexpr double kPi = std::numbers::pi;

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

// Assembles the coefficient table from per-sample matrices on the midpoint
// grid. The circle coordinate is w = e^{i psi}, psi_j = (j+1/2) 2pi/M, so
//   hat G_k = (1/M) e^{-i pi k / M} FFT_k.
CoeffTable transform(const std::vector<Eigen::MatrixXcd>& samples, int K) {
  const int M = static_cast<int>(samples.size());
  const int r = static_cast<int>(samples.front().rows());
  CoeffTable table;
  table.r = r;
  table.K = K;
  table.fft_size = M;
  table.coeffs.assign(2 * K + 1, Eigen::MatrixXcd::Zero(r, r));

  Eigen::FFT<double> fft;
  std::vector<Complex> in(M), out(M);
  std::vector<double> energy(M, 0.0);  // per-frequency squared Frobenius mass
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      for (int j = 0; j < M; ++j) in[j] = samples[j](a, b);
      fft.fwd(out, in);
      for (int f = 0; f < M; ++f) energy[f] += std::norm(out[f]) / (double(M) * M);
      for (int k = -K; k <= K; ++k) {
        const int f = k >= 0 ? k : M + k;
        const Complex twiddle = std::polar(1.0, -kPi * k / M);
        table.coeffs[k + K](a, b) = twiddle * out[f] / static_cast<double>(M);
      }
    }
  }

  // Aliasing residual: energy fraction of the last octave |k| in (M/4, M/2].
  double tail = 0.0, total = 0.0;
  for (int f = 0; f < M; ++f) {
    const int k = f <= M / 2 ? f : f - M;  // signed frequency
    total += energy[f];
    if (std::abs(k) > M / 4) tail += energy[f];
  }
  table.aliasing_residual = total > 0.0 ? std::sqrt(tail / total) : 0.0;

  // Winding of det around the circle: sum of principal steps of the closed
  // sample loop; an exact multiple of 2pi up to rounding.
  std::vector<Complex> dets(M);
  for (int j = 0; j < M; ++j) {
    dets[j] = r == 1 ? samples[j](0, 0)
                     : Eigen::PartialPivLU<Eigen::MatrixXcd>(samples[j]).determinant();
  }
  double minmod = std::abs(dets[0]), maxmod = minmod;
  double total_step = 0.0, max_step = 0.0;
  for (int j = 0; j < M; ++j) {
    const double mod = std::abs(dets[j]);
    minmod = std::min(minmod, mod);
    maxmod = std::max(maxmod, mod);
    const Complex next = dets[(j + 1) % M];
    if (mod > 0.0 && std::abs(next) > 0.0) {
      const double step = std::arg(next / dets[j]);
      total_step += step;
      max_step = std::max(max_step, std::abs(step));
    }
  }
  table.min_det_modulus = minmod;
  table.max_det_modulus = maxmod;
  table.det_winding_raw = total_step / (2.0 * kPi);
  table.det_winding_max_step = max_step;
  return table;
}

}  // namespace

CoeffTable fourier_coeffs(const symbolkit::SymbolSpec& sym, int K, int fft_size) {
  if (K < 1) throw std::invalid_argument("fourier_coeffs: K must be >= 1");
  if (!power_of_two(fft_size) || fft_size < 8 * K)
    throw std::invalid_argument("fourier_coeffs: fft_size must be a power of two >= 8K");
  std::vector<Eigen::MatrixXcd> samples;
  samples.reserve(fft_size);
  for (int j = 0; j < fft_size; ++j) {
    const double theta = -kPi + (j + 0.5) * (2.0 * kPi / fft_size);
    samples.push_back(sym.eval(std::tan(0.5 * theta)));
  }
  return transform(samples, K);
}

CoeffTable fourier_coeffs_from_samples(const std::vector<Eigen::MatrixXcd>& samples,
                                       int K) {
  if (samples.empty()) throw std::invalid_argument("fourier_coeffs_from_samples: empty");
  const int M = static_cast<int>(samples.size());
  if (!power_of_two(M) || M < 8 * K)
    throw std::invalid_argument(
        "fourier_coeffs_from_samples: sample count must be a power of two >= 8K");
  return transform(samples, K);
}

Eigen::MatrixXcd toeplitz_section(const CoeffTable& coeffs, int n) {
  if (n < 1 || n > coeffs.K)
    throw std::invalid_argument("toeplitz_section: need 1 <= n <= K");
  const int r = coeffs.r;
  Eigen::MatrixXcd T(n * r, n * r);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      T.block(j * r, l * r, r, r) = coeffs.at(j - l);
  return T;
}

SvdReport svd_report(const Eigen::MatrixXcd& section, double threshold) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(section);
  SvdReport rep;
  const auto& sv = svd.singularValues();
  rep.singular_values.assign(sv.data(), sv.data() + sv.size());
  rep.sigma_max = rep.singular_values.front();
  rep.sigma_min = rep.singular_values.back();
  rep.threshold = threshold > 0.0 ? threshold : 1e-6 * std::max(rep.sigma_max, 1e-300);

  auto count_below = [&](double t) {
    return static_cast<int>(std::count_if(rep.singular_values.begin(),
                                          rep.singular_values.end(),
                                          [t](double s) { return s < t; }));
  };
  rep.kernel_dim = count_below(rep.threshold);
  rep.cokernel_dim = rep.kernel_dim;  // square truncation: same spectrum
  rep.threshold_stable = count_below(rep.threshold / 10.0) == rep.kernel_dim &&
                         count_below(rep.threshold * 10.0) == rep.kernel_dim;
  return rep;
}

IndexEstimate index_estimate(const CoeffTable& coeffs, const std::vector<int>& n_list,
                             double aliasing_tol) {
  if (coeffs.aliasing_residual > aliasing_tol)
    throw OracleInapplicable("aliasing residual " +
                             std::to_string(coeffs.aliasing_residual) +
                             " exceeds tolerance " + std::to_string(aliasing_tol) +
                             " (symbol has no limits at +-infinity?)");
  if (!(coeffs.min_det_modulus > 0.0))
    throw OracleInapplicable("det of the pulled-back symbol vanishes on the grid");
  if (coeffs.det_winding_max_step >= kPi / 2.0)
    throw OracleInapplicable("circle winding under-resolved (max step >= pi/2)");

  IndexEstimate est;
  est.winding_raw = coeffs.det_winding_raw;
  const int m = static_cast<int>(std::lround(est.winding_raw));
  const double rounding = std::abs(est.winding_raw - m);
  if (rounding > 0.05)
    throw OracleInapplicable("circle winding " + std::to_string(est.winding_raw) +
                             " is not close to an integer");
  est.index = -m;
  est.route = "negated circle winding of det of the pulled-back symbol";
  est.n_list = n_list;

  // Cross-check: sections of G carry |m| near-zero singular values, and the
  // coefficient-shifted symbol w^{-m} G must have trivial numerical kernels.
  bool shift_ok = true;
  bool dims_stable = true;
  int prev_dim = -1;
  for (int n : n_list) {
    if (n > coeffs.K || n + std::abs(m) > coeffs.K) continue;
    est.kernel_dims.push_back(svd_report(toeplitz_section(coeffs, n)).kernel_dim);

    CoeffTable shifted = coeffs;
    for (int k = -coeffs.K; k <= coeffs.K; ++k) {
      const int src = k + m;
      shifted.coeffs[k + coeffs.K] = (src >= -coeffs.K && src <= coeffs.K)
                                         ? coeffs.at(src)
                                         : Eigen::MatrixXcd::Zero(coeffs.r, coeffs.r);
    }
    const int sdim = svd_report(toeplitz_section(shifted, n)).kernel_dim;
    est.shifted_kernel_dims.push_back(sdim);
    if (sdim != 0) shift_ok = false;
    if (prev_dim >= 0 && est.kernel_dims.back() != prev_dim) dims_stable = false;
    prev_dim = est.kernel_dims.back();
  }
  est.shift_check_passed = shift_ok && !est.shifted_kernel_dims.empty();
  est.stable = rounding < 0.01 && (coeffs.r > 1 || est.shift_check_passed) && dims_stable;
  return est;
}

std::string to_string(NehariVerdict v) {
  switch (v) {
    case NehariVerdict::LeftInvertible: return "left-invertible (distance < 1 - margin)";
    case NehariVerdict::NearOne: return "inconclusive (distance within margin of 1)";
    case NehariVerdict::Inconclusive: return "inconclusive (aliasing residual too large)";
  }
  return "inconclusive";
}

NehariProbe nehari_distance(const CoeffTable& u_coeffs, const std::vector<int>& n_list,
                            double margin, double aliasing_tol) {
  if (std::abs(u_coeffs.min_det_modulus - 1.0) > 1e-8 ||
      std::abs(u_coeffs.max_det_modulus - 1.0) > 1e-8)
    throw std::invalid_argument("nehari_distance: |det U| must be 1 on the samples");

  NehariProbe probe;
  probe.margin = margin;
  probe.aliasing_residual = u_coeffs.aliasing_residual;
  const int r = u_coeffs.r;
  double prev = 0.0;
  for (int n : n_list) {
    if (2 * n - 1 > u_coeffs.K)
      throw std::invalid_argument("nehari_distance: need K >= 2n-1 for n = " +
                                  std::to_string(n));
    Eigen::MatrixXcd H(n * r, n * r);
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        H.block(j * r, l * r, r, r) = u_coeffs.at(-(j + l + 1));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H);
    const double sigma = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    if (!probe.n.empty() && sigma < prev - 1e-10)
      throw std::logic_error("nehari_distance: Hankel norms must be nondecreasing in n");
    probe.n.push_back(n);
    probe.sigma.push_back(sigma);
    prev = std::max(prev, sigma);
  }
  probe.distance_lower_bound = probe.sigma.empty() ? 0.0 : probe.sigma.back();

  if (u_coeffs.aliasing_residual > aliasing_tol)
    probe.verdict = NehariVerdict::Inconclusive;
  else if (probe.distance_lower_bound < 1.0 - margin)
    probe.verdict = NehariVerdict::LeftInvertible;
  else
    probe.verdict = NehariVerdict::NearOne;
  return probe;
}

PhiProbeResult phi_n_probe(const symbolkit::SymbolSpec& sym, int N, int K,
                           int fft_size, const std::vector<int>& n_list,
                           double margin) {
  if (!sym.scalar()) throw std::invalid_argument("phi_n_probe: scalar symbols only");
  if (N < 0) throw std::invalid_argument("phi_n_probe: N must be >= 0");
  const int n_max = *std::max_element(n_list.begin(), n_list.end());
  if (2 * n_max - 1 + N > K)
    throw std::invalid_argument("phi_n_probe: need K >= 2*max(n_list) - 1 + N");

  // Unimodular part sampled on the circle grid; multiplying by phi^n is a
  // coefficient shift because phi pulls back to the circle coordinate.
  std::vector<Eigen::MatrixXcd> samples;
  samples.reserve(fft_size);
  for (int j = 0; j < fft_size; ++j) {
    const double theta = -kPi + (j + 0.5) * (2.0 * kPi / fft_size);
    const Complex v = sym.det(std::tan(0.5 * theta));
    const double mod = std::abs(v);
    if (!(mod > 0.0))
      throw std::domain_error("phi_n_probe: symbol vanishes on the circle grid");
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = v / mod;
    samples.push_back(m);
  }
  const CoeffTable base = fourier_coeffs_from_samples(samples, K);

  PhiProbeResult result;
  result.aliasing_residual = base.aliasing_residual;
  for (int n = 0; n <= N; ++n) {
    CoeffTable shifted = base;
    for (int k = -K; k <= K; ++k) {
      const int src = k - n;
      shifted.coeffs[k + K] = (src >= -K && src <= K)
                                  ? base.at(src)
                                  : Eigen::MatrixXcd::Zero(1, 1);
    }
    shifted.min_det_modulus = shifted.max_det_modulus = 1.0;  // |phi^n U| = 1
    const NehariProbe probe = nehari_distance(shifted, n_list, margin);
    result.distances.push_back(probe.distance_lower_bound);
    result.verdicts.push_back(probe.verdict);
    if (probe.verdict == NehariVerdict::LeftInvertible && result.success_n < 0)
      result.success_n = n;
  }
  if (result.success_n >= 0)
    result.verdict = "Phi+ consistent (left-invertible at n = " +
                     std::to_string(result.success_n) + ")";
  else
    result.verdict = "no Phi+ certificate up to N = " + std::to_string(N) +
                     " (not a refutation)";
  return result;
}

}  // namespace meanwind::finsec
