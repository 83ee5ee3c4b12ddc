#include "meanwind/symbol.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace meanwind::symbolkit {

std::string to_string(SymbolClass c) {
  switch (c) {
    case SymbolClass::Custom: return "custom";
    case SymbolClass::Whirl: return "whirl";
    case SymbolClass::AlmostPeriodic: return "almost-periodic";
    case SymbolClass::Sap: return "SAP";
    case SymbolClass::Rational: return "rational";
  }
  return "custom";
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

SymbolSpec make_symbol(int size, std::vector<ExprPtr> entries, SymbolClass tag) {
  if (size < 1) throw std::invalid_argument("make_symbol: size must be >= 1");
  if (static_cast<int>(entries.size()) != size * size)
    throw std::invalid_argument("make_symbol: entry count must be size*size");
  SymbolSpec sym;
  sym.size = size;
  sym.entries = std::move(entries);
  sym.tag = tag;
  if (size == 1) {
    sym.text = print(*sym.entries[0]);
  } else {
    sym.text = "[";
    for (int r = 0; r < size; ++r) {
      sym.text += r == 0 ? "[" : ",[";
      for (int c = 0; c < size; ++c) {
        if (c > 0) sym.text += ',';
        sym.text += print(sym.entry(r, c));
      }
      sym.text += ']';
    }
    sym.text += ']';
  }
  sym.digest = fnv1a64(sym.text);
  return sym;
}

Eigen::MatrixXcd SymbolSpec::eval_at(Complex z) const {
  Eigen::MatrixXcd m(size, size);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) m(r, c) = symbolkit::eval(entry(r, c), z);
  return m;
}

Eigen::MatrixXcd SymbolSpec::eval(double x) const { return eval_at(Complex(x, 0.0)); }

Complex SymbolSpec::det(double x) const {
  if (size == 1) return symbolkit::eval(entry(0, 0), Complex(x, 0.0));
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(eval(x)).determinant();
}

SymbolSpec::DetValue SymbolSpec::det_with_slope(double x) const {
  if (size == 1) {
    const auto vd = eval_d(entry(0, 0), x);
    const double mod2 = std::norm(vd.value);
    const double slope =
        mod2 > 0.0 ? std::abs((vd.derivative / vd.value).imag()) : 0.0;
    return {vd.value, slope};
  }
  Eigen::MatrixXcd g(size, size), gd(size, size);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      const auto vd = eval_d(entry(r, c), x);
      g(r, c) = vd.value;
      gd(r, c) = vd.derivative;
    }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(g);
  const Complex det = lu.determinant();
  if (!(std::abs(det) > 0.0)) return {det, 0.0};
  // (arg det)' = Im(det'/det) = Im tr(G^{-1} G')
  const Complex trace = lu.solve(gd).trace();
  return {det, std::abs(trace.imag())};
}

double cayley_theta(double x) { return 2.0 * std::atan(x); }

Eigen::MatrixXcd cayley_pullback(const SymbolSpec& sym, double theta) {
  const double pi = std::numbers::pi;
  if (!(theta > -pi && theta < pi))
    throw std::domain_error("cayley_pullback: theta must lie in (-pi, pi)");
  return sym.eval(std::tan(0.5 * theta));
}

MinDetResult min_det_modulus(const SymbolSpec& sym, const SampleGrid& grid) {
  MinDetResult res;
  res.value = std::numeric_limits<double>::infinity();
  for (double x : grid.nodes) {
    const double m = std::abs(sym.det(x));
    if (m < res.value) {
      res.value = m;
      res.argmin_x = x;
    }
  }
  return res;
}

Complex inner_eval(double a, Complex unimodular_constant,
                   const std::vector<Complex>& zeros, Complex z) {
  if (a < 0.0) throw std::domain_error("inner_eval: a must be >= 0");
  if (std::abs(std::abs(unimodular_constant) - 1.0) > 1e-12)
    throw std::domain_error("inner_eval: |C| must equal 1");
  for (const Complex& zj : zeros)
    if (!(zj.imag() > 0.0))
      throw std::domain_error("inner_eval: zeros must satisfy Im z > 0");

  Complex out = unimodular_constant * std::exp(Complex(0.0, a) * z);
  for (const Complex& zj : zeros) {
    const Complex pole = std::conj(zj);
    if (std::abs(z - pole) < 1e-300)
      throw std::domain_error("inner_eval: evaluation point collides with a pole");
    const Complex zj2p1 = zj * zj + 1.0;
    const Complex rot =
        std::abs(zj2p1) > 0.0 ? std::abs(zj2p1) / zj2p1 : Complex(1.0, 0.0);
    out *= rot * (z - zj) / (z - pole);
  }
  return out;
}

}  // namespace meanwind::symbolkit
