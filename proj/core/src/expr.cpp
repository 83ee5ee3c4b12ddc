#include "meanwind/expr.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace meanwind::symbolkit {

namespace {

std::shared_ptr<Expr> node(ExprKind kind) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  return e;
}

}  // namespace

ExprPtr make_constant(Complex c) {
  auto e = node(ExprKind::Constant);
  e->constant = c;
  return e;
}

ExprPtr make_variable() { return node(ExprKind::Variable); }

ExprPtr make_unary(ExprKind kind, ExprPtr arg) {
  auto e = node(kind);
  e->lhs = std::move(arg);
  return e;
}

ExprPtr make_power(ExprPtr base, double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("power exponent must be > 0");
  auto e = node(ExprKind::Power);
  e->lhs = std::move(base);
  e->exponent = alpha;
  return e;
}

ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs, double div_floor) {
  auto e = node(kind);
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  if (kind == ExprKind::Div) {
    if (!(div_floor > 0.0))
      throw std::invalid_argument("division requires a positive denominator floor");
    e->div_floor = div_floor;
  }
  return e;
}

ExprPtr make_blaschke(double a, std::vector<Complex> zeros, ExprPtr arg) {
  if (a < 0.0) throw std::invalid_argument("blaschke: a must be >= 0");
  for (const auto& z : zeros)
    if (!(z.imag() > 0.0))
      throw std::invalid_argument("blaschke: zeros must satisfy Im z > 0");
  auto e = node(ExprKind::Blaschke);
  e->blaschke_a = a;
  e->blaschke_zeros = std::move(zeros);
  e->lhs = std::move(arg);
  return e;
}

Complex eval(const Expr& e, Complex z) {
  switch (e.kind) {
    case ExprKind::Constant: return e.constant;
    case ExprKind::Variable: return z;
    case ExprKind::Abs:      return Complex(std::abs(eval(*e.lhs, z)), 0.0);
    case ExprKind::Sign: {
      const double re = eval(*e.lhs, z).real();
      return Complex(re > 0.0 ? 1.0 : (re < 0.0 ? -1.0 : 0.0), 0.0);
    }
    case ExprKind::Power: {
      // Integer exponents are genuine complex powers (so phi(x)^3 winds three
      // times); fractional exponents act on the modulus, which keeps the
      // grammar free of branch cuts.
      const double n = std::round(e.exponent);
      const Complex base = eval(*e.lhs, z);
      if (n == e.exponent && n >= 1.0 && n <= 64.0) {
        Complex acc(1.0, 0.0);
        Complex p = base;
        auto k = static_cast<unsigned>(n);
        while (k > 0) {
          if (k & 1u) acc *= p;
          p *= p;
          k >>= 1u;
        }
        return acc;
      }
      return Complex(std::pow(std::abs(base), e.exponent), 0.0);
    }
    case ExprKind::Exp:   return std::exp(eval(*e.lhs, z));
    case ExprKind::Log1p: return std::log(Complex(1.0, 0.0) + eval(*e.lhs, z));
    case ExprKind::Sin:   return std::sin(eval(*e.lhs, z));
    case ExprKind::Cos:   return std::cos(eval(*e.lhs, z));
    case ExprKind::Negate: return -eval(*e.lhs, z);
    case ExprKind::Add: return eval(*e.lhs, z) + eval(*e.rhs, z);
    case ExprKind::Sub: return eval(*e.lhs, z) - eval(*e.rhs, z);
    case ExprKind::Mul: return eval(*e.lhs, z) * eval(*e.rhs, z);
    case ExprKind::Div: return eval(*e.lhs, z) / eval(*e.rhs, z);
    case ExprKind::Phi: {
      const Complex w = eval(*e.lhs, z);
      return (w - Complex(0.0, 1.0)) / (w + Complex(0.0, 1.0));
    }
    case ExprKind::Blaschke: {
      const Complex w = eval(*e.lhs, z);
      Complex out = std::exp(Complex(0.0, e.blaschke_a) * w);
      for (const Complex& zj : e.blaschke_zeros) {
        const Complex zj2p1 = zj * zj + 1.0;
        // the rotation is 0/0 for a zero at i, where none is needed
        const Complex rot =
            std::abs(zj2p1) > 0.0 ? std::abs(zj2p1) / zj2p1 : Complex(1.0, 0.0);
        out *= rot * (w - zj) / (w - std::conj(zj));
      }
      return out;
    }
  }
  return Complex(0.0, 0.0);  // unreachable
}

ValueAndDerivative eval_d(const Expr& e, double x) {
  const Complex I(0.0, 1.0);
  switch (e.kind) {
    case ExprKind::Constant: return {e.constant, 0.0};
    case ExprKind::Variable: return {Complex(x, 0.0), 1.0};
    case ExprKind::Abs: {
      const auto a = eval_d(*e.lhs, x);
      const double m = std::abs(a.value);
      const double dm = m > 0.0 ? (std::conj(a.value) * a.derivative).real() / m : 0.0;
      return {Complex(m, 0.0), Complex(dm, 0.0)};
    }
    case ExprKind::Sign: {
      const auto a = eval_d(*e.lhs, x);
      const double re = a.value.real();
      return {Complex(re > 0.0 ? 1.0 : (re < 0.0 ? -1.0 : 0.0), 0.0), 0.0};
    }
    case ExprKind::Power: {
      const auto a = eval_d(*e.lhs, x);
      const double n = std::round(e.exponent);
      if (n == e.exponent && n >= 1.0 && n <= 64.0) {
        Complex p(1.0, 0.0);
        for (int k = 1; k < static_cast<int>(n); ++k) p *= a.value;
        return {p * a.value, e.exponent * p * a.derivative};
      }
      const double m = std::abs(a.value);
      const double dm = m > 0.0 ? (std::conj(a.value) * a.derivative).real() / m : 0.0;
      const double v = std::pow(m, e.exponent);
      const double dv = m > 0.0 ? e.exponent * std::pow(m, e.exponent - 1.0) * dm : 0.0;
      return {Complex(v, 0.0), Complex(dv, 0.0)};
    }
    case ExprKind::Exp: {
      const auto a = eval_d(*e.lhs, x);
      const Complex v = std::exp(a.value);
      return {v, v * a.derivative};
    }
    case ExprKind::Log1p: {
      const auto a = eval_d(*e.lhs, x);
      const Complex w = Complex(1.0, 0.0) + a.value;
      return {std::log(w), a.derivative / w};
    }
    case ExprKind::Sin: {
      const auto a = eval_d(*e.lhs, x);
      return {std::sin(a.value), std::cos(a.value) * a.derivative};
    }
    case ExprKind::Cos: {
      const auto a = eval_d(*e.lhs, x);
      return {std::cos(a.value), -std::sin(a.value) * a.derivative};
    }
    case ExprKind::Negate: {
      const auto a = eval_d(*e.lhs, x);
      return {-a.value, -a.derivative};
    }
    case ExprKind::Add: {
      const auto a = eval_d(*e.lhs, x), b = eval_d(*e.rhs, x);
      return {a.value + b.value, a.derivative + b.derivative};
    }
    case ExprKind::Sub: {
      const auto a = eval_d(*e.lhs, x), b = eval_d(*e.rhs, x);
      return {a.value - b.value, a.derivative - b.derivative};
    }
    case ExprKind::Mul: {
      const auto a = eval_d(*e.lhs, x), b = eval_d(*e.rhs, x);
      return {a.value * b.value, a.derivative * b.value + a.value * b.derivative};
    }
    case ExprKind::Div: {
      const auto a = eval_d(*e.lhs, x), b = eval_d(*e.rhs, x);
      return {a.value / b.value,
              (a.derivative * b.value - a.value * b.derivative) / (b.value * b.value)};
    }
    case ExprKind::Phi: {
      const auto a = eval_d(*e.lhs, x);
      const Complex den = a.value + I;
      return {(a.value - I) / den, 2.0 * I * a.derivative / (den * den)};
    }
    case ExprKind::Blaschke: {
      const auto a = eval_d(*e.lhs, x);
      Complex v = std::exp(Complex(0.0, e.blaschke_a) * a.value);
      Complex logd = Complex(0.0, e.blaschke_a);  // d/dw of log
      for (const Complex& zj : e.blaschke_zeros) {
        const Complex zj2p1 = zj * zj + 1.0;
        const Complex rot =
            std::abs(zj2p1) > 0.0 ? std::abs(zj2p1) / zj2p1 : Complex(1.0, 0.0);
        v *= rot * (a.value - zj) / (a.value - std::conj(zj));
        logd += 1.0 / (a.value - zj) - 1.0 / (a.value - std::conj(zj));
      }
      return {v, v * logd * a.derivative};
    }
  }
  return {Complex(0.0, 0.0), Complex(0.0, 0.0)};
}

namespace {

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Single constant token or a parenthesized re+im form; the parser folds the
// latter back into one Constant node.
std::string fmt_constant(Complex c) {
  if (c.imag() == 0.0) {
    if (c.real() < 0.0) return "(" + fmt_real(c.real()) + ")";
    return fmt_real(c.real());
  }
  if (c.real() == 0.0) {
    if (c.imag() == 1.0) return "i";
    if (c.imag() < 0.0) return "(" + fmt_real(c.imag()) + "i)";
    return fmt_real(c.imag()) + "i";
  }
  std::string im = c.imag() < 0.0 ? "-" + fmt_real(-c.imag()) : "+" + fmt_real(c.imag());
  return "(" + fmt_real(c.real()) + im + "i)";
}

// Precedence: Add/Sub 1, Mul/Div 2, Negate 3, Power 4, atoms 5.
int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Negate: return 3;
    case ExprKind::Power: return 4;
    default: return 5;
  }
}

void print_rec(const Expr& e, std::string& out);

void print_child(const Expr& child, int parent_prec, bool is_rhs, std::string& out) {
  const int cp = precedence(child);
  const bool parens = cp < parent_prec || (cp == parent_prec && is_rhs);
  if (parens) out += '(';
  print_rec(child, out);
  if (parens) out += ')';
}

void print_rec(const Expr& e, std::string& out) {
  switch (e.kind) {
    case ExprKind::Constant: out += fmt_constant(e.constant); return;
    case ExprKind::Variable: out += 'x'; return;
    case ExprKind::Abs:   out += "abs(";   print_rec(*e.lhs, out); out += ')'; return;
    case ExprKind::Sign:  out += "sign(";  print_rec(*e.lhs, out); out += ')'; return;
    case ExprKind::Exp:   out += "exp(";   print_rec(*e.lhs, out); out += ')'; return;
    case ExprKind::Log1p: out += "log1p("; print_rec(*e.lhs, out); out += ')'; return;
    case ExprKind::Sin:   out += "sin(";   print_rec(*e.lhs, out); out += ')'; return;
    case ExprKind::Cos:   out += "cos(";   print_rec(*e.lhs, out); out += ')'; return;
    case ExprKind::Phi:   out += "phi(";   print_rec(*e.lhs, out); out += ')'; return;
    case ExprKind::Power:
      print_child(*e.lhs, precedence(e) + 1, false, out);
      out += '^';
      out += fmt_real(e.exponent);
      return;
    case ExprKind::Negate:
      out += '-';
      print_child(*e.lhs, precedence(e), false, out);
      return;
    case ExprKind::Add:
      print_child(*e.lhs, 1, false, out);
      out += '+';
      print_child(*e.rhs, 1, true, out);
      return;
    case ExprKind::Sub:
      print_child(*e.lhs, 1, false, out);
      out += '-';
      print_child(*e.rhs, 1, true, out);
      return;
    case ExprKind::Mul:
      print_child(*e.lhs, 2, false, out);
      out += '*';
      print_child(*e.rhs, 2, true, out);
      return;
    case ExprKind::Div:
      if (e.div_floor != kDefaultDenominatorFloor) {
        out += "div(";
        print_rec(*e.lhs, out);
        out += ',';
        print_rec(*e.rhs, out);
        out += ',';
        out += fmt_real(e.div_floor);
        out += ')';
      } else {
        print_child(*e.lhs, 2, false, out);
        out += '/';
        print_child(*e.rhs, 2, true, out);
      }
      return;
    case ExprKind::Blaschke:
      out += "blaschke(";
      out += fmt_real(e.blaschke_a);
      for (const Complex& z : e.blaschke_zeros) {
        out += ',';
        out += fmt_constant(z);
      }
      out += ';';
      print_rec(*e.lhs, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_rec(e, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Constant: return a.constant == b.constant;
    case ExprKind::Variable: return true;
    case ExprKind::Power:
      if (a.exponent != b.exponent) return false;
      break;
    case ExprKind::Div:
      if (a.div_floor != b.div_floor) return false;
      break;
    case ExprKind::Blaschke:
      if (a.blaschke_a != b.blaschke_a || a.blaschke_zeros != b.blaschke_zeros)
        return false;
      break;
    default: break;
  }
  if ((a.lhs == nullptr) != (b.lhs == nullptr)) return false;
  if ((a.rhs == nullptr) != (b.rhs == nullptr)) return false;
  if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

}  // namespace meanwind::symbolkit
