// Scalar expression trees for matrix symbols on the real line.
//
// The grammar is deliberately closed so that every expression evaluates to a
// finite complex number at every finite real x: powers act on the modulus of
// their base, log1p is spot-checked away from the branch point, and division
// carries a declared lower bound for the denominator modulus.

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace meanwind::symbolkit {

using Complex = std::complex<double>;

enum class ExprKind {
  Constant,  // complex literal (constant subtrees are folded at parse time)
  Variable,  // x
  Abs,       // |e|
  Sign,      // sign(Re e), valued in {-1, 0, +1}
  Power,     // e^n for integer n >= 1 (complex power); |e|^alpha otherwise
  Exp,
  Log1p,     // log(1 + e), principal branch; 1 + e checked nonvanishing on R
  Sin,
  Cos,
  Negate,
  Add,
  Sub,
  Mul,
  Div,       // lhs / rhs with declared denominator floor
  Phi,       // (e - i)/(e + i), the Cayley atom
  Blaschke,  // e^{ia e} * prod_j (|z_j^2+1|/(z_j^2+1)) (e - z_j)/(e - conj z_j)
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  Complex constant{0.0, 0.0};        // Constant
  double exponent = 0.0;             // Power
  double div_floor = 0.0;            // Div: declared denominator floor (> 0)
  double blaschke_a = 0.0;           // Blaschke: exponential rate a >= 0
  std::vector<Complex> blaschke_zeros;
  ExprPtr lhs, rhs;
  int line = 0, col = 0;             // source position for diagnostics
};

// Default declared floor used for plain `/`, `phi(e)` and `log1p` checks.
// An explicit floor can be declared with div(a, b, floor).
inline constexpr double kDefaultDenominatorFloor = 1e-9;

ExprPtr make_constant(Complex c);
ExprPtr make_variable();
ExprPtr make_unary(ExprKind kind, ExprPtr arg);
ExprPtr make_power(ExprPtr base, double alpha);
ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs,
                    double div_floor = kDefaultDenominatorFloor);
ExprPtr make_blaschke(double a, std::vector<Complex> zeros, ExprPtr arg);

// Evaluation is total on R by grammar closure. Complex arguments are meant
// for near-real use only: sign() reads the real part, abs() the modulus.
Complex eval(const Expr& e, Complex z);
inline Complex eval(const Expr& e, double x) { return eval(e, Complex(x, 0.0)); }

struct ValueAndDerivative {
  Complex value;
  Complex derivative;  // d/dx along the real line (a.e. at abs/sign kinks)
};

// Forward-mode derivative through the expression tree; the trace unwrapper
// uses it to bound how far the argument can move across a segment.
ValueAndDerivative eval_d(const Expr& e, double x);

// Canonical text form; parse(print(t)) is structurally equal to t.
std::string print(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace meanwind::symbolkit
