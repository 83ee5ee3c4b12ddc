#pragma once

#include <cmath>
#include <complex>

namespace meanwind::quadrature {

// Adaptive Simpson with absolute-error control. Works for double and
// std::complex<double> integrands.
template <class F, class R = decltype(std::declval<F>()(0.0))>
R adaptive_simpson(const F& f, double a, double b, double tol, int max_depth = 48) {
  struct Impl {
    const F& f;
    R recurse(double a, double m, double b, R fa, R fm, R fb, R whole, double tol,
              int depth) const {
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const R flm = f(lm), frm = f(rm);
      const R left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const R right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const R delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
      return recurse(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             recurse(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  } impl{f};
  const double m = 0.5 * (a + b);
  const R fa = f(a), fm = f(m), fb = f(b);
  const R whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return impl.recurse(a, m, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace meanwind::quadrature
