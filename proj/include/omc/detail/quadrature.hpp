#pragma once

// Adaptive Simpson quadrature used by the numeric companions of the closed
// form link metrics. Internal detail header; not part of the public surface.

#include <cmath>
#include <utility>

namespace omc::detail {

template <class F>
double simpson_recurse(const F& f, double a, double m, double b, double fa, double fm,
                       double fb, double whole, double abs_tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // Standard acceptance test with Richardson correction; the factor 15 comes
  // from the order 4 convergence of composite Simpson.
  if (depth <= 0 || std::abs(delta) <= 15.0 * abs_tol) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, lm, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1) +
         simpson_recurse(f, m, rm, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1);
}

/// Integral of f over [a, b] to absolute tolerance abs_tol.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol, int max_depth = 52) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(std::forward<F>(f), a, m, b, fa, fm, fb, whole, abs_tol, max_depth);
}

}  // namespace omc::detail
