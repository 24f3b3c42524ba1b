#include "omc/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace omc::specfun {

namespace {

// Series term cap. The canonical series needs roughly x + 10 sqrt(x) terms
// at Poisson mean x; the cap is far above any mean that does not underflow.
constexpr int kMaxSeriesTerms = 100000;

double marcum_q1_series(double a, double b) {
  const double x = 0.5 * a * a;  // Poisson mean of the noncentrality mixture
  const double y = 0.5 * b * b;
  // Q1(a, b) = sum_k pois(k; x) * P(chi2_{2k+2} > b^2), with the chi square
  // survival term itself a partial Poisson sum in y. Both factors follow
  // one-step recurrences in k.
  double pois = std::exp(-x);        // e^{-x} x^k / k!   at k = 0
  double inner_term = std::exp(-y);  // e^{-y} y^j / j!   at j = 0
  double inner = inner_term;         // sum_{j<=k} of inner_term
  double cum = pois;                 // Poisson mass consumed so far
  double q = pois * inner;
  // Truncation: the remaining sum is bounded by the remaining Poisson mass
  // (inner <= 1), so stopping at cumulative mass 1 - 1e-15 bounds the
  // truncation error by 1e-15.
  for (int k = 1; cum < 1.0 - 1e-15 && k < kMaxSeriesTerms; ++k) {
    pois *= x / k;
    inner_term *= y / k;
    inner += inner_term;
    q += pois * inner;
    cum += pois;
  }
  return std::clamp(q, 0.0, 1.0);
}

// f(w) = w e^w - x evaluated so that very negative w underflows to -x
// instead of producing NaN.
double horner_residual(double w, double x) { return w * std::exp(w) - x; }

// One bisection pass on a bracket with f(lo) and f(hi) of opposite sign.
double bisect(double x, double lo, double hi) {
  double flo = horner_residual(lo, x);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fmid = horner_residual(mid, x);
    if ((fmid <= 0.0) == (flo <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double halley(double x, double w) {
  for (int it = 0; it < 60; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    // Halley update for f(w) = w e^w - x.
    const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double next = w - f / denom;
    if (!std::isfinite(next)) break;
    const bool converged = std::abs(next - w) <= 1e-16 * (1.0 + std::abs(next));
    w = next;
    if (converged) break;
  }
  return w;
}

bool residual_ok(double w, double x) {
  return std::abs(horner_residual(w, x)) <= 1e-12 * std::max(1.0, std::abs(x));
}

double lambert_w0(double x) {
  if (x == 0.0) return 0.0;
  // Initial guess by region; Halley contracts from any of these.
  double w;
  const double p2 = 2.0 * (1.0 + std::numbers::e * x);
  if (p2 <= 0.0) return -1.0;  // at the branch point within rounding
  const double p = std::sqrt(p2);
  if (p < 0.5) {
    // Branch point expansion in p = sqrt(2 (1 + e x)).
    w = -1.0 + p - p * p / 3.0 + (11.0 / 72.0) * p * p * p;
  } else if (x < std::numbers::e) {
    w = 0.5 * std::log1p(x > 0.0 ? x : 0.0) + (x < 0.0 ? x : 0.0);
  } else {
    const double l1 = std::log(x);
    w = l1 - std::log(l1);
  }
  w = halley(x, w);
  if (!residual_ok(w, x) || w < -1.0 || !std::isfinite(w)) {
    // Monotone on [-1, inf): bracket upward from the branch point.
    double hi = std::max(1.0, std::isfinite(w) ? w + 1.0 : 1.0);
    while (horner_residual(hi, x) < 0.0) hi *= 2.0;
    w = bisect(x, -1.0, hi);
  }
  return std::max(w, -1.0);
}

double lambert_wm1(double x) {
  // Domain here is (-1/e, 0).
  double w;
  const double p2 = 2.0 * (1.0 + std::numbers::e * x);
  if (p2 <= 0.0) return -1.0;
  const double p = std::sqrt(p2);
  if (p < 0.5) {
    w = -1.0 - p - p * p / 3.0 - (11.0 / 72.0) * p * p * p;
  } else {
    // Asymptotic form toward x -> 0-.
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  }
  w = halley(x, w);
  if (!residual_ok(w, x) || w > -1.0 || !std::isfinite(w)) {
    // Monotone decreasing on (-inf, -1]: residual is negative at -1 and
    // approaches -x > 0 far to the left.
    double lo = std::min(-2.0, std::isfinite(w) ? w - 1.0 : -2.0);
    while (horner_residual(lo, x) <= 0.0) lo *= 2.0;
    w = bisect(x, lo, -1.0);
  }
  return std::min(w, -1.0);
}

}  // namespace

double marcum_q1(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0) {
    throw std::domain_error("marcum_q1: arguments must be finite and nonnegative");
  }
  if (b == 0.0) return 1.0;
  // The series starts from exp(-a^2/2) and exp(-b^2/2); far outside the
  // contract domain those underflow, and the Gaussian tail limit takes over.
  if (0.5 * a * a > 700.0 || 0.5 * b * b > 700.0) {
    return std::clamp(0.5 * std::erfc((b - a) / std::numbers::sqrt2), 0.0, 1.0);
  }
  return marcum_q1_series(a, b);
}

double lambert_w(double x, LambertBranch branch) {
  if (!std::isfinite(x)) {
    throw std::domain_error("lambert_w: argument must be finite");
  }
  if (x < kNegInvE) {
    // Values a hair below -1/e arise from rounding in callers that are
    // algebraically at the branch point; treat them as the branch point.
    if (kNegInvE - x <= 1e-12) return -1.0;
    throw std::domain_error("lambert_w: argument below -1/e has no real value");
  }
  if (branch == LambertBranch::NegativeOne && x >= 0.0) {
    throw std::domain_error("lambert_w: NegativeOne branch requires -1/e <= x < 0");
  }
  if (x == kNegInvE) return -1.0;
  return branch == LambertBranch::Principal ? lambert_w0(x) : lambert_wm1(x);
}

}  // namespace omc::specfun
