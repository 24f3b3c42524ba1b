#include "omc/link_design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "omc/detail/quadrature.hpp"
#include "omc/specfun.hpp"

namespace omc::link_design {

namespace {

constexpr double kEndpointMargin = 1e-9;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be positive and finite");
  }
}

void require_nonneg(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be nonnegative and finite");
  }
}

void validate(const DesignThresholds& thr) {
  require_positive(thr.eta, "thresholds: eta");
  require_positive(thr.gamma_th, "thresholds: gamma_th");
  if (!(thr.xi > 0.0 && thr.xi < 1.0)) {
    throw std::domain_error("thresholds: xi must lie in (0, 1)");
  }
}

double sigma_sq_sum(double sigma_p, double sigma_t) {
  require_nonneg(sigma_p, "sigma_p");
  require_nonneg(sigma_t, "sigma_t");
  return sigma_p * sigma_p + sigma_t * sigma_t;
}

}  // namespace

Interval Interval::open(double lo, double hi) {
  Interval iv;
  iv.lo = lo;
  iv.hi = hi;
  iv.is_empty = false;
  return iv;
}

bool Interval::contains(double v) const {
  if (is_empty) return false;
  return v - lo > kEndpointMargin && hi - v > kEndpointMargin;
}

Interval intersect(const Interval& a, const Interval& b) {
  if (a.is_empty || b.is_empty) return Interval::empty();
  const double lo = std::max(a.lo, b.lo);
  const double hi = std::min(a.hi, b.hi);
  // Open intervals share no point when the bounds merely touch.
  if (!(hi > lo)) return Interval::empty();
  return Interval::open(lo, hi);
}

double average_power(double aA, double sigma_p, double sigma_t, double w_z) {
  require_positive(aA, "aA");
  require_positive(w_z, "w_z");
  const double s2 = sigma_sq_sum(sigma_p, sigma_t);
  return 2.0 * aA / (std::numbers::pi * (4.0 * s2 + w_z * w_z));
}

Interval constraint_average_power(double aA, double sigma_p, double sigma_t,
                                  const DesignThresholds& thr) {
  require_positive(aA, "aA");
  validate(thr);
  const double s2 = sigma_sq_sum(sigma_p, sigma_t);
  const double radicand = 2.0 * aA / (std::numbers::pi * thr.eta) - 4.0 * s2;
  if (!(radicand > 0.0)) return Interval::empty();
  return Interval::open(0.0, std::sqrt(radicand));
}

double max_feasible_width(double aA, double gamma_th) {
  require_positive(aA, "aA");
  require_positive(gamma_th, "gamma_th");
  return std::sqrt(2.0 * aA / (std::numbers::pi * gamma_th));
}

double feasible_radius(double aA, double gamma_th, double w_z) {
  require_positive(w_z, "w_z");
  const double b = max_feasible_width(aA, gamma_th);
  double half_log = 0.5 * std::log((b * b) / (w_z * w_z));
  if (half_log < 0.0) {
    // Rounding at the exact boundary can push the log a few ulp negative.
    if (half_log > -1e-12) {
      half_log = 0.0;
    } else {
      throw std::domain_error(
          "feasible_radius: spot wider than the maximum feasible width never exceeds gamma_th");
    }
  }
  return w_z * std::sqrt(half_log);
}

double outage_probability(double r, double sigma_t, double w_z, double aA, double gamma_th) {
  require_nonneg(r, "r");
  require_positive(sigma_t, "sigma_t");
  const double r_out = feasible_radius(aA, gamma_th, w_z);
  return specfun::marcum_q1(r / sigma_t, r_out / sigma_t);
}

double expected_outage(double w_z, double aA, double gamma_th, double sigma_t,
                       double sigma_p) {
  require_positive(w_z, "w_z");
  const double s2 = sigma_sq_sum(sigma_p, sigma_t);
  require_positive(s2, "sigma_t^2 + sigma_p^2");
  const double b = max_feasible_width(aA, gamma_th);
  const double log_term = std::log((w_z * w_z) / (b * b));
  if (log_term > 1e-12) {
    throw std::domain_error(
        "expected_outage: spot wider than the maximum feasible width is always in outage");
  }
  return std::exp(w_z * w_z / (4.0 * s2) * std::min(log_term, 0.0));
}

double expected_outage_numeric(double w_z, double aA, double gamma_th, double sigma_t,
                               double sigma_p) {
  require_positive(w_z, "w_z");
  require_positive(sigma_t, "sigma_t");
  require_nonneg(sigma_p, "sigma_p");
  const double r_out = feasible_radius(aA, gamma_th, w_z);
  if (sigma_p == 0.0) {
    // No pointing spread: the Rayleigh average degenerates to r = 0.
    return specfun::marcum_q1(0.0, r_out / sigma_t);
  }
  const double sp2 = sigma_p * sigma_p;
  const auto integrand = [&](double r) {
    return (r / sp2) * std::exp(-r * r / (2.0 * sp2)) *
           specfun::marcum_q1(r / sigma_t, r_out / sigma_t);
  };
  // The Rayleigh tail beyond 8.5 sigma carries less than 3e-16 mass.
  return detail::integrate(integrand, 0.0, 8.5 * sigma_p, 1e-9);
}

double optimal_beam_width(double aA, double gamma_th) {
  require_positive(aA, "aA");
  require_positive(gamma_th, "gamma_th");
  return std::sqrt(2.0 * aA / (std::numbers::pi * std::numbers::e * gamma_th));
}

Interval constraint_outage(double aA, double gamma_th, double sigma_t, double sigma_p,
                           double xi) {
  require_positive(aA, "aA");
  require_positive(gamma_th, "gamma_th");
  if (!(xi > 0.0 && xi < 1.0)) {
    throw std::domain_error("xi must lie in (0, 1)");
  }
  const double s2 = sigma_sq_sum(sigma_p, sigma_t);
  require_positive(s2, "sigma_t^2 + sigma_p^2");
  double u = (2.0 * std::numbers::pi * gamma_th * s2 / aA) * std::log(xi);
  // Branch point test before any Lambert W call: below -1/e the ceiling xi
  // is unattainable even at the optimal width. The slack absorbs rounding
  // when xi sits algebraically at the attainable minimum.
  if (u < specfun::kNegInvE - 1e-12) return Interval::empty();
  u = std::max(u, specfun::kNegInvE);
  const double b = max_feasible_width(aA, gamma_th);
  const double lo = b * std::exp(0.5 * specfun::lambert_w(u, specfun::LambertBranch::NegativeOne));
  const double hi = b * std::exp(0.5 * specfun::lambert_w(u, specfun::LambertBranch::Principal));
  // Returned directly, not via intersect: at the branch point the interval
  // legitimately degenerates to the optimal width and callers inspect the
  // coincident endpoints.
  return Interval::open(lo, hi);
}

DesignRule design_rule(double aA, double sigma_t, double sigma_p,
                       const DesignThresholds& thr, double z) {
  require_positive(z, "z");
  const Interval c1 = constraint_average_power(aA, sigma_p, sigma_t, thr);
  const Interval c2 = constraint_outage(aA, thr.gamma_th, sigma_t, sigma_p, thr.xi);
  DesignRule rule;
  rule.beam_width = intersect(c1, c2);
  if (!rule.beam_width.is_empty) {
    rule.divergence = Interval::open(rule.beam_width.lo / z, rule.beam_width.hi / z);
  }
  return rule;
}

}  // namespace omc::link_design
