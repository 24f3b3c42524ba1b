#pragma once

// Closed form link budget: average received power, outage probability,
// expected outage, and the two spot size constraints whose intersection is
// the design rule. All widths are meters, powers watts, and the product aA
// (power coefficient times receiving area) carries watt square meters.

#include "omc/types.hpp"

namespace omc::link_design {

/// The three design thresholds.
struct DesignThresholds {
  double eta = 0.0;       ///< average power floor, watts; > 0
  double gamma_th = 0.0;  ///< feasible region power threshold, watts; > 0
  double xi = 0.0;        ///< outage probability ceiling, in (0, 1)
};

/// Open interval of feasible beam widths. Infeasibility is a value, not an
/// exception: an empty interval means no width satisfies the constraint.
/// Constraints are strict inequalities, so membership is open, and a value
/// within 1e-9 of an endpoint counts as outside.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool is_empty = true;

  static Interval empty() { return {}; }
  static Interval open(double lo, double hi);

  /// Open membership with the 1e-9 endpoint margin.
  bool contains(double v) const;

  double width() const { return is_empty ? 0.0 : hi - lo; }
};

/// Intersection under open interval semantics; a single shared point is
/// empty.
Interval intersect(const Interval& a, const Interval& b);

/// The design rule output: the feasible beam width range and the same range
/// expressed as a divergence angle at the link distance.
struct DesignRule {
  Interval beam_width;  ///< meters
  Interval divergence;  ///< radians
};

/// Average received power under target mobility and pointing error:
/// 2 aA / (pi (4 sigma_p^2 + 4 sigma_t^2 + w_z^2)).
/// Throws std::domain_error on non positive w_z or aA.
double average_power(double aA, double sigma_p, double sigma_t, double w_z);

/// Constraint 1: widths whose average power stays at or above eta. Returns
/// (0, sqrt(2 aA / (pi eta) - 4 (sigma_p^2 + sigma_t^2))) when the radicand
/// is positive, the empty interval when even w_z -> 0 cannot meet eta.
Interval constraint_average_power(double aA, double sigma_p, double sigma_t,
                                  const DesignThresholds& thr);

/// Largest width that can still exceed gamma_th anywhere:
/// sqrt(2 aA / (pi gamma_th)).
double max_feasible_width(double aA, double gamma_th);

/// Radius of the feasible region, the disk around the spot center where
/// received power exceeds gamma_th: w_z * sqrt(ln(2 aA / (pi w_z^2
/// gamma_th)) / 2). Zero exactly at w_z = max_feasible_width; throws
/// std::domain_error for wider spots.
double feasible_radius(double aA, double gamma_th, double w_z);

/// Outage probability for a target displaced r from the previously tracked
/// point: Q1(r / sigma_t, r_out / sigma_t). Requires sigma_t > 0 and r >= 0;
/// propagates the feasible_radius domain error.
double outage_probability(double r, double sigma_t, double w_z, double aA, double gamma_th);

/// Expected outage over both target motion and pointing error:
/// exp((w_z^2 / (4 (sigma_t^2 + sigma_p^2))) * ln(pi w_z^2 gamma_th / (2 aA))).
/// Requires 0 < w_z <= max_feasible_width and sigma_t^2 + sigma_p^2 > 0.
double expected_outage(double w_z, double aA, double gamma_th, double sigma_t,
                       double sigma_p);

/// Numeric companion of expected_outage: quadrature of the Rayleigh
/// weighted Marcum Q integral that expected_outage solves in closed form.
/// Agrees with expected_outage to well below 1e-6 absolute; emitted beside
/// the closed form in sweeps as an independent validation series.
double expected_outage_numeric(double w_z, double aA, double gamma_th, double sigma_t,
                               double sigma_p);

/// The width minimizing expected outage: sqrt(2 aA / (pi e gamma_th)).
/// Independent of sigma_t and sigma_p.
double optimal_beam_width(double aA, double gamma_th);

/// Constraint 2: widths whose expected outage stays at or below xi, solved
/// through the two real Lambert W branches. Empty when xi is unattainable
/// even at the optimal width (branch point test u < -1/e); exactly at the
/// branch point the interval degenerates to the optimal width.
Interval constraint_outage(double aA, double gamma_th, double sigma_t, double sigma_p,
                           double xi);

/// Intersection of both constraints, plus the divergence angle range at link
/// distance z. An empty beam width interval signals an infeasible design.
DesignRule design_rule(double aA, double sigma_t, double sigma_p,
                       const DesignThresholds& thr, double z);

}  // namespace omc::link_design
