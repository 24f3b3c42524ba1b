#pragma once

// Special functions required by the link design math: the first order
// Marcum Q function and the two real branches of the Lambert W function.
// Both are self contained; no external special function library is used.

namespace omc::specfun {

/// Branch selector for lambert_w.
/// Principal is W0, with values >= -1; NegativeOne is W-1, with values <= -1.
/// The branches meet at x = -1/e where both equal -1.
enum class LambertBranch { Principal, NegativeOne };

/// Nearest double to -1/e, the lower edge of both Lambert W branch domains.
inline constexpr double kNegInvE = -0.36787944117144233;

/// First order Marcum Q function Q1(a, b): the probability that a
/// noncentral chi distributed radius with noncentrality a exceeds b.
///
/// Domain: a >= 0, b >= 0, both finite. The result lies in [0, 1] and the
/// absolute error stays below 1e-10 for a, b in [0, 20].
/// Throws std::domain_error on negative or non finite input.
double marcum_q1(double a, double b);

/// Real branch of the Lambert W function: the solution w of w * exp(w) = x.
///
/// Domain: x >= -1/e for Principal; -1/e <= x < 0 for NegativeOne.
/// The residual |w * exp(w) - x| stays below 1e-12 * max(1, |x|).
/// Throws std::domain_error when x lies outside the branch domain.
double lambert_w(double x, LambertBranch branch);

}  // namespace omc::specfun
