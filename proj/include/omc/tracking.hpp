#pragma once

// The two target position estimators, grid MLE and multilateration least
// squares, plus the theoretical tracking error bound.

#include <array>
#include <optional>
#include <vector>

#include "omc/beam_model.hpp"
#include "omc/stochastic.hpp"
#include "omc/types.hpp"

namespace omc::tracking {

/// The beacon lasers and the shared receiving area of the target.
/// Multilateration needs N >= 3 beams with non collinear centers; the grid
/// MLE works from N >= 1. Collinearity is detected at solve time through the
/// rank of the pairwise difference system.
struct BeaconArray {
  std::vector<beam_model::BeamSpec> beams;
  double area_A = 0.0;  ///< shared receiving area, square meters; > 0
};

/// Measured received powers, same length and order as BeaconArray::beams.
/// Values may be negative: noise can exceed the signal.
struct PowerMeasurements {
  std::vector<double> values;
};

/// Axis aligned search rectangle and scanning step for the grid MLE.
struct GridSearchConfig {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  double step = 0.0;  ///< meters; > 0
};

enum class Method { GridMLE, Multilateration };

/// An estimated target point. log_likelihood is populated by the grid MLE
/// only. clamped_measurements counts measurements the multilateration path
/// had to clamp into the invertible power range; callers surface it in logs.
struct TrackingEstimate {
  Vec2 point;
  Method method = Method::GridMLE;
  std::optional<double> log_likelihood;
  int clamped_measurements = 0;
};

/// Log likelihood of a hypothesis position given the measured powers:
/// sum_i [-(P_i - model_i(hyp))^2 / (2 sigma_n^2)] - N ln(sqrt(2 pi) sigma_n).
/// A monotone transform of the product form likelihood, so the argmax is
/// unchanged while staying finite for any N and sigma_n.
/// Throws std::domain_error when sigma_n <= 0 and std::invalid_argument on a
/// measurement/beam count mismatch.
double log_likelihood(const PowerMeasurements& meas, Vec2 hyp, const BeaconArray& array,
                      const stochastic::NoiseSpec& noise);

/// Exhaustive grid maximization of log_likelihood. Ties break toward the
/// smallest x, then the smallest y. When refine is true the raw grid argmax
/// gets one per-axis parabolic sub-grid refinement; the default is the raw
/// grid point, whose precision is the scanning step.
TrackingEstimate track_mle_grid(const PowerMeasurements& meas, const BeaconArray& array,
                                const stochastic::NoiseSpec& noise,
                                const GridSearchConfig& cfg, bool refine = false);

/// Distance ring radius recovered from one measured power by inverting the
/// spot model: d = w_z sqrt(ln(2 a A / (pi w_z^2 P)) / 2). The measurement
/// is clamped into [max(1e-12, 1e-6 * peak), peak] first so that noise
/// driven values (negative, zero, or above the peak) yield a large or zero
/// but always finite radius; *clamped reports when that happened.
double estimate_distance(double p_meas, const beam_model::BeamSpec& beam, double area_A,
                         bool* clamped = nullptr);

/// Multilateration: distance rings from all N measurements, all N(N-1)/2
/// pairwise difference equations, minimum norm least squares through the
/// singular value decomposition (singular values below 1e-12 of the largest
/// count as zero). Throws RankError when the centers are collinear and
/// std::invalid_argument for N < 3 or a count mismatch.
TrackingEstimate track_multilateration(const PowerMeasurements& meas,
                                       const BeaconArray& array);

/// N x 2 jacobian of the received powers with respect to the target
/// position, row i = (dP_i/dx, dP_i/dy) at `point`.
std::vector<std::array<double, 2>> jacobian(Vec2 point, const BeaconArray& array);

/// Theoretical tracking error at a point: sigma_n * sqrt(trace((U+)^T U+))
/// with U+ the pseudo-inverse of the power jacobian, equal to sigma_n *
/// sqrt(sum 1/s_i^2) over the two nonzero singular values. Throws RankError
/// when the jacobian has rank below 2 (the error is formally infinite).
double theoretical_error(Vec2 point, const BeaconArray& array,
                         const stochastic::NoiseSpec& noise);

}  // namespace omc::tracking
