#pragma once

// Deterministic Gaussian beam geometry: spot intensity, received power,
// beam width from divergence, and projection onto the reference plane.
// Lengths are meters, powers are watts throughout; there is no unit layer.

#include "omc/types.hpp"

namespace omc::beam_model {

/// One laser source described on the reference plane.
struct BeamSpec {
  double power_coeff_a = 0.0;  ///< power coefficient of the source, watts; > 0
  double beam_width_wz = 0.0;  ///< beam width at the link distance, meters; > 0
  Vec2 center;                 ///< spot center on the reference plane
};

/// The target's receiving aperture.
struct ReceiverSpec {
  double area_A = 0.0;  ///< receiving area, square meters; > 0
};

/// Beam width grown linearly with distance: w_z = phi * z.
/// Throws std::domain_error unless both arguments are positive and finite.
double beam_width_at(double divergence_phi, double distance_z);

/// Spot intensity at a point on the reference plane:
/// (2 a / (pi w_z^2)) * exp(-2 |point - center|^2 / w_z^2).
/// Strictly positive, maximal at the center, radially symmetric.
double intensity(const BeamSpec& beam, Vec2 point);

/// Received power at the target: area_A * intensity(beam, point). The model
/// treats the receiver as a point aperture, which is accurate while the area
/// stays small against the spot; see receiver_area_is_small.
double received_power(const BeamSpec& beam, const ReceiverSpec& rx, Vec2 point);

/// True when area_A <= beam_width^2 / 100, the regime where the point
/// aperture approximation in received_power holds. Callers surface a warning
/// when this is false; it is not an error.
bool receiver_area_is_small(const ReceiverSpec& rx, const BeamSpec& beam);

/// Projected in-plane displacement for a move of length l at elevation angle
/// `elevation_angle` out of the reference plane, by similar triangles:
/// l' = z * l * cos(angle) / (z + l * sin(angle)).
/// Throws std::domain_error when z <= 0 or the denominator is not positive
/// (target behind the source plane).
double project_to_reference(double z, double l, double elevation_angle);

}  // namespace omc::beam_model
