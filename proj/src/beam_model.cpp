#include "omc/beam_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace omc::beam_model {

namespace {

void validate(const BeamSpec& beam) {
  if (!(beam.power_coeff_a > 0.0) || !std::isfinite(beam.power_coeff_a)) {
    throw std::domain_error("beam: power_coeff_a must be positive and finite");
  }
  if (!(beam.beam_width_wz > 0.0) || !std::isfinite(beam.beam_width_wz)) {
    throw std::domain_error("beam: beam_width_wz must be positive and finite");
  }
  if (!std::isfinite(beam.center.x) || !std::isfinite(beam.center.y)) {
    throw std::domain_error("beam: center must be finite");
  }
}

void validate(const ReceiverSpec& rx) {
  if (!(rx.area_A > 0.0) || !std::isfinite(rx.area_A)) {
    throw std::domain_error("receiver: area_A must be positive and finite");
  }
}

}  // namespace

double beam_width_at(double divergence_phi, double distance_z) {
  if (!(divergence_phi > 0.0) || !std::isfinite(divergence_phi)) {
    throw std::domain_error("beam_width_at: divergence must be positive and finite");
  }
  if (!(distance_z > 0.0) || !std::isfinite(distance_z)) {
    throw std::domain_error("beam_width_at: distance must be positive and finite");
  }
  return divergence_phi * distance_z;
}

double intensity(const BeamSpec& beam, Vec2 point) {
  validate(beam);
  const double w2 = beam.beam_width_wz * beam.beam_width_wz;
  const double rho2 = norm_sq(point - beam.center);
  return (2.0 * beam.power_coeff_a / (std::numbers::pi * w2)) * std::exp(-2.0 * rho2 / w2);
}

double received_power(const BeamSpec& beam, const ReceiverSpec& rx, Vec2 point) {
  validate(rx);
  return rx.area_A * intensity(beam, point);
}

bool receiver_area_is_small(const ReceiverSpec& rx, const BeamSpec& beam) {
  validate(rx);
  validate(beam);
  return rx.area_A <= beam.beam_width_wz * beam.beam_width_wz / 100.0;
}

double project_to_reference(double z, double l, double elevation_angle) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw std::domain_error("project_to_reference: z must be positive and finite");
  }
  if (!std::isfinite(l) || !std::isfinite(elevation_angle)) {
    throw std::domain_error("project_to_reference: arguments must be finite");
  }
  const double denom = z + l * std::sin(elevation_angle);
  if (!(denom > 0.0)) {
    throw std::domain_error("project_to_reference: target behind the source plane");
  }
  return z * l * std::cos(elevation_angle) / denom;
}

}  // namespace omc::beam_model
