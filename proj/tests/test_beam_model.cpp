#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "omc/beam_model.hpp"
#include "support/oracles.hpp"

using namespace omc;
using namespace omc::beam_model;

namespace {

BeamSpec make_beam(double a, double w, Vec2 center = {0.0, 0.0}) {
  BeamSpec beam;
  beam.power_coeff_a = a;
  beam.beam_width_wz = w;
  beam.center = center;
  return beam;
}

}  // namespace

TEST_CASE("beam_width_at grows linearly with distance") {
  CHECK(beam_width_at(0.04, 100.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(beam_width_at(3.93e-2, 100.0) == doctest::Approx(3.93).epsilon(1e-12));
  CHECK(beam_width_at(1e-3, 50.0) == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("beam_width_at rejects non-positive or non-finite arguments") {
  CHECK_THROWS_AS(beam_width_at(0.0, 100.0), std::domain_error);
  CHECK_THROWS_AS(beam_width_at(-0.01, 100.0), std::domain_error);
  CHECK_THROWS_AS(beam_width_at(0.04, 0.0), std::domain_error);
  CHECK_THROWS_AS(beam_width_at(0.04, -5.0), std::domain_error);
  CHECK_THROWS_AS(beam_width_at(std::nan(""), 100.0), std::domain_error);
}

TEST_CASE("intensity peaks at the center with the closed-form value") {
  const BeamSpec beam = make_beam(80.0, 4.0);
  const double peak = intensity(beam, {0.0, 0.0});
  // 2a / (pi w^2) = 160 / (16 pi) = 10 / pi.
  CHECK(peak == doctest::Approx(3.1830988618379066).epsilon(1e-14));
  // One beam width out the intensity has dropped by exactly e^-2.
  CHECK(intensity(beam, {4.0, 0.0}) ==
        doctest::Approx(peak * std::exp(-2.0)).epsilon(1e-14));
  CHECK(intensity(beam, {2.0, 0.0}) ==
        doctest::Approx(1.9306470526010782).epsilon(1e-14));
}

TEST_CASE("intensity is radially symmetric and maximal at the center") {
  const BeamSpec beam = make_beam(80.0, 4.0, {0.5, -0.25});
  const double at_center = intensity(beam, beam.center);
  for (const Vec2 offset : {Vec2{1.3, 0.0}, Vec2{0.0, 1.3}, Vec2{-1.3, 0.0},
                            Vec2{1.3 * std::cos(1.1), 1.3 * std::sin(1.1)}}) {
    CHECK(intensity(beam, beam.center + offset) ==
          doctest::Approx(intensity(beam, beam.center + Vec2{1.3, 0.0}))
              .epsilon(1e-13));
    CHECK(intensity(beam, beam.center + offset) < at_center);
  }
}

TEST_CASE("intensity integrates to the power coefficient over the plane") {
  for (const auto& [a, w] : {std::pair{80.0, 4.0}, std::pair{40.0, 2.0},
                             std::pair{1.0, 0.5}, std::pair{160.0, 6.0}}) {
    const BeamSpec beam = make_beam(a, w);
    const double total = oracle::integrate(
        [&](double rho) {
          return intensity(beam, {rho, 0.0}) * 2.0 * std::numbers::pi * rho;
        },
        0.0, 10.0 * w, 1e-10 * a);
    CHECK(total == doctest::Approx(a).epsilon(1e-6));
  }
}

TEST_CASE("received_power scales intensity by the receiving area") {
  const BeamSpec beam = make_beam(80.0, 4.0);
  const Vec2 point{1.0, 1.0};
  CHECK(received_power(beam, ReceiverSpec{2.5}, point) ==
        doctest::Approx(2.5 * intensity(beam, point)).epsilon(1e-15));
  // Vanishing aperture collects vanishing power.
  CHECK(received_power(beam, ReceiverSpec{1e-12}, point) < 1e-11);
  CHECK_THROWS_AS(received_power(beam, ReceiverSpec{0.0}, point), std::domain_error);
  CHECK_THROWS_AS(received_power(beam, ReceiverSpec{-1.0}, point), std::domain_error);
}

TEST_CASE("receiver_area_is_small flags apertures beyond a percent of the spot") {
  const BeamSpec beam = make_beam(80.0, 2.0);
  CHECK(receiver_area_is_small(ReceiverSpec{0.04}, beam));   // exactly w^2/100
  CHECK(receiver_area_is_small(ReceiverSpec{0.001}, beam));
  CHECK_FALSE(receiver_area_is_small(ReceiverSpec{0.0401}, beam));
  CHECK_FALSE(receiver_area_is_small(ReceiverSpec{1.0}, beam));
}

TEST_CASE("project_to_reference follows the similar-triangle rule") {
  CHECK(project_to_reference(100.0, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(project_to_reference(100.0, 1.0, std::numbers::pi / 2.0) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(project_to_reference(100.0, 2.0, std::numbers::pi / 6.0) ==
        doctest::Approx(1.7149017896721557).epsilon(1e-12));
  CHECK(project_to_reference(100.0, 2.0, std::numbers::pi / 6.0) ==
        doctest::Approx(1.715).epsilon(1e-3));
}

TEST_CASE("project_to_reference rejects degenerate geometry") {
  CHECK_THROWS_AS(project_to_reference(0.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(project_to_reference(-10.0, 1.0, 0.0), std::domain_error);
  // Target behind the source plane: denominator non-positive.
  CHECK_THROWS_AS(project_to_reference(1.0, 2.0, -std::numbers::pi / 2.0),
                  std::domain_error);
  CHECK_THROWS_AS(project_to_reference(100.0, 1.0, std::nan("")), std::domain_error);
}

TEST_CASE("projected intensity ratio converges to its long-range limit") {
  // As z grows with the geometry fixed, the projected offset tends to
  // l cos(angle) and the center-to-offset intensity ratio tends to
  // exp(-2 (l cos angle)^2 / w^2).
  const double l = 2.0;
  const double angle = std::numbers::pi / 6.0;
  const BeamSpec beam = make_beam(80.0, 4.0);
  const double limit =
      std::exp(-2.0 * std::pow(l * std::cos(angle), 2) / (beam.beam_width_wz * beam.beam_width_wz));
  const double z = 1e4 * l;
  const double lp = project_to_reference(z, l, angle);
  const double ratio = intensity(beam, {lp, 0.0}) / intensity(beam, {0.0, 0.0});
  CHECK(ratio == doctest::Approx(limit).epsilon(0.01));
  // At short range the ratio still differs measurably from the limit.
  const double lp_near = project_to_reference(10.0, l, angle);
  const double ratio_near = intensity(beam, {lp_near, 0.0}) / intensity(beam, {0.0, 0.0});
  CHECK(std::abs(ratio_near - limit) > std::abs(ratio - limit));
}
