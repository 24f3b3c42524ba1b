#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "omc/beam_model.hpp"
#include "omc/stochastic.hpp"
#include "omc/tracking.hpp"

using namespace omc;
using namespace omc::tracking;

namespace {

BeaconArray square_array(double aA, double w, double half = 1.0) {
  BeaconArray array;
  array.area_A = 1.0;
  for (const auto& [x, y] : {std::pair{half, half}, std::pair{-half, half},
                             std::pair{-half, -half}, std::pair{half, -half}}) {
    beam_model::BeamSpec beam;
    beam.power_coeff_a = aA;
    beam.beam_width_wz = w;
    beam.center = {x, y};
    array.beams.push_back(beam);
  }
  return array;
}

// The grid MLE benchmark: beacons at (+-1, +-1), w = 2, aA = 80, step 0.01
// over [-1, 1]^2, target (0.5, 0.4).
BeaconArray mle_array() { return square_array(80.0, 2.0); }

GridSearchConfig mle_grid() { return {-1.0, 1.0, -1.0, 1.0, 0.01}; }

// The multilateration benchmark: same centers, w = 4.
BeaconArray lateration_array() { return square_array(80.0, 4.0); }

PowerMeasurements noiseless_at(const BeaconArray& array, Vec2 target) {
  PowerMeasurements meas;
  const beam_model::ReceiverSpec rx{array.area_A};
  for (const auto& beam : array.beams) {
    meas.values.push_back(beam_model::received_power(beam, rx, target));
  }
  return meas;
}

PowerMeasurements noisy_at(const BeaconArray& array, Vec2 target, double sigma_n,
                           stochastic::RandomStream& rng) {
  PowerMeasurements meas = noiseless_at(array, target);
  for (auto& v : meas.values) {
    v += stochastic::sample_noise(stochastic::NoiseSpec{sigma_n}, rng);
  }
  return meas;
}

// Singular values of an N x 2 matrix through the 2 x 2 normal-equation
// eigenvalues, independently of any linear algebra library.
std::array<double, 2> singular_values(const std::vector<std::array<double, 2>>& rows) {
  double a = 0.0, b = 0.0, c = 0.0;  // [[a, b], [b, c]] = J^T J
  for (const auto& r : rows) {
    a += r[0] * r[0];
    b += r[0] * r[1];
    c += r[1] * r[1];
  }
  const double tr = a + c;
  const double det = a * c - b * b;
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  return {std::sqrt(0.5 * tr + disc), std::sqrt(std::max(0.0, 0.5 * tr - disc))};
}

const std::array<Vec2, 6> kReferencePoints{
    Vec2{0.0, 0.0}, Vec2{-0.5, 0.5}, Vec2{-1.0, -1.0},
    Vec2{0.0, -2.0}, Vec2{2.0, -2.0}, Vec2{1.0, 0.0}};

}  // namespace

TEST_CASE("log_likelihood peaks at the generating position") {
  const BeaconArray array = mle_array();
  const Vec2 target{0.5, 0.4};
  const PowerMeasurements meas = noiseless_at(array, target);
  const stochastic::NoiseSpec noise{0.01};
  const double at_target = log_likelihood(meas, target, array, noise);
  // Zero residuals leave only the normalization, -N ln(sqrt(2 pi) sigma_n).
  CHECK(at_target == doctest::Approx(14.744926611133675).epsilon(1e-13));
  for (const Vec2 other : {Vec2{0.4, 0.4}, Vec2{0.5, 0.5}, Vec2{0.0, 0.0},
                           Vec2{-0.9, 0.7}, Vec2{0.51, 0.41}}) {
    CHECK(log_likelihood(meas, other, array, noise) < at_target);
  }
}

TEST_CASE("log_likelihood far from all beacons reduces to the normalization") {
  const BeaconArray array = mle_array();
  PowerMeasurements zeros;
  zeros.values.assign(4, 0.0);
  const double ll = log_likelihood(zeros, {100.0, 100.0}, array, {0.01});
  CHECK(ll == doctest::Approx(14.744926611133675).epsilon(1e-9));
}

TEST_CASE("log_likelihood validates its inputs") {
  const BeaconArray array = mle_array();
  PowerMeasurements meas = noiseless_at(array, {0.0, 0.0});
  CHECK_THROWS_AS(log_likelihood(meas, {0, 0}, array, {0.0}), std::domain_error);
  CHECK_THROWS_AS(log_likelihood(meas, {0, 0}, array, {-0.1}), std::domain_error);
  meas.values.pop_back();
  CHECK_THROWS_AS(log_likelihood(meas, {0, 0}, array, {0.01}), std::invalid_argument);
}

TEST_CASE("track_mle_grid recovers the benchmark target noiselessly") {
  const BeaconArray array = mle_array();
  const Vec2 target{0.5, 0.4};
  const TrackingEstimate est =
      track_mle_grid(noiseless_at(array, target), array, {0.01}, mle_grid());
  CHECK(std::abs(est.point.x - 0.5) < 1e-9);
  CHECK(std::abs(est.point.y - 0.4) < 1e-9);
  CHECK(est.method == Method::GridMLE);
  REQUIRE(est.log_likelihood.has_value());
  CHECK(*est.log_likelihood == doctest::Approx(14.744926611133675).epsilon(1e-12));
}

TEST_CASE("track_mle_grid lands on the nearest grid point without noise") {
  const BeaconArray array = mle_array();
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> coord(-0.9, 0.9);
  const GridSearchConfig cfg = mle_grid();
  for (int i = 0; i < 10; ++i) {
    const Vec2 target{coord(rng), coord(rng)};
    const TrackingEstimate est =
        track_mle_grid(noiseless_at(array, target), array, {0.01}, cfg);
    CHECK(distance(est.point, target) <= cfg.step / std::sqrt(2.0) + 1e-12);
  }
}

TEST_CASE("track_mle_grid degrades with heavier measurement noise") {
  const BeaconArray array = mle_array();
  const Vec2 target{0.5, 0.4};
  const stochastic::RandomStream master(99);
  double err_low = 0.0;
  double err_high = 0.0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    auto stream_low = master.substream(static_cast<std::uint64_t>(t));
    auto stream_high = master.substream(static_cast<std::uint64_t>(t) + 1000);
    const auto low = track_mle_grid(noisy_at(array, target, 0.01, stream_low), array,
                                    {0.01}, mle_grid());
    const auto high = track_mle_grid(noisy_at(array, target, 1.0, stream_high), array,
                                     {1.0}, mle_grid());
    err_low += distance(low.point, target);
    err_high += distance(high.point, target);
  }
  CHECK(err_high / trials > err_low / trials);
  // Low noise keeps single estimates near the target.
  CHECK(err_low / trials < 0.05);
}

TEST_CASE("spread-out beacons flatten the central likelihood surface") {
  // Same target, beacons pushed to (+-4, +-4): the log likelihood over the
  // central square varies by orders of magnitude less than the benchmark's.
  const Vec2 target{0.5, 0.4};
  const auto range_over_center = [&](const BeaconArray& array) {
    const PowerMeasurements meas = noiseless_at(array, target);
    double lo = 1e300;
    double hi = -1e300;
    for (double x = -0.5; x <= 0.5 + 1e-12; x += 0.01) {
      for (double y = -0.5; y <= 0.5 + 1e-12; y += 0.01) {
        const double ll = log_likelihood(meas, {x, y}, array, {0.01});
        lo = std::min(lo, ll);
        hi = std::max(hi, ll);
      }
    }
    return hi - lo;
  };
  const double plateau = range_over_center(square_array(80.0, 2.0, 4.0));
  const double benchmark = range_over_center(mle_array());
  CHECK(plateau < 1e-3 * benchmark);
}

TEST_CASE("track_mle_grid breaks ties toward the smallest x then y") {
  // One beacon at the origin and a measurement taken half a meter out: every
  // grid point on that ring ties, and the scan order must pick the smallest
  // x (then y) deterministically.
  BeaconArray array;
  array.area_A = 1.0;
  beam_model::BeamSpec beam;
  beam.power_coeff_a = 80.0;
  beam.beam_width_wz = 2.0;
  beam.center = {0.0, 0.0};
  array.beams.push_back(beam);
  const PowerMeasurements meas = noiseless_at(array, {0.5, 0.0});
  const GridSearchConfig cfg{-0.5, 0.5, -0.5, 0.5, 0.5};
  const TrackingEstimate est = track_mle_grid(meas, array, {0.01}, cfg);
  CHECK(est.point.x == -0.5);
  CHECK(est.point.y == 0.0);
}

TEST_CASE("track_mle_grid optional refinement moves toward off-grid targets") {
  const BeaconArray array = mle_array();
  const Vec2 target{0.503, 0.4};
  const PowerMeasurements meas = noiseless_at(array, target);
  const TrackingEstimate raw = track_mle_grid(meas, array, {0.01}, mle_grid());
  CHECK(std::abs(raw.point.x - 0.5) < 1e-9);
  const TrackingEstimate refined =
      track_mle_grid(meas, array, {0.01}, mle_grid(), /*refine=*/true);
  CHECK(std::abs(refined.point.x - target.x) < 1.5e-3);
  CHECK(std::abs(refined.point.x - raw.point.x) <= 0.01 + 1e-12);
  CHECK(std::abs(refined.point.y - raw.point.y) <= 0.01 + 1e-12);
}

TEST_CASE("track_mle_grid validates grid and measurements") {
  const BeaconArray array = mle_array();
  PowerMeasurements meas = noiseless_at(array, {0.0, 0.0});
  CHECK_THROWS_AS(track_mle_grid(meas, array, {0.01}, {-1.0, 1.0, -1.0, 1.0, 0.0}),
                  std::domain_error);
  CHECK_THROWS_AS(track_mle_grid(meas, array, {0.01}, {1.0, -1.0, -1.0, 1.0, 0.1}),
                  std::domain_error);
  meas.values.pop_back();
  CHECK_THROWS_AS(track_mle_grid(meas, array, {0.01}, mle_grid()),
                  std::invalid_argument);
}

TEST_CASE("estimate_distance inverts the spot model") {
  const BeaconArray array = lateration_array();
  const beam_model::BeamSpec& beam = array.beams[0];
  const double peak = beam_model::received_power(beam, {1.0}, beam.center);
  bool clamped = true;
  CHECK(estimate_distance(peak, beam, 1.0, &clamped) == 0.0);
  CHECK_FALSE(clamped);
  // The worked example: the power seen 2 m out maps back to 2 m.
  CHECK(estimate_distance(1.9306470526010782, beam, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-12));
  for (const double d : {0.1, 1.0, 3.0, 6.0}) {
    const Vec2 point{beam.center.x + d, beam.center.y};
    const double p = beam_model::received_power(beam, {1.0}, point);
    CHECK(estimate_distance(p, beam, 1.0) == doctest::Approx(d).epsilon(1e-9));
  }
}

TEST_CASE("estimate_distance clamps unphysical measurements and flags it") {
  const BeaconArray array = lateration_array();
  const beam_model::BeamSpec& beam = array.beams[0];
  const double peak = beam_model::received_power(beam, {1.0}, beam.center);
  const double floor = std::max(1e-12, 1e-6 * peak);
  const double d_max = beam.beam_width_wz * std::sqrt(0.5 * std::log(peak / floor));
  bool clamped = false;
  // Noise-driven negative power: clamped to the floor, large finite radius.
  const double d_neg = estimate_distance(-0.02, beam, 1.0, &clamped);
  CHECK(clamped);
  CHECK(std::isfinite(d_neg));
  CHECK(d_neg == doctest::Approx(d_max).epsilon(1e-12));
  CHECK(estimate_distance(0.0, beam, 1.0, &clamped) == doctest::Approx(d_max).epsilon(1e-12));
  CHECK(clamped);
  // Above-peak power collapses to the center.
  CHECK(estimate_distance(peak * 1.5, beam, 1.0, &clamped) == 0.0);
  CHECK(clamped);
  // In-range measurements are left alone.
  estimate_distance(0.5 * peak, beam, 1.0, &clamped);
  CHECK_FALSE(clamped);
  CHECK_THROWS_AS(estimate_distance(0.5, beam, 0.0), std::domain_error);
  CHECK_THROWS_AS(estimate_distance(std::nan(""), beam, 1.0), std::domain_error);
}

TEST_CASE("track_multilateration solves consistent systems exactly") {
  const BeaconArray array = lateration_array();
  const Vec2 target{0.5, 0.4};
  const TrackingEstimate est = track_multilateration(noiseless_at(array, target), array);
  CHECK(est.method == Method::Multilateration);
  CHECK(est.clamped_measurements == 0);
  CHECK(distance(est.point, target) < 1e-9);
}

TEST_CASE("track_multilateration recovers random targets inside the hull") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> coord(-0.95, 0.95);
  std::uniform_real_distribution<double> width(2.0, 6.0);
  std::uniform_real_distribution<double> power(40.0, 160.0);
  for (int i = 0; i < 20; ++i) {
    const BeaconArray array = square_array(power(rng), width(rng));
    const Vec2 target{coord(rng), coord(rng)};
    const TrackingEstimate est =
        track_multilateration(noiseless_at(array, target), array);
    CHECK_MESSAGE(distance(est.point, target) < 1e-9, "case ", i);
  }
}

TEST_CASE("track_multilateration counts clamped measurements") {
  const BeaconArray array = lateration_array();
  PowerMeasurements meas = noiseless_at(array, {0.5, 0.4});
  meas.values[1] = -0.05;  // noise drove this one negative
  const TrackingEstimate est = track_multilateration(meas, array);
  CHECK(est.clamped_measurements == 1);
}

TEST_CASE("track_multilateration rejects degenerate geometry") {
  BeaconArray collinear;
  collinear.area_A = 1.0;
  for (const double x : {-1.0, 0.0, 1.0}) {
    beam_model::BeamSpec beam;
    beam.power_coeff_a = 80.0;
    beam.beam_width_wz = 4.0;
    beam.center = {x, 0.0};
    collinear.beams.push_back(beam);
  }
  CHECK_THROWS_AS(track_multilateration(noiseless_at(collinear, {0.2, 0.0}), collinear),
                  RankError);

  BeaconArray two = lateration_array();
  two.beams.resize(2);
  PowerMeasurements meas;
  meas.values.assign(2, 1.0);
  CHECK_THROWS_AS(track_multilateration(meas, two), std::invalid_argument);

  PowerMeasurements mismatch = noiseless_at(lateration_array(), {0, 0});
  mismatch.values.pop_back();
  CHECK_THROWS_AS(track_multilateration(mismatch, lateration_array()),
                  std::invalid_argument);
}

TEST_CASE("jacobian matches the closed form at the benchmark points") {
  const BeaconArray array = lateration_array();
  // At a beacon center the Gaussian peaks and its gradient vanishes.
  const auto at_center = jacobian(array.beams[0].center, array);
  CHECK(at_center[0][0] == 0.0);
  CHECK(at_center[0][1] == 0.0);
  // At the origin every row is coeff * (x_i, y_i) with
  // coeff = (8 aA / (pi w^4)) e^{-1/4}.
  const auto rows = jacobian({0.0, 0.0}, array);
  const double coeff = 0.6197499715482648;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i][0] == doctest::Approx(coeff * array.beams[i].center.x).epsilon(1e-12));
    CHECK(rows[i][1] == doctest::Approx(coeff * array.beams[i].center.y).epsilon(1e-12));
    CHECK(rows[i][0] == doctest::Approx(0.6198 * array.beams[i].center.x).epsilon(1e-3));
  }
  // Opposite beacons see opposite gradients at the center of symmetry.
  CHECK(rows[0][0] == doctest::Approx(-rows[2][0]).epsilon(1e-13));
  CHECK(rows[0][1] == doctest::Approx(-rows[2][1]).epsilon(1e-13));
}

TEST_CASE("jacobian agrees with central finite differences") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  std::uniform_real_distribution<double> width(2.0, 5.0);
  std::uniform_real_distribution<double> power(40.0, 160.0);
  const double h = 1e-6;
  for (int n = 0; n < 100; ++n) {
    const BeaconArray array = square_array(power(rng), width(rng));
    const Vec2 point{coord(rng), coord(rng)};
    const auto rows = jacobian(point, array);
    const beam_model::ReceiverSpec rx{array.area_A};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& beam = array.beams[i];
      const double fd_x = (beam_model::received_power(beam, rx, {point.x + h, point.y}) -
                           beam_model::received_power(beam, rx, {point.x - h, point.y})) /
                          (2.0 * h);
      const double fd_y = (beam_model::received_power(beam, rx, {point.x, point.y + h}) -
                           beam_model::received_power(beam, rx, {point.x, point.y - h})) /
                          (2.0 * h);
      // Relative to the row scale, floored so finite-difference roundoff on
      // near-zero rows does not masquerade as analytic error.
      const double denom = std::max({std::abs(rows[i][0]), std::abs(rows[i][1]), 1e-3});
      CHECK_MESSAGE(std::abs(fd_x - rows[i][0]) / denom <= 1e-4, "case ", n);
      CHECK_MESSAGE(std::abs(fd_y - rows[i][1]) / denom <= 1e-4, "case ", n);
    }
  }
}

TEST_CASE("theoretical_error reproduces the benchmark error table") {
  const BeaconArray array = lateration_array();
  const stochastic::NoiseSpec noise{0.01};
  const std::array<double, 6> expected{0.011409549231927305, 0.01177038339969202,
                                       0.013005328309930174, 0.01316629422397876,
                                       0.023213490772048012, 0.011958813303248012};
  const std::array<double, 6> table{0.0114, 0.0118, 0.0130, 0.0132, 0.0232, 0.0120};
  for (std::size_t i = 0; i < kReferencePoints.size(); ++i) {
    const double err = theoretical_error(kReferencePoints[i], array, noise);
    CHECK(err == doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(std::abs(err - table[i]) < 0.0005);
  }
}

TEST_CASE("theoretical_error is linear in the noise level") {
  const BeaconArray array = lateration_array();
  const double base = theoretical_error({0.0, 0.0}, array, {0.01});
  const double doubled = theoretical_error({0.0, 0.0}, array, {0.02});
  CHECK(doubled == doctest::Approx(2.0 * base).epsilon(1e-15));
  CHECK(doubled == doctest::Approx(0.0228).epsilon(5e-3));
  CHECK(theoretical_error({0.0, 0.0}, array, {0.0}) == 0.0);
}

TEST_CASE("theoretical_error equals the inverse singular value identity") {
  const BeaconArray array = lateration_array();
  for (const Vec2 point : kReferencePoints) {
    const auto sv = singular_values(jacobian(point, array));
    const double expected =
        0.01 * std::sqrt(1.0 / (sv[0] * sv[0]) + 1.0 / (sv[1] * sv[1]));
    CHECK(theoretical_error(point, array, {0.01}) ==
          doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("theoretical_error raises on rank-deficient geometry") {
  BeaconArray collinear;
  collinear.area_A = 1.0;
  for (const double x : {-1.0, 0.0, 1.0}) {
    beam_model::BeamSpec beam;
    beam.power_coeff_a = 80.0;
    beam.beam_width_wz = 4.0;
    beam.center = {x, 0.0};
    collinear.beams.push_back(beam);
  }
  CHECK_THROWS_AS(theoretical_error({0.2, 0.1}, collinear, {0.01}), RankError);
  // Far from every beacon the jacobian underflows to the zero matrix.
  CHECK_THROWS_AS(theoretical_error({1000.0, 1000.0}, lateration_array(), {0.01}),
                  RankError);
}

TEST_CASE("multilateration scatter follows its own linearization at small noise") {
  // At sigma_n = 0.001 W the estimator operates in its linear regime. Its
  // scatter must match the delta-method prediction built from finite
  // differences of the estimator itself at every benchmark point, and at the
  // centered point (where the least-squares map and the power jacobian bound
  // coincide by symmetry) it must also match theoretical_error within 15%.
  const BeaconArray array = lateration_array();
  const double sigma_n = 0.001;
  const int trials = 4000;
  const stochastic::RandomStream master(31415);
  for (std::size_t pi = 0; pi < kReferencePoints.size(); ++pi) {
    const Vec2 point = kReferencePoints[pi];
    const PowerMeasurements clean = noiseless_at(array, point);

    // Finite-difference sensitivity of the estimate to each measured power.
    const double h = 1e-7;
    double frob_sq = 0.0;
    for (std::size_t i = 0; i < clean.values.size(); ++i) {
      PowerMeasurements plus = clean;
      PowerMeasurements minus = clean;
      plus.values[i] += h;
      minus.values[i] -= h;
      const Vec2 dplus = track_multilateration(plus, array).point;
      const Vec2 dminus = track_multilateration(minus, array).point;
      const double gx = (dplus.x - dminus.x) / (2.0 * h);
      const double gy = (dplus.y - dminus.y) / (2.0 * h);
      frob_sq += gx * gx + gy * gy;
    }
    const double predicted_rms = sigma_n * std::sqrt(frob_sq);

    double sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
      auto stream = master.substream(static_cast<std::uint64_t>(pi) * 100000 + t);
      PowerMeasurements meas = clean;
      for (auto& v : meas.values) {
        v += stochastic::sample_noise(stochastic::NoiseSpec{sigma_n}, stream);
      }
      const Vec2 est = track_multilateration(meas, array).point;
      sum_sq += norm_sq(est - point);
    }
    const double rms = std::sqrt(sum_sq / trials);
    CHECK_MESSAGE(rms == doctest::Approx(predicted_rms).epsilon(0.08),
                  "point index ", pi);
    if (pi == 0) {
      const double theory = theoretical_error(point, array, {sigma_n});
      CHECK(rms == doctest::Approx(theory).epsilon(0.15));
    }
  }
}
