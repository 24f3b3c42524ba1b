#include "omc/tracking.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace omc::tracking {

namespace {

constexpr double kSvdRelThreshold = 1e-12;

void validate(const BeaconArray& array) {
  if (array.beams.empty()) {
    throw std::invalid_argument("beacon array must contain at least one beam");
  }
  if (!(array.area_A > 0.0) || !std::isfinite(array.area_A)) {
    throw std::domain_error("beacon array: area_A must be positive and finite");
  }
}

void require_match(const PowerMeasurements& meas, const BeaconArray& array) {
  if (meas.values.size() != array.beams.size()) {
    throw std::invalid_argument("measurement count must match beacon count");
  }
}

void validate(const GridSearchConfig& cfg) {
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) {
    throw std::domain_error("grid: step must be positive and finite");
  }
  if (!(cfg.x_max > cfg.x_min) || !(cfg.y_max > cfg.y_min)) {
    throw std::domain_error("grid: region must be non degenerate");
  }
}

// Number of grid points along one axis including both endpoints; a partial
// final cell is dropped, and a span that is a whole number of steps up to
// rounding keeps its endpoint.
int axis_points(double lo, double hi, double step) {
  const double ratio = (hi - lo) / step;
  const auto rounded = static_cast<long long>(std::llround(ratio));
  const long long n =
      std::abs(ratio - static_cast<double>(rounded)) <= 1e-6 * (1.0 + std::abs(ratio))
          ? rounded
          : static_cast<long long>(std::floor(ratio));
  return static_cast<int>(n) + 1;
}

double model_power(const beam_model::BeamSpec& beam, double area_A, Vec2 point) {
  const double w2 = beam.beam_width_wz * beam.beam_width_wz;
  return area_A * (2.0 * beam.power_coeff_a / (std::numbers::pi * w2)) *
         std::exp(-2.0 * norm_sq(point - beam.center) / w2);
}

// One dimensional parabolic vertex offset from three equally spaced samples.
// Returns 0 when the samples do not bend downward around the middle.
double parabolic_offset(double l_prev, double l_mid, double l_next, double step) {
  const double denom = l_prev - 2.0 * l_mid + l_next;
  if (!(denom < 0.0)) return 0.0;
  const double offset = 0.5 * step * (l_prev - l_next) / denom;
  return std::clamp(offset, -step, step);
}

}  // namespace

double log_likelihood(const PowerMeasurements& meas, Vec2 hyp, const BeaconArray& array,
                      const stochastic::NoiseSpec& noise) {
  validate(array);
  require_match(meas, array);
  if (!(noise.sigma_n > 0.0) || !std::isfinite(noise.sigma_n)) {
    throw std::domain_error("log_likelihood: sigma_n must be positive");
  }
  const double inv_two_var = 1.0 / (2.0 * noise.sigma_n * noise.sigma_n);
  double sum = 0.0;
  for (std::size_t i = 0; i < array.beams.size(); ++i) {
    const double resid = meas.values[i] - model_power(array.beams[i], array.area_A, hyp);
    sum -= resid * resid * inv_two_var;
  }
  const double n = static_cast<double>(array.beams.size());
  return sum - n * std::log(std::sqrt(2.0 * std::numbers::pi) * noise.sigma_n);
}

TrackingEstimate track_mle_grid(const PowerMeasurements& meas, const BeaconArray& array,
                                const stochastic::NoiseSpec& noise,
                                const GridSearchConfig& cfg, bool refine) {
  validate(array);
  require_match(meas, array);
  validate(cfg);
  const int nx = axis_points(cfg.x_min, cfg.x_max, cfg.step);
  const int ny = axis_points(cfg.y_min, cfg.y_max, cfg.step);

  const auto ll_at = [&](double x, double y) {
    return log_likelihood(meas, {x, y}, array, noise);
  };

  // x-major ascending scan with a strict improvement test: the first point
  // reaching the maximum wins, which is exactly the smallest-x-then-
  // smallest-y tie break.
  double best = -std::numeric_limits<double>::infinity();
  Vec2 best_point{cfg.x_min, cfg.y_min};
  for (int i = 0; i < nx; ++i) {
    const double x = cfg.x_min + i * cfg.step;
    for (int j = 0; j < ny; ++j) {
      const double y = cfg.y_min + j * cfg.step;
      const double ll = ll_at(x, y);
      if (ll > best) {
        best = ll;
        best_point = {x, y};
      }
    }
  }

  TrackingEstimate est;
  est.method = Method::GridMLE;
  est.point = best_point;
  est.log_likelihood = best;
  if (refine) {
    // Per-axis parabolic vertex through the argmax and its grid neighbors;
    // interior points only, so the refined point stays inside the region.
    Vec2 refined = best_point;
    if (best_point.x - cfg.step >= cfg.x_min - 1e-12 &&
        best_point.x + cfg.step <= cfg.x_max + 1e-12) {
      refined.x += parabolic_offset(ll_at(best_point.x - cfg.step, best_point.y), best,
                                    ll_at(best_point.x + cfg.step, best_point.y), cfg.step);
    }
    if (best_point.y - cfg.step >= cfg.y_min - 1e-12 &&
        best_point.y + cfg.step <= cfg.y_max + 1e-12) {
      refined.y += parabolic_offset(ll_at(best_point.x, best_point.y - cfg.step), best,
                                    ll_at(best_point.x, best_point.y + cfg.step), cfg.step);
    }
    est.point = refined;
    est.log_likelihood = ll_at(refined.x, refined.y);
  }
  return est;
}

double estimate_distance(double p_meas, const beam_model::BeamSpec& beam, double area_A,
                         bool* clamped) {
  if (!(area_A > 0.0) || !std::isfinite(area_A)) {
    throw std::domain_error("estimate_distance: area_A must be positive and finite");
  }
  if (!std::isfinite(p_meas)) {
    throw std::domain_error("estimate_distance: measured power must be finite");
  }
  const double w = beam.beam_width_wz;
  const double peak = model_power(beam, area_A, beam.center);
  const double floor = std::max(1e-12, 1e-6 * peak);
  double p = p_meas;
  bool was_clamped = false;
  if (p < floor) {
    p = floor;
    was_clamped = true;
  } else if (p > peak) {
    p = peak;
    was_clamped = true;
  }
  if (clamped != nullptr) *clamped = was_clamped;
  return w * std::sqrt(0.5 * std::log(peak / p));
}

TrackingEstimate track_multilateration(const PowerMeasurements& meas,
                                       const BeaconArray& array) {
  validate(array);
  require_match(meas, array);
  const std::size_t n = array.beams.size();
  if (n < 3) {
    throw std::invalid_argument("multilateration requires at least three beacons");
  }

  int clamp_count = 0;
  std::vector<double> d_sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool was_clamped = false;
    const double d = estimate_distance(meas.values[i], array.beams[i], array.area_A,
                                       &was_clamped);
    if (was_clamped) ++clamp_count;
    d_sq[i] = d * d;
  }

  // All pairwise differences of the distance ring equations form the linear
  // system F [x y]^T = h.
  const std::size_t rows = n * (n - 1) / 2;
  Eigen::MatrixXd f(rows, 2);
  Eigen::VectorXd h(rows);
  std::size_t r = 0;
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = m + 1; k < n; ++k) {
      const Vec2 cm = array.beams[m].center;
      const Vec2 cn = array.beams[k].center;
      f(r, 0) = 2.0 * (cn.x - cm.x);
      f(r, 1) = 2.0 * (cn.y - cm.y);
      h(r) = d_sq[m] - d_sq[k] + cn.x * cn.x - cm.x * cm.x + cn.y * cn.y - cm.y * cm.y;
      ++r;
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = kSvdRelThreshold * sv(0);
  if (!(sv(1) > cutoff)) {
    throw RankError("beacon centers are collinear: pairwise difference system has rank below 2");
  }
  // Minimum norm least squares through the pseudo-inverse.
  const Eigen::VectorXd projected = svd.matrixU().transpose() * h;
  Eigen::Vector2d scaled;
  scaled << projected(0) / sv(0), projected(1) / sv(1);
  const Eigen::Vector2d solution = svd.matrixV() * scaled;

  TrackingEstimate est;
  est.method = Method::Multilateration;
  est.point = {solution(0), solution(1)};
  est.clamped_measurements = clamp_count;
  return est;
}

std::vector<std::array<double, 2>> jacobian(Vec2 point, const BeaconArray& array) {
  validate(array);
  std::vector<std::array<double, 2>> rows;
  rows.reserve(array.beams.size());
  for (const auto& beam : array.beams) {
    const double w2 = beam.beam_width_wz * beam.beam_width_wz;
    const Vec2 delta = point - beam.center;
    // d/dx of (2aA / (pi w^2)) exp(-2 rho^2 / w^2).
    const double coeff = 8.0 * beam.power_coeff_a * array.area_A / (std::numbers::pi * w2 * w2) *
                         std::exp(-2.0 * norm_sq(delta) / w2);
    rows.push_back({-coeff * delta.x, -coeff * delta.y});
  }
  return rows;
}

double theoretical_error(Vec2 point, const BeaconArray& array,
                         const stochastic::NoiseSpec& noise) {
  if (!(noise.sigma_n >= 0.0) || !std::isfinite(noise.sigma_n)) {
    throw std::domain_error("theoretical_error: sigma_n must be nonnegative and finite");
  }
  const auto rows = jacobian(point, array);
  Eigen::MatrixXd u(static_cast<Eigen::Index>(rows.size()), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    u(static_cast<Eigen::Index>(i), 0) = rows[i][0];
    u(static_cast<Eigen::Index>(i), 1) = rows[i][1];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(u);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() < 2 || !(sv(1) > kSvdRelThreshold * sv(0)) || sv(0) == 0.0) {
    throw RankError("power jacobian has rank below 2: tracking error is unbounded here");
  }
  // trace((U+)^T U+) collapses to the inverse square singular values.
  const double trace = 1.0 / (sv(0) * sv(0)) + 1.0 / (sv(1) * sv(1));
  return noise.sigma_n * std::sqrt(trace);
}

}  // namespace omc::tracking
