#include "omc/sim_harness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "omc/beam_model.hpp"

namespace omc::sim_harness {

namespace {

std::string auto_label(const SeriesSpec& s) {
  if (!s.label.empty()) return s.label;
  const double s2 = s.sigma_t * s.sigma_t + s.sigma_p * s.sigma_p;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "aA=%g,s2=%g", s.aA, s2);
  return buf;
}

}  // namespace

TrialStats run_tracking_experiment(const ExperimentConfig& cfg, Vec2 target,
                                   tracking::Method method, bool keep_trials) {
  if (cfg.trial_count < 1) {
    throw std::invalid_argument("trial_count must be at least 1");
  }
  if (!(cfg.z > 0.0)) {
    throw std::domain_error("link distance z must be positive");
  }

  // Noiseless per-beacon powers at the target; each trial perturbs these.
  const std::size_t n = cfg.array.beams.size();
  std::vector<double> clean(n);
  const beam_model::ReceiverSpec rx{cfg.array.area_A};
  for (std::size_t i = 0; i < n; ++i) {
    clean[i] = beam_model::received_power(cfg.array.beams[i], rx, target);
  }

  // The grid MLE needs a positive likelihood scale even in noiseless runs;
  // the argmax does not depend on its value.
  stochastic::NoiseSpec likelihood_noise{cfg.noise.sigma_n > 0.0 ? cfg.noise.sigma_n : 1.0};

  const stochastic::RandomStream master(cfg.master_seed);
  TrialStats stats;
  if (keep_trials) {
    stats.per_trial_errors.reserve(static_cast<std::size_t>(cfg.trial_count));
    stats.per_trial_estimates.reserve(static_cast<std::size_t>(cfg.trial_count));
  }
  double sum_err = 0.0;
  double sum_sq = 0.0;
  tracking::PowerMeasurements meas;
  meas.values.resize(n);
  for (int t = 0; t < cfg.trial_count; ++t) {
    auto stream = master.substream(static_cast<std::uint64_t>(t));
    for (std::size_t i = 0; i < n; ++i) {
      meas.values[i] = clean[i] + stochastic::sample_noise(cfg.noise, stream);
    }
    tracking::TrackingEstimate est;
    try {
      est = method == tracking::Method::Multilateration
                ? tracking::track_multilateration(meas, cfg.array)
                : tracking::track_mle_grid(meas, cfg.array, likelihood_noise, cfg.grid);
    } catch (const RankError& e) {
      throw RankError(std::string(e.what()) + " (trial " + std::to_string(t) + ")");
    }
    const double err = distance(est.point, target);
    sum_err += err;
    sum_sq += err * err;
    stats.clamped_measurements += est.clamped_measurements;
    if (keep_trials) {
      stats.per_trial_errors.push_back(err);
      stats.per_trial_estimates.push_back(est.point);
    }
  }
  const double count = static_cast<double>(cfg.trial_count);
  stats.mean_radial_error = sum_err / count;
  stats.rms_error = std::sqrt(sum_sq / count);
  stats.error_angle = stats.mean_radial_error / cfg.z;
  return stats;
}

std::vector<CurvePoint> sweep_link_curves(const ExperimentConfig& cfg, CurveKind kind,
                                          const std::vector<double>& wz_grid,
                                          int* skipped) {
  if (wz_grid.empty()) {
    throw std::invalid_argument("sweep: beam width grid must not be empty");
  }
  if (cfg.sweep_series.empty()) {
    throw std::invalid_argument("sweep: at least one series is required");
  }
  int skip_count = 0;
  std::vector<CurvePoint> points;
  for (const auto& series : cfg.sweep_series) {
    const std::string label = auto_label(series);
    const double gamma = cfg.thresholds.gamma_th;
    for (const double wz : wz_grid) {
      if (kind == CurveKind::AvgPower) {
        points.push_back({wz, link_design::average_power(series.aA, series.sigma_p,
                                                         series.sigma_t, wz),
                          label, "closed_form"});
        continue;
      }
      // Expected outage is only defined below the maximum feasible width;
      // wider grid points are skipped and counted, not errors.
      if (wz >= link_design::max_feasible_width(series.aA, gamma) * (1.0 - 1e-12)) {
        ++skip_count;
        continue;
      }
      points.push_back({wz,
                        link_design::expected_outage(wz, series.aA, gamma, series.sigma_t,
                                                     series.sigma_p),
                        label, "closed_form"});
      points.push_back({wz,
                        link_design::expected_outage_numeric(wz, series.aA, gamma,
                                                             series.sigma_t, series.sigma_p),
                        label, "numeric_oracle"});
    }
  }
  if (skipped != nullptr) *skipped = skip_count;
  return points;
}

std::vector<TrajectoryRecord> simulate_trajectory(const ExperimentConfig& cfg, int steps) {
  if (steps < 1) {
    throw std::invalid_argument("trajectory step count must be at least 1");
  }
  const beam_model::ReceiverSpec rx{cfg.receiver_area};
  beam_model::BeamSpec main_beam;
  main_beam.power_coeff_a = cfg.main_power_coeff_a;
  main_beam.beam_width_wz = cfg.main_beam_width;

  stochastic::RandomStream stream(cfg.master_seed);
  std::vector<TrajectoryRecord> records;
  records.reserve(static_cast<std::size_t>(steps));
  Vec2 target{0.0, 0.0};
  for (int k = 1; k <= steps; ++k) {
    const Vec2 prev = target;
    target = stochastic::sample_target_step(prev, cfg.mobility, stream);
    // Ideal tracking: the beam is re-aimed at the previous true position,
    // displaced by this interval's pointing error.
    main_beam.center = prev + stochastic::sample_pointing_offset(cfg.pointing, stream);
    const double power = beam_model::received_power(main_beam, rx, target);
    records.push_back({k, target, main_beam.center, power,
                       power < cfg.thresholds.gamma_th});
  }
  return records;
}

}  // namespace omc::sim_harness
