#pragma once

// Monte-Carlo experiment runner: repeated-measurement tracking trials,
// link metric sweeps with their numeric validation series, and the
// step-by-step trajectory simulation with ideal tracking.

#include <cstdint>
#include <string>
#include <vector>

#include "omc/link_design.hpp"
#include "omc/stochastic.hpp"
#include "omc/tracking.hpp"
#include "omc/types.hpp"

namespace omc::sim_harness {

/// One curve family member for sweep_link_curves: the power budget and the
/// spreads this series is evaluated with. An empty label is auto named
/// "aA=<v>,s2=<sigma_t^2 + sigma_p^2>".
struct SeriesSpec {
  double aA = 0.0;
  double sigma_t = 0.0;
  double sigma_p = 0.0;
  std::string label;
};

/// Everything one experiment needs. Fields irrelevant to a given operation
/// are ignored: trajectories use the main beam and ignore the beacon array,
/// tracking runs do the opposite.
struct ExperimentConfig {
  tracking::BeaconArray array;            ///< beacons, tracking experiments
  double main_power_coeff_a = 0.0;        ///< main laser a, trajectories
  double main_beam_width = 0.0;           ///< main laser w_z, trajectories
  double receiver_area = 1.0;             ///< receiver A for the main beam
  stochastic::MobilitySpec mobility{};
  stochastic::PointingSpec pointing{};
  stochastic::NoiseSpec noise{};
  link_design::DesignThresholds thresholds{};
  double z = 100.0;                       ///< link distance, meters
  int trial_count = 10000;
  std::uint64_t master_seed = 1;
  tracking::GridSearchConfig grid{};      ///< grid MLE search region
  std::vector<SeriesSpec> sweep_series;   ///< series for sweep_link_curves
};

/// Aggregated tracking statistics over the trials of one target point.
/// error_angle is mean_radial_error / z by construction. The per-trial
/// vectors are filled only when requested.
struct TrialStats {
  double mean_radial_error = 0.0;  ///< meters
  double rms_error = 0.0;          ///< meters
  double error_angle = 0.0;        ///< radians
  int clamped_measurements = 0;    ///< clamp events across all trials
  std::vector<double> per_trial_errors;
  std::vector<Vec2> per_trial_estimates;
};

/// One sample of a swept link curve.
struct CurvePoint {
  double abscissa = 0.0;   ///< w_z, meters
  double ordinate = 0.0;   ///< watts or probability
  std::string series;      ///< series label
  std::string method;      ///< "closed_form" or "numeric_oracle"
};

enum class CurveKind { AvgPower, ExpectedOutage };

/// One interval of a simulated trajectory.
struct TrajectoryRecord {
  int interval = 0;        ///< 1-based feedback interval index
  Vec2 target;             ///< true target position after its step
  Vec2 laser_center;       ///< main spot center aimed this interval
  double received_power = 0.0;  ///< watts at the target
  bool outage = false;     ///< received_power below gamma_th
};

/// Repeated-measurement tracking experiment: `trial_count` trials, each
/// drawing fresh per-beacon noise on the noiseless powers at `target`,
/// running the chosen estimator, and recording the radial error. Trial t
/// uses the substream of master_seed at index t, so results are bitwise
/// reproducible and order independent. Estimator rank failures propagate
/// with the trial index attached.
TrialStats run_tracking_experiment(const ExperimentConfig& cfg, Vec2 target,
                                   tracking::Method method, bool keep_trials = false);

/// Closed form link curves over a beam width grid, one value per (series,
/// grid point); expected outage points come with a companion
/// "numeric_oracle" series from the quadrature path. Grid points beyond a
/// series' maximum feasible width are skipped and counted in *skipped.
std::vector<CurvePoint> sweep_link_curves(const ExperimentConfig& cfg, CurveKind kind,
                                          const std::vector<double>& wz_grid,
                                          int* skipped = nullptr);

/// Trajectory under ideal tracking: each interval the target takes a
/// Brownian step from its previous true position while the main beam is
/// re-aimed at that previous position plus a fresh pointing offset; the
/// received power and the outage flag are evaluated at the target's new
/// position. Draw order per interval: target step pair first, then pointing
/// radius and angle, all from one sequential stream seeded with master_seed.
std::vector<TrajectoryRecord> simulate_trajectory(const ExperimentConfig& cfg, int steps);

}  // namespace omc::sim_harness
