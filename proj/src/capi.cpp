#include "omctrack.h"

#include <cstring>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "omc/beam_model.hpp"
#include "omc/link_design.hpp"
#include "omc/sim_harness.hpp"
#include "omc/specfun.hpp"
#include "omc/stochastic.hpp"
#include "omc/tracking.hpp"
#include "omc/types.hpp"

/* Opaque handle definitions: thin wrappers over the C++ representations. */
struct omc_stream {
  omc::stochastic::RandomStream rep;
};

struct omc_beacon_array {
  omc::tracking::BeaconArray rep;
};

struct omc_experiment {
  omc::sim_harness::ExperimentConfig rep;
};

struct omc_curve_points {
  std::vector<omc::sim_harness::CurvePoint> rep;
};

struct omc_trajectory {
  std::vector<omc::sim_harness::TrajectoryRecord> rep;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what == nullptr ? "" : what; }

/* Runs fn, translating C++ exceptions into status codes and recording the
 * message for omc_last_error().  fn must return omc_status. */
template <typename Fn>
omc_status guarded(Fn&& fn) {
  try {
    const omc_status status = fn();
    if (status == OMC_OK) g_last_error.clear();
    return status;
  } catch (const omc::RankError& e) {
    set_error(e.what());
    return OMC_ERR_RANK_DEFICIENT;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return OMC_ERR_DOMAIN;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return OMC_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc& e) {
    set_error(e.what());
    return OMC_ERR_ALLOC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return OMC_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return OMC_ERR_INTERNAL;
  }
}

omc_status invalid(const char* what) {
  set_error(what);
  return OMC_ERR_INVALID_ARGUMENT;
}

omc::Vec2 to_cpp(omc_vec2 v) { return {v.x, v.y}; }

omc_vec2 to_c(omc::Vec2 v) { return {v.x, v.y}; }

omc_interval to_c(const omc::link_design::Interval& iv) {
  return {iv.lo, iv.hi, iv.empty() ? 1 : 0};
}

omc::tracking::GridSearchConfig to_cpp(omc_grid g) {
  return {g.x_min, g.x_max, g.y_min, g.y_max, g.step};
}

omc::tracking::PowerMeasurements make_measurements(const double* values,
                                                   size_t count) {
  omc::tracking::PowerMeasurements m;
  m.values.assign(values, values + count);
  return m;
}

}  // namespace

extern "C" {

const char* omc_version(void) { return "1.0.0"; }

const char* omc_status_name(omc_status status) {
  switch (status) {
    case OMC_OK: return "OMC_OK";
    case OMC_ERR_INVALID_ARGUMENT: return "OMC_ERR_INVALID_ARGUMENT";
    case OMC_ERR_DOMAIN: return "OMC_ERR_DOMAIN";
    case OMC_ERR_RANK_DEFICIENT: return "OMC_ERR_RANK_DEFICIENT";
    case OMC_ERR_ALLOC: return "OMC_ERR_ALLOC";
    case OMC_ERR_INTERNAL: return "OMC_ERR_INTERNAL";
  }
  return "OMC_ERR_UNKNOWN";
}

const char* omc_last_error(void) { return g_last_error.c_str(); }

/* ---------------- special functions ---------------- */

omc_status omc_marcum_q1(double a, double b, double* out) {
  if (out == nullptr) return invalid("omc_marcum_q1: out is NULL");
  return guarded([&] {
    *out = omc::specfun::marcum_q1(a, b);
    return OMC_OK;
  });
}

omc_status omc_lambert_w(double x, omc_lambert_branch branch, double* out) {
  if (out == nullptr) return invalid("omc_lambert_w: out is NULL");
  if (branch != OMC_LAMBERT_PRINCIPAL && branch != OMC_LAMBERT_NEGATIVE_ONE) {
    return invalid("omc_lambert_w: unknown branch");
  }
  return guarded([&] {
    const auto b = branch == OMC_LAMBERT_PRINCIPAL
                       ? omc::specfun::LambertBranch::Principal
                       : omc::specfun::LambertBranch::NegativeOne;
    *out = omc::specfun::lambert_w(x, b);
    return OMC_OK;
  });
}

/* ---------------- beam model ---------------- */

omc_status omc_beam_width_at(double z, double phi, double* out) {
  if (out == nullptr) return invalid("omc_beam_width_at: out is NULL");
  return guarded([&] {
    *out = omc::beam_model::beam_width_at(z, phi);
    return OMC_OK;
  });
}

omc_status omc_intensity(double power_coeff_a, double beam_width_wz,
                         omc_vec2 center, omc_vec2 point, double* out) {
  if (out == nullptr) return invalid("omc_intensity: out is NULL");
  return guarded([&] {
    omc::beam_model::BeamSpec beam{power_coeff_a, beam_width_wz, to_cpp(center)};
    *out = omc::beam_model::intensity(beam, to_cpp(point));
    return OMC_OK;
  });
}

omc_status omc_received_power(double power_coeff_a, double beam_width_wz,
                              omc_vec2 center, double area_A, omc_vec2 point,
                              double* out) {
  if (out == nullptr) return invalid("omc_received_power: out is NULL");
  return guarded([&] {
    omc::beam_model::BeamSpec beam{power_coeff_a, beam_width_wz, to_cpp(center)};
    omc::beam_model::ReceiverSpec rx{area_A};
    *out = omc::beam_model::received_power(beam, rx, to_cpp(point));
    return OMC_OK;
  });
}

omc_status omc_receiver_area_is_small(double area_A, double beam_width_wz,
                                      int* out) {
  if (out == nullptr) return invalid("omc_receiver_area_is_small: out is NULL");
  return guarded([&] {
    *out = omc::beam_model::receiver_area_is_small(area_A, beam_width_wz) ? 1 : 0;
    return OMC_OK;
  });
}

omc_status omc_project_to_reference(double z, double l, double phi,
                                    double* out) {
  if (out == nullptr) return invalid("omc_project_to_reference: out is NULL");
  return guarded([&] {
    *out = omc::beam_model::project_to_reference(z, l, phi);
    return OMC_OK;
  });
}

/* ---------------- link design ---------------- */

omc_status omc_average_power(double aA, double sigma_p, double sigma_t,
                             double w_z, double* out) {
  if (out == nullptr) return invalid("omc_average_power: out is NULL");
  return guarded([&] {
    *out = omc::link_design::average_power(aA, sigma_p, sigma_t, w_z);
    return OMC_OK;
  });
}

omc_status omc_constraint_average_power(double aA, double eta, double sigma_p,
                                        double sigma_t, omc_interval* out) {
  if (out == nullptr) return invalid("omc_constraint_average_power: out is NULL");
  return guarded([&] {
    *out = to_c(omc::link_design::constraint_average_power(aA, eta, sigma_p,
                                                           sigma_t));
    return OMC_OK;
  });
}

omc_status omc_max_feasible_width(double aA, double gamma_th, double* out) {
  if (out == nullptr) return invalid("omc_max_feasible_width: out is NULL");
  return guarded([&] {
    *out = omc::link_design::max_feasible_width(aA, gamma_th);
    return OMC_OK;
  });
}

omc_status omc_feasible_radius(double aA, double gamma_th, double w_z,
                               double* out) {
  if (out == nullptr) return invalid("omc_feasible_radius: out is NULL");
  return guarded([&] {
    *out = omc::link_design::feasible_radius(aA, gamma_th, w_z);
    return OMC_OK;
  });
}

omc_status omc_outage_probability(double r, double sigma_t, double aA,
                                  double gamma_th, double w_z, double* out) {
  if (out == nullptr) return invalid("omc_outage_probability: out is NULL");
  return guarded([&] {
    *out = omc::link_design::outage_probability(r, sigma_t, aA, gamma_th, w_z);
    return OMC_OK;
  });
}

omc_status omc_expected_outage(double w_z, double aA, double gamma_th,
                               double sigma_t, double sigma_p, double* out) {
  if (out == nullptr) return invalid("omc_expected_outage: out is NULL");
  return guarded([&] {
    *out = omc::link_design::expected_outage(w_z, aA, gamma_th, sigma_t, sigma_p);
    return OMC_OK;
  });
}

omc_status omc_expected_outage_numeric(double w_z, double aA, double gamma_th,
                                       double sigma_t, double sigma_p,
                                       double* out) {
  if (out == nullptr) return invalid("omc_expected_outage_numeric: out is NULL");
  return guarded([&] {
    *out = omc::link_design::expected_outage_numeric(w_z, aA, gamma_th, sigma_t,
                                                     sigma_p);
    return OMC_OK;
  });
}

omc_status omc_optimal_beam_width(double aA, double gamma_th, double* out) {
  if (out == nullptr) return invalid("omc_optimal_beam_width: out is NULL");
  return guarded([&] {
    *out = omc::link_design::optimal_beam_width(aA, gamma_th);
    return OMC_OK;
  });
}

omc_status omc_constraint_outage(double aA, double gamma_th, double xi,
                                 double sigma_t, double sigma_p,
                                 omc_interval* out) {
  if (out == nullptr) return invalid("omc_constraint_outage: out is NULL");
  return guarded([&] {
    *out = to_c(omc::link_design::constraint_outage(aA, gamma_th, xi, sigma_t,
                                                    sigma_p));
    return OMC_OK;
  });
}

omc_status omc_design_rule(double aA, double eta, double gamma_th, double xi,
                           double sigma_t, double sigma_p, double z,
                           omc_interval* beam_width, omc_interval* divergence) {
  if (beam_width == nullptr || divergence == nullptr) {
    return invalid("omc_design_rule: output pointer is NULL");
  }
  return guarded([&] {
    const auto rule = omc::link_design::design_rule(aA, eta, gamma_th, xi,
                                                    sigma_t, sigma_p, z);
    *beam_width = to_c(rule.beam_width);
    *divergence = to_c(rule.divergence);
    return OMC_OK;
  });
}

/* ---------------- random streams ---------------- */

omc_status omc_stream_create(uint64_t seed, omc_stream** out) {
  if (out == nullptr) return invalid("omc_stream_create: out is NULL");
  return guarded([&] {
    *out = new omc_stream{omc::stochastic::RandomStream(seed)};
    return OMC_OK;
  });
}

void omc_stream_destroy(omc_stream* stream) { delete stream; }

omc_status omc_stream_substream(const omc_stream* stream, uint64_t index,
                                omc_stream** out) {
  if (stream == nullptr) return invalid("omc_stream_substream: stream is NULL");
  if (out == nullptr) return invalid("omc_stream_substream: out is NULL");
  return guarded([&] {
    *out = new omc_stream{stream->rep.substream(index)};
    return OMC_OK;
  });
}

omc_status omc_stream_uniform(omc_stream* stream, double* out) {
  if (stream == nullptr) return invalid("omc_stream_uniform: stream is NULL");
  if (out == nullptr) return invalid("omc_stream_uniform: out is NULL");
  return guarded([&] {
    *out = stream->rep.uniform();
    return OMC_OK;
  });
}

omc_status omc_stream_gaussian(omc_stream* stream, double sigma, double* out) {
  if (stream == nullptr) return invalid("omc_stream_gaussian: stream is NULL");
  if (out == nullptr) return invalid("omc_stream_gaussian: out is NULL");
  return guarded([&] {
    *out = stream->rep.gaussian(sigma);
    return OMC_OK;
  });
}

omc_status omc_stream_rayleigh(omc_stream* stream, double sigma, double* out) {
  if (stream == nullptr) return invalid("omc_stream_rayleigh: stream is NULL");
  if (out == nullptr) return invalid("omc_stream_rayleigh: out is NULL");
  return guarded([&] {
    *out = stream->rep.rayleigh(sigma);
    return OMC_OK;
  });
}

omc_status omc_sample_target_step(omc_stream* stream, omc_vec2 previous,
                                  double sigma_t, omc_vec2* out) {
  if (stream == nullptr) return invalid("omc_sample_target_step: stream is NULL");
  if (out == nullptr) return invalid("omc_sample_target_step: out is NULL");
  return guarded([&] {
    omc::stochastic::MobilitySpec mobility{sigma_t};
    *out = to_c(omc::stochastic::sample_target_step(to_cpp(previous), mobility,
                                                    stream->rep));
    return OMC_OK;
  });
}

omc_status omc_sample_pointing_offset(omc_stream* stream, double sigma_p,
                                      omc_vec2* out) {
  if (stream == nullptr) {
    return invalid("omc_sample_pointing_offset: stream is NULL");
  }
  if (out == nullptr) return invalid("omc_sample_pointing_offset: out is NULL");
  return guarded([&] {
    omc::stochastic::PointingSpec pointing{sigma_p};
    *out = to_c(omc::stochastic::sample_pointing_offset(pointing, stream->rep));
    return OMC_OK;
  });
}

/* ---------------- beacon arrays and tracking ---------------- */

omc_status omc_beacon_array_create(double area_A, omc_beacon_array** out) {
  if (out == nullptr) return invalid("omc_beacon_array_create: out is NULL");
  return guarded([&] {
    auto* array = new omc_beacon_array;
    array->rep.area_A = area_A;
    *out = array;
    return OMC_OK;
  });
}

void omc_beacon_array_destroy(omc_beacon_array* array) { delete array; }

omc_status omc_beacon_array_add(omc_beacon_array* array, double power_coeff_a,
                                double beam_width_wz, omc_vec2 center) {
  if (array == nullptr) return invalid("omc_beacon_array_add: array is NULL");
  return guarded([&] {
    array->rep.beams.push_back({power_coeff_a, beam_width_wz, to_cpp(center)});
    return OMC_OK;
  });
}

omc_status omc_beacon_array_size(const omc_beacon_array* array, size_t* out) {
  if (array == nullptr) return invalid("omc_beacon_array_size: array is NULL");
  if (out == nullptr) return invalid("omc_beacon_array_size: out is NULL");
  *out = array->rep.beams.size();
  return OMC_OK;
}

omc_status omc_log_likelihood(const double* measurements, size_t count,
                              const omc_beacon_array* array, double sigma_n,
                              omc_vec2 candidate, double* out) {
  if (measurements == nullptr && count > 0) {
    return invalid("omc_log_likelihood: measurements is NULL");
  }
  if (array == nullptr) return invalid("omc_log_likelihood: array is NULL");
  if (out == nullptr) return invalid("omc_log_likelihood: out is NULL");
  return guarded([&] {
    omc::stochastic::NoiseSpec noise{sigma_n};
    *out = omc::tracking::log_likelihood(make_measurements(measurements, count),
                                         array->rep, noise, to_cpp(candidate));
    return OMC_OK;
  });
}

omc_status omc_track_mle_grid(const double* measurements, size_t count,
                              const omc_beacon_array* array, double sigma_n,
                              omc_grid grid, int refine, omc_estimate* out) {
  if (measurements == nullptr && count > 0) {
    return invalid("omc_track_mle_grid: measurements is NULL");
  }
  if (array == nullptr) return invalid("omc_track_mle_grid: array is NULL");
  if (out == nullptr) return invalid("omc_track_mle_grid: out is NULL");
  return guarded([&] {
    omc::stochastic::NoiseSpec noise{sigma_n};
    const auto est = omc::tracking::track_mle_grid(
        make_measurements(measurements, count), array->rep, noise, to_cpp(grid),
        refine != 0);
    out->point = to_c(est.point);
    out->has_log_likelihood = est.log_likelihood.has_value() ? 1 : 0;
    out->log_likelihood = est.log_likelihood.value_or(0.0);
    out->clamped_measurements = est.clamped_measurements;
    return OMC_OK;
  });
}

omc_status omc_estimate_distance(double power, double power_coeff_a,
                                 double beam_width_wz, double area_A,
                                 double* out, int* clamped) {
  if (out == nullptr) return invalid("omc_estimate_distance: out is NULL");
  return guarded([&] {
    omc::beam_model::BeamSpec beam{power_coeff_a, beam_width_wz, {0.0, 0.0}};
    bool was_clamped = false;
    *out = omc::tracking::estimate_distance(power, beam, area_A, &was_clamped);
    if (clamped != nullptr) *clamped = was_clamped ? 1 : 0;
    return OMC_OK;
  });
}

omc_status omc_track_multilateration(const double* measurements, size_t count,
                                     const omc_beacon_array* array,
                                     omc_estimate* out) {
  if (measurements == nullptr && count > 0) {
    return invalid("omc_track_multilateration: measurements is NULL");
  }
  if (array == nullptr) {
    return invalid("omc_track_multilateration: array is NULL");
  }
  if (out == nullptr) return invalid("omc_track_multilateration: out is NULL");
  return guarded([&] {
    const auto est = omc::tracking::track_multilateration(
        make_measurements(measurements, count), array->rep);
    out->point = to_c(est.point);
    out->has_log_likelihood = 0;
    out->log_likelihood = 0.0;
    out->clamped_measurements = est.clamped_measurements;
    return OMC_OK;
  });
}

omc_status omc_jacobian(const omc_beacon_array* array, omc_vec2 point,
                        double* jacobian_out, size_t count) {
  if (array == nullptr) return invalid("omc_jacobian: array is NULL");
  if (jacobian_out == nullptr) {
    return invalid("omc_jacobian: jacobian_out is NULL");
  }
  if (count != array->rep.beams.size()) {
    return invalid("omc_jacobian: count does not match beacon count");
  }
  return guarded([&] {
    const auto jac = omc::tracking::jacobian(array->rep, to_cpp(point));
    for (size_t i = 0; i < count; ++i) {
      jacobian_out[2 * i] = jac(static_cast<Eigen::Index>(i), 0);
      jacobian_out[2 * i + 1] = jac(static_cast<Eigen::Index>(i), 1);
    }
    return OMC_OK;
  });
}

omc_status omc_theoretical_error(const omc_beacon_array* array, omc_vec2 point,
                                 double sigma_n, double* out) {
  if (array == nullptr) return invalid("omc_theoretical_error: array is NULL");
  if (out == nullptr) return invalid("omc_theoretical_error: out is NULL");
  return guarded([&] {
    *out = omc::tracking::theoretical_error(array->rep, to_cpp(point), sigma_n);
    return OMC_OK;
  });
}

/* ---------------- experiments ---------------- */

omc_status omc_experiment_create(omc_experiment** out) {
  if (out == nullptr) return invalid("omc_experiment_create: out is NULL");
  return guarded([&] {
    *out = new omc_experiment;
    return OMC_OK;
  });
}

void omc_experiment_destroy(omc_experiment* experiment) { delete experiment; }

omc_status omc_experiment_set_array(omc_experiment* experiment,
                                    const omc_beacon_array* array) {
  if (experiment == nullptr) {
    return invalid("omc_experiment_set_array: experiment is NULL");
  }
  if (array == nullptr) return invalid("omc_experiment_set_array: array is NULL");
  return guarded([&] {
    experiment->rep.array = array->rep;
    return OMC_OK;
  });
}

omc_status omc_experiment_set_main_beam(omc_experiment* experiment,
                                        double power_coeff_a,
                                        double beam_width_wz) {
  if (experiment == nullptr) {
    return invalid("omc_experiment_set_main_beam: experiment is NULL");
  }
  experiment->rep.main_power_coeff_a = power_coeff_a;
  experiment->rep.main_beam_width = beam_width_wz;
  return OMC_OK;
}

omc_status omc_experiment_set_receiver_area(omc_experiment* experiment,
                                            double area_A) {
  if (experiment == nullptr) {
    return invalid("omc_experiment_set_receiver_area: experiment is NULL");
  }
  experiment->rep.receiver_area = area_A;
  return OMC_OK;
}

omc_status omc_experiment_set_sigmas(omc_experiment* experiment, double sigma_t,
                                     double sigma_p, double sigma_n) {
  if (experiment == nullptr) {
    return invalid("omc_experiment_set_sigmas: experiment is NULL");
  }
  experiment->rep.mobility.sigma_t = sigma_t;
  experiment->rep.pointing.sigma_p = sigma_p;
  experiment->rep.noise.sigma_n = sigma_n;
  return OMC_OK;
}

omc_status omc_experiment_set_thresholds(omc_experiment* experiment, double eta,
                                         double gamma_th, double xi) {
  if (experiment == nullptr) {
    return invalid("omc_experiment_set_thresholds: experiment is NULL");
  }
  experiment->rep.thresholds.eta = eta;
  experiment->rep.thresholds.gamma_th = gamma_th;
  experiment->rep.thresholds.xi = xi;
  return OMC_OK;
}

omc_status omc_experiment_set_link_distance(omc_experiment* experiment,
                                            double z) {
  if (experiment == nullptr) {
    return invalid("omc_experiment_set_link_distance: experiment is NULL");
  }
  experiment->rep.z = z;
  return OMC_OK;
}

omc_status omc_experiment_set_trials(omc_experiment* experiment, int trials) {
  if (experiment == nullptr) {
    return invalid("omc_experiment_set_trials: experiment is NULL");
  }
  experiment->rep.trial_count = trials;
  return OMC_OK;
}

omc_status omc_experiment_set_seed(omc_experiment* experiment, uint64_t seed) {
  if (experiment == nullptr) {
    return invalid("omc_experiment_set_seed: experiment is NULL");
  }
  experiment->rep.master_seed = seed;
  return OMC_OK;
}

omc_status omc_experiment_set_grid(omc_experiment* experiment, omc_grid grid) {
  if (experiment == nullptr) {
    return invalid("omc_experiment_set_grid: experiment is NULL");
  }
  experiment->rep.grid = to_cpp(grid);
  return OMC_OK;
}

omc_status omc_experiment_add_series(omc_experiment* experiment, double aA,
                                     double sigma_t, double sigma_p,
                                     const char* label) {
  if (experiment == nullptr) {
    return invalid("omc_experiment_add_series: experiment is NULL");
  }
  return guarded([&] {
    omc::sim_harness::SeriesSpec series;
    series.aA = aA;
    series.sigma_t = sigma_t;
    series.sigma_p = sigma_p;
    series.label = label == nullptr ? "" : label;
    experiment->rep.sweep_series.push_back(std::move(series));
    return OMC_OK;
  });
}

omc_status omc_run_tracking_experiment(const omc_experiment* experiment,
                                       omc_vec2 target,
                                       omc_tracking_method method,
                                       omc_trial_stats* stats, double* est_xy,
                                       double* errors, int* clamped) {
  if (experiment == nullptr) {
    return invalid("omc_run_tracking_experiment: experiment is NULL");
  }
  if (stats == nullptr) {
    return invalid("omc_run_tracking_experiment: stats is NULL");
  }
  if (method != OMC_TRACK_MLE_GRID && method != OMC_TRACK_MULTILATERATION) {
    return invalid("omc_run_tracking_experiment: unknown method");
  }
  return guarded([&] {
    const bool keep = est_xy != nullptr || errors != nullptr;
    const auto m = method == OMC_TRACK_MLE_GRID
                       ? omc::tracking::Method::GridMLE
                       : omc::tracking::Method::Multilateration;
    const auto result = omc::sim_harness::run_tracking_experiment(
        experiment->rep, to_cpp(target), m, keep);
    stats->mean_radial_error = result.mean_radial_error;
    stats->rms_error = result.rms_error;
    stats->error_angle = result.error_angle;
    stats->clamped_measurements = result.clamped_measurements;
    if (est_xy != nullptr) {
      for (size_t i = 0; i < result.per_trial_estimates.size(); ++i) {
        est_xy[2 * i] = result.per_trial_estimates[i].x;
        est_xy[2 * i + 1] = result.per_trial_estimates[i].y;
      }
    }
    if (errors != nullptr) {
      for (size_t i = 0; i < result.per_trial_errors.size(); ++i) {
        errors[i] = result.per_trial_errors[i];
      }
    }
    if (clamped != nullptr) *clamped = result.clamped_measurements;
    return OMC_OK;
  });
}

omc_status omc_sweep_link_curves(const omc_experiment* experiment,
                                 omc_curve_kind kind, const double* wz_grid,
                                 size_t grid_count, omc_curve_points** out,
                                 int* skipped) {
  if (experiment == nullptr) {
    return invalid("omc_sweep_link_curves: experiment is NULL");
  }
  if (wz_grid == nullptr && grid_count > 0) {
    return invalid("omc_sweep_link_curves: wz_grid is NULL");
  }
  if (out == nullptr) return invalid("omc_sweep_link_curves: out is NULL");
  if (kind != OMC_CURVE_AVG_POWER && kind != OMC_CURVE_EXPECTED_OUTAGE) {
    return invalid("omc_sweep_link_curves: unknown curve kind");
  }
  return guarded([&] {
    const std::vector<double> grid(wz_grid, wz_grid + grid_count);
    const auto k = kind == OMC_CURVE_AVG_POWER
                       ? omc::sim_harness::CurveKind::AvgPower
                       : omc::sim_harness::CurveKind::ExpectedOutage;
    auto* points = new omc_curve_points;
    try {
      points->rep =
          omc::sim_harness::sweep_link_curves(experiment->rep, k, grid, skipped);
    } catch (...) {
      delete points;
      throw;
    }
    *out = points;
    return OMC_OK;
  });
}

void omc_curve_points_destroy(omc_curve_points* points) { delete points; }

omc_status omc_curve_points_size(const omc_curve_points* points, size_t* out) {
  if (points == nullptr) return invalid("omc_curve_points_size: points is NULL");
  if (out == nullptr) return invalid("omc_curve_points_size: out is NULL");
  *out = points->rep.size();
  return OMC_OK;
}

omc_status omc_curve_points_get(const omc_curve_points* points, size_t index,
                                double* abscissa, double* ordinate,
                                const char** series, const char** method) {
  if (points == nullptr) return invalid("omc_curve_points_get: points is NULL");
  if (index >= points->rep.size()) {
    return invalid("omc_curve_points_get: index out of range");
  }
  const auto& p = points->rep[index];
  if (abscissa != nullptr) *abscissa = p.abscissa;
  if (ordinate != nullptr) *ordinate = p.ordinate;
  if (series != nullptr) *series = p.series.c_str();
  if (method != nullptr) *method = p.method.c_str();
  return OMC_OK;
}

omc_status omc_simulate_trajectory(const omc_experiment* experiment, int steps,
                                   omc_trajectory** out) {
  if (experiment == nullptr) {
    return invalid("omc_simulate_trajectory: experiment is NULL");
  }
  if (out == nullptr) return invalid("omc_simulate_trajectory: out is NULL");
  return guarded([&] {
    auto* trajectory = new omc_trajectory;
    try {
      trajectory->rep =
          omc::sim_harness::simulate_trajectory(experiment->rep, steps);
    } catch (...) {
      delete trajectory;
      throw;
    }
    *out = trajectory;
    return OMC_OK;
  });
}

void omc_trajectory_destroy(omc_trajectory* trajectory) { delete trajectory; }

omc_status omc_trajectory_size(const omc_trajectory* trajectory, size_t* out) {
  if (trajectory == nullptr) {
    return invalid("omc_trajectory_size: trajectory is NULL");
  }
  if (out == nullptr) return invalid("omc_trajectory_size: out is NULL");
  *out = trajectory->rep.size();
  return OMC_OK;
}

omc_status omc_trajectory_get(const omc_trajectory* trajectory, size_t index,
                              int* interval, omc_vec2* target,
                              omc_vec2* laser_center, double* received_power,
                              int* outage) {
  if (trajectory == nullptr) {
    return invalid("omc_trajectory_get: trajectory is NULL");
  }
  if (index >= trajectory->rep.size()) {
    return invalid("omc_trajectory_get: index out of range");
  }
  const auto& rec = trajectory->rep[index];
  if (interval != nullptr) *interval = rec.interval;
  if (target != nullptr) *target = to_c(rec.target);
  if (laser_center != nullptr) *laser_center = to_c(rec.laser_center);
  if (received_power != nullptr) *received_power = rec.received_power;
  if (outage != nullptr) *outage = rec.outage ? 1 : 0;
  return OMC_OK;
}

}  // extern "C"
