/* omctrack C API: link design and tracking simulation for short-range
 * free-space optical mobile links.
 *
 * All functions return omc_status; results go through out-parameters.
 * Handles returned by *_create / *_run functions are owned by the caller
 * and must be released with the matching *_destroy function.  Passing NULL
 * where an output pointer is required yields OMC_ERR_INVALID_ARGUMENT.
 *
 * Error details for the most recent failure on the calling thread are
 * available from omc_last_error(); the pointer stays valid until the next
 * API call on that thread.
 */
#ifndef OMCTRACK_H
#define OMCTRACK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum omc_status {
  OMC_OK = 0,
  OMC_ERR_INVALID_ARGUMENT = 1,
  OMC_ERR_DOMAIN = 2,
  OMC_ERR_RANK_DEFICIENT = 3,
  OMC_ERR_ALLOC = 4,
  OMC_ERR_INTERNAL = 5
} omc_status;

typedef enum omc_lambert_branch {
  OMC_LAMBERT_PRINCIPAL = 0,
  OMC_LAMBERT_NEGATIVE_ONE = 1
} omc_lambert_branch;

typedef enum omc_tracking_method {
  OMC_TRACK_MLE_GRID = 0,
  OMC_TRACK_MULTILATERATION = 1
} omc_tracking_method;

typedef enum omc_curve_kind {
  OMC_CURVE_AVG_POWER = 0,
  OMC_CURVE_EXPECTED_OUTAGE = 1
} omc_curve_kind;

typedef struct omc_vec2 {
  double x;
  double y;
} omc_vec2;

/* Open interval (lo, hi); is_empty nonzero means no feasible value exists. */
typedef struct omc_interval {
  double lo;
  double hi;
  int is_empty;
} omc_interval;

typedef struct omc_grid {
  double x_min;
  double x_max;
  double y_min;
  double y_max;
  double step;
} omc_grid;

typedef struct omc_estimate {
  omc_vec2 point;
  double log_likelihood;     /* valid only when has_log_likelihood != 0 */
  int has_log_likelihood;
  int clamped_measurements;  /* multilateration: readings clamped to (floor, peak] */
} omc_estimate;

typedef struct omc_trial_stats {
  double mean_radial_error;
  double rms_error;
  double error_angle;
  int clamped_measurements;
} omc_trial_stats;

/* Opaque handles. */
typedef struct omc_stream omc_stream;
typedef struct omc_beacon_array omc_beacon_array;
typedef struct omc_experiment omc_experiment;
typedef struct omc_curve_points omc_curve_points;
typedef struct omc_trajectory omc_trajectory;

/* ------------------------------------------------------------------ */
/* Library metadata and error reporting                               */
/* ------------------------------------------------------------------ */

const char* omc_version(void);
const char* omc_status_name(omc_status status);
/* Message for the last failing call on this thread; empty string if none. */
const char* omc_last_error(void);

/* ------------------------------------------------------------------ */
/* Special functions                                                  */
/* ------------------------------------------------------------------ */

omc_status omc_marcum_q1(double a, double b, double* out);
omc_status omc_lambert_w(double x, omc_lambert_branch branch, double* out);

/* ------------------------------------------------------------------ */
/* Beam model                                                         */
/* ------------------------------------------------------------------ */

omc_status omc_beam_width_at(double z, double phi, double* out);
omc_status omc_intensity(double power_coeff_a, double beam_width_wz,
                         omc_vec2 center, omc_vec2 point, double* out);
omc_status omc_received_power(double power_coeff_a, double beam_width_wz,
                              omc_vec2 center, double area_A, omc_vec2 point,
                              double* out);
omc_status omc_receiver_area_is_small(double area_A, double beam_width_wz,
                                      int* out);
omc_status omc_project_to_reference(double z, double l, double phi, double* out);

/* ------------------------------------------------------------------ */
/* Link design                                                        */
/* ------------------------------------------------------------------ */

omc_status omc_average_power(double aA, double sigma_p, double sigma_t,
                             double w_z, double* out);
omc_status omc_constraint_average_power(double aA, double eta, double sigma_p,
                                        double sigma_t, omc_interval* out);
omc_status omc_max_feasible_width(double aA, double gamma_th, double* out);
omc_status omc_feasible_radius(double aA, double gamma_th, double w_z,
                               double* out);
omc_status omc_outage_probability(double r, double sigma_t, double aA,
                                  double gamma_th, double w_z, double* out);
omc_status omc_expected_outage(double w_z, double aA, double gamma_th,
                               double sigma_t, double sigma_p, double* out);
omc_status omc_expected_outage_numeric(double w_z, double aA, double gamma_th,
                                       double sigma_t, double sigma_p,
                                       double* out);
omc_status omc_optimal_beam_width(double aA, double gamma_th, double* out);
omc_status omc_constraint_outage(double aA, double gamma_th, double xi,
                                 double sigma_t, double sigma_p,
                                 omc_interval* out);
/* Feasible beam-width interval (both constraints) plus the matching
 * divergence-angle interval at link distance z. */
omc_status omc_design_rule(double aA, double eta, double gamma_th, double xi,
                           double sigma_t, double sigma_p, double z,
                           omc_interval* beam_width, omc_interval* divergence);

/* ------------------------------------------------------------------ */
/* Random streams                                                     */
/* ------------------------------------------------------------------ */

omc_status omc_stream_create(uint64_t seed, omc_stream** out);
void omc_stream_destroy(omc_stream* stream);
omc_status omc_stream_substream(const omc_stream* stream, uint64_t index,
                                omc_stream** out);
omc_status omc_stream_uniform(omc_stream* stream, double* out);
omc_status omc_stream_gaussian(omc_stream* stream, double sigma, double* out);
omc_status omc_stream_rayleigh(omc_stream* stream, double sigma, double* out);
omc_status omc_sample_target_step(omc_stream* stream, omc_vec2 previous,
                                  double sigma_t, omc_vec2* out);
omc_status omc_sample_pointing_offset(omc_stream* stream, double sigma_p,
                                      omc_vec2* out);

/* ------------------------------------------------------------------ */
/* Beacon arrays and tracking                                         */
/* ------------------------------------------------------------------ */

omc_status omc_beacon_array_create(double area_A, omc_beacon_array** out);
void omc_beacon_array_destroy(omc_beacon_array* array);
omc_status omc_beacon_array_add(omc_beacon_array* array, double power_coeff_a,
                                double beam_width_wz, omc_vec2 center);
omc_status omc_beacon_array_size(const omc_beacon_array* array, size_t* out);

omc_status omc_log_likelihood(const double* measurements, size_t count,
                              const omc_beacon_array* array, double sigma_n,
                              omc_vec2 candidate, double* out);
omc_status omc_track_mle_grid(const double* measurements, size_t count,
                              const omc_beacon_array* array, double sigma_n,
                              omc_grid grid, int refine, omc_estimate* out);
omc_status omc_estimate_distance(double power, double power_coeff_a,
                                 double beam_width_wz, double area_A,
                                 double* out, int* clamped);
omc_status omc_track_multilateration(const double* measurements, size_t count,
                                     const omc_beacon_array* array,
                                     omc_estimate* out);
/* Writes 2*count doubles (row-major rows of (d/dx, d/dy)) into jacobian_out. */
omc_status omc_jacobian(const omc_beacon_array* array, omc_vec2 point,
                        double* jacobian_out, size_t count);
omc_status omc_theoretical_error(const omc_beacon_array* array, omc_vec2 point,
                                 double sigma_n, double* out);

/* ------------------------------------------------------------------ */
/* Experiments (Monte Carlo harness)                                  */
/* ------------------------------------------------------------------ */

omc_status omc_experiment_create(omc_experiment** out);
void omc_experiment_destroy(omc_experiment* experiment);
/* The array contents are copied; the caller keeps ownership of `array`. */
omc_status omc_experiment_set_array(omc_experiment* experiment,
                                    const omc_beacon_array* array);
omc_status omc_experiment_set_main_beam(omc_experiment* experiment,
                                        double power_coeff_a,
                                        double beam_width_wz);
omc_status omc_experiment_set_receiver_area(omc_experiment* experiment,
                                            double area_A);
omc_status omc_experiment_set_sigmas(omc_experiment* experiment, double sigma_t,
                                     double sigma_p, double sigma_n);
omc_status omc_experiment_set_thresholds(omc_experiment* experiment, double eta,
                                         double gamma_th, double xi);
omc_status omc_experiment_set_link_distance(omc_experiment* experiment,
                                            double z);
omc_status omc_experiment_set_trials(omc_experiment* experiment, int trials);
omc_status omc_experiment_set_seed(omc_experiment* experiment, uint64_t seed);
omc_status omc_experiment_set_grid(omc_experiment* experiment, omc_grid grid);
omc_status omc_experiment_add_series(omc_experiment* experiment, double aA,
                                     double sigma_t, double sigma_p,
                                     const char* label);

/* est_xy (2*trials doubles), errors (trials doubles), and clamped may each be
 * NULL when the per-trial data is not wanted. */
omc_status omc_run_tracking_experiment(const omc_experiment* experiment,
                                       omc_vec2 target,
                                       omc_tracking_method method,
                                       omc_trial_stats* stats, double* est_xy,
                                       double* errors, int* clamped);

omc_status omc_sweep_link_curves(const omc_experiment* experiment,
                                 omc_curve_kind kind, const double* wz_grid,
                                 size_t grid_count, omc_curve_points** out,
                                 int* skipped);
void omc_curve_points_destroy(omc_curve_points* points);
omc_status omc_curve_points_size(const omc_curve_points* points, size_t* out);
/* series/method strings are owned by the handle and live until destroy. */
omc_status omc_curve_points_get(const omc_curve_points* points, size_t index,
                                double* abscissa, double* ordinate,
                                const char** series, const char** method);

omc_status omc_simulate_trajectory(const omc_experiment* experiment, int steps,
                                   omc_trajectory** out);
void omc_trajectory_destroy(omc_trajectory* trajectory);
omc_status omc_trajectory_size(const omc_trajectory* trajectory, size_t* out);
omc_status omc_trajectory_get(const omc_trajectory* trajectory, size_t index,
                              int* interval, omc_vec2* target,
                              omc_vec2* laser_center, double* received_power,
                              int* outage);

#ifdef __cplusplus
}
#endif

#endif /* OMCTRACK_H */
