// omctrack command-line interface.  Talks to the toolkit exclusively through
// the C API in omctrack.h; all numeric work happens behind that boundary.
//
// Exit codes: 0 success/feasible, 2 usage or config error, 3 infeasible
// design, 4 numeric or rank failure.
#include <array>
#include <cstddef>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "omctrack.h"

#include "config.hpp"
#include "output.hpp"

namespace omcli {
namespace {

// Usage-shaped failures exit 2; numeric/rank/internal failures exit 4.
struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void api_check(omc_status status, const std::string& context) {
  if (status == OMC_OK) return;
  const std::string message = context + ": " + omc_last_error();
  if (status == OMC_ERR_INVALID_ARGUMENT) throw UsageFailure(message);
  throw RuntimeFailure(message);
}

struct Experiment {
  omc_experiment* h = nullptr;
  Experiment() { api_check(omc_experiment_create(&h), "experiment create"); }
  ~Experiment() { omc_experiment_destroy(h); }
  Experiment(const Experiment&) = delete;
  Experiment& operator=(const Experiment&) = delete;
};

struct BeaconArray {
  omc_beacon_array* h = nullptr;
  explicit BeaconArray(double area_A) {
    api_check(omc_beacon_array_create(area_A, &h), "beacon array create");
  }
  ~BeaconArray() { omc_beacon_array_destroy(h); }
  BeaconArray(const BeaconArray&) = delete;
  BeaconArray& operator=(const BeaconArray&) = delete;
};

struct CurvePoints {
  omc_curve_points* h = nullptr;
  ~CurvePoints() { omc_curve_points_destroy(h); }
};

struct Trajectory {
  omc_trajectory* h = nullptr;
  ~Trajectory() { omc_trajectory_destroy(h); }
};

// Command-line flags; the *_set markers record explicit presence so manifest
// defaults only fill flags the user did not give.
struct Flags {
  std::string config;
  std::string out;
  bool out_set = false;
  std::string format = "csv";
  bool format_set = false;
  std::uint64_t seed = 1;
  bool seed_set = false;
  long long trials = 0;
  bool trials_set = false;
  std::string algorithm;
  bool algorithm_set = false;
  std::string curve;
  bool curve_set = false;
  std::string target;
  bool target_set = false;
  bool noiseless = false;
  bool noiseless_set = false;
};

// Manifest invocation fields apply only when the rerun uses the same command.
const json* manifest_fields(const Config& cfg, const std::string& command) {
  if (cfg.manifest.has_value() && cfg.manifest->command == command) {
    return &cfg.manifest->fields;
  }
  return nullptr;
}

template <typename T>
std::optional<T> manifest_get(const json* fields, const char* key) {
  if (fields == nullptr || !fields->contains(key)) return std::nullopt;
  try {
    return fields->at(key).get<T>();
  } catch (...) {
    return std::nullopt;
  }
}

std::string resolve_out(const Flags& flags, const json* inv) {
  if (flags.out_set) return flags.out;
  return manifest_get<std::string>(inv, "out").value_or("");
}

std::string resolve_format(const Flags& flags, const json* inv) {
  if (flags.format_set) return flags.format;
  return manifest_get<std::string>(inv, "format").value_or("csv");
}

std::uint64_t resolve_seed(const Flags& flags, const json* inv,
                           const Config& cfg) {
  if (flags.seed_set) return flags.seed;
  if (auto m = manifest_get<std::uint64_t>(inv, "seed")) return *m;
  if (cfg.simulation.has_value() && cfg.simulation->master_seed.has_value()) {
    return *cfg.simulation->master_seed;
  }
  return 1;
}

std::array<double, 2> parse_target(const std::string& s) {
  const auto comma = s.find(',');
  if (comma != std::string::npos) {
    try {
      std::size_t used_x = 0;
      std::size_t used_y = 0;
      const std::string xs = s.substr(0, comma);
      const std::string ys = s.substr(comma + 1);
      const double x = std::stod(xs, &used_x);
      const double y = std::stod(ys, &used_y);
      if (used_x == xs.size() && used_y == ys.size()) return {x, y};
    } catch (...) {
    }
  }
  throw UsageFailure("invalid --target '" + s + "' (expected 'x,y')");
}

json interval_json(const omc_interval& iv) {
  return {{"lo", iv.lo}, {"hi", iv.hi}, {"empty", iv.is_empty != 0}};
}

void write_run_manifest(const std::string& command, const json& invocation,
                        const Config& cfg,
                        const std::vector<std::string>& outputs,
                        const std::string& out_path) {
  const json manifest =
      make_manifest(command, invocation, cfg.snapshot, outputs);
  write_text_file(manifest_path_for(out_path, command),
                  manifest.dump(2) + "\n");
}

double link_sigma_or_zero(const Config& cfg,
                          std::optional<double> LinkSection::* field) {
  if (cfg.link.has_value() && ((*cfg.link).*field).has_value()) {
    return *((*cfg.link).*field);
  }
  return 0.0;
}

/* ---------------- design ---------------- */

int cmd_design(const Config& cfg, const Flags& flags) {
  const json* inv = manifest_fields(cfg, "design");
  const std::string format = resolve_format(flags, inv);
  const std::string out = resolve_out(flags, inv);

  const double aA = need(cfg.link, &LinkSection::aA, "link.aA");
  const double sigma_t = need(cfg.link, &LinkSection::sigma_t, "link.sigma_t");
  const double sigma_p = need(cfg.link, &LinkSection::sigma_p, "link.sigma_p");
  const double z = need(cfg.link, &LinkSection::z, "link.z");
  const double eta = need(cfg.thresholds, &ThresholdSection::eta, "thresholds.eta");
  const double gamma_th =
      need(cfg.thresholds, &ThresholdSection::gamma_th, "thresholds.gamma_th");
  const double xi = need(cfg.thresholds, &ThresholdSection::xi, "thresholds.xi");

  omc_interval c1{}, c2{}, beam_width{}, divergence{};
  api_check(omc_constraint_average_power(aA, eta, sigma_p, sigma_t, &c1),
            "constraint 1");
  api_check(omc_constraint_outage(aA, gamma_th, xi, sigma_t, sigma_p, &c2),
            "constraint 2");
  api_check(omc_design_rule(aA, eta, gamma_th, xi, sigma_t, sigma_p, z,
                            &beam_width, &divergence),
            "design rule");
  double w_opt = 0.0;
  double min_outage = 0.0;
  api_check(omc_optimal_beam_width(aA, gamma_th, &w_opt), "optimal beam width");
  api_check(omc_expected_outage(w_opt, aA, gamma_th, sigma_t, sigma_p,
                                &min_outage),
            "minimum expected outage");
  // Open-interval semantics: a degenerate interval has no usable interior.
  const bool feasible =
      beam_width.is_empty == 0 && beam_width.hi - beam_width.lo > 2e-9;

  std::ostringstream report;
  report << "design report\n"
         << "  parameters: aA = " << fmt_full(aA) << " W*m^2, eta = "
         << fmt_full(eta) << " W, gamma_th = " << fmt_full(gamma_th)
         << " W, xi = " << fmt_full(xi) << ", sigma_t^2 + sigma_p^2 = "
         << fmt_full(sigma_t * sigma_t + sigma_p * sigma_p)
         << " m^2, z = " << fmt_full(z) << " m\n\n";
  if (c1.is_empty != 0) {
    report << "  constraint 1 (average power >= eta): infeasible"
           << " (eta exceeds the attainable average power)\n";
  } else {
    report << "  constraint 1 (average power >= eta): 0 < w_z < "
           << fmt_fixed(c1.hi, 2) << " m\n";
  }
  if (c2.is_empty != 0) {
    report << "  constraint 2 (expected outage <= xi): infeasible"
           << " (xi is below the attainable minimum)\n";
  } else {
    report << "  constraint 2 (expected outage <= xi): " << fmt_fixed(c2.lo, 2)
           << " < w_z < " << fmt_fixed(c2.hi, 2) << " m\n";
  }
  if (feasible) {
    report << "  feasible beam width: " << fmt_fixed(beam_width.lo, 2)
           << " < w_z < " << fmt_fixed(beam_width.hi, 2) << " m\n"
           << "  divergence angle at z = " << fmt_full(z) << " m: "
           << fmt_sci(divergence.lo, 2) << " < phi < "
           << fmt_sci(divergence.hi, 2) << " rad\n";
  } else {
    report << "  feasible beam width: empty\n";
  }
  report << "  optimal beam width (minimum expected outage): "
         << fmt_fixed(w_opt, 2) << " m\n"
         << "  minimum attainable expected outage: " << fmt_fixed(min_outage, 4)
         << "\n\n"
         << (feasible ? "  design feasible\n" : "  design infeasible\n");

  const json result = {
      {"parameters",
       {{"aA", aA},
        {"eta", eta},
        {"gamma_th", gamma_th},
        {"xi", xi},
        {"sigma_t", sigma_t},
        {"sigma_p", sigma_p},
        {"z", z}}},
      {"constraint_average_power", interval_json(c1)},
      {"constraint_outage", interval_json(c2)},
      {"beam_width", interval_json(beam_width)},
      {"divergence", interval_json(divergence)},
      {"optimal_beam_width", w_opt},
      {"min_expected_outage", min_outage},
      {"feasible", feasible},
  };
  const std::string content =
      format == "json" ? result.dump(2) + "\n" : report.str();
  std::cout << content;
  std::vector<std::string> outputs;
  if (!out.empty()) {
    write_text_file(out, content);
    outputs.push_back(out);
  }
  json invocation = {{"format", format}};
  if (!out.empty()) invocation["out"] = out;
  write_run_manifest("design", invocation, cfg, outputs, out);
  return feasible ? 0 : 3;
}

/* ---------------- sweep ---------------- */

int cmd_sweep(const Config& cfg, const Flags& flags) {
  const json* inv = manifest_fields(cfg, "sweep");
  const std::string format = resolve_format(flags, inv);
  const std::string out = resolve_out(flags, inv);
  const SweepSection& sw = need_section(cfg.sweep, "sweep");

  std::string curve;
  if (flags.curve_set) {
    curve = flags.curve;
  } else if (auto m = manifest_get<std::string>(inv, "curve")) {
    curve = *m;
  } else if (sw.curve.has_value()) {
    curve = *sw.curve;
  } else {
    throw ConfigError("missing field 'sweep.curve'");
  }
  if (curve != "avg_power" && curve != "expected_outage") {
    throw UsageFailure("unknown curve '" + curve +
                       "' (expected avg_power or expected_outage)");
  }
  const bool outage_curve = curve == "expected_outage";

  Experiment exp;
  double gamma_th = 1.0;
  if (outage_curve) {
    gamma_th = need(cfg.thresholds, &ThresholdSection::gamma_th,
                    "thresholds.gamma_th");
  }
  const double eta =
      cfg.thresholds.has_value() ? cfg.thresholds->eta.value_or(0.0) : 0.0;
  const double xi =
      cfg.thresholds.has_value() ? cfg.thresholds->xi.value_or(0.5) : 0.5;
  api_check(omc_experiment_set_thresholds(exp.h, eta, gamma_th, xi),
            "set thresholds");

  auto series_sigma = [&cfg](const std::optional<double>& own,
                             std::optional<double> LinkSection::* fallback,
                             const std::string& name) {
    if (own.has_value()) return *own;
    if (cfg.link.has_value() && ((*cfg.link).*fallback).has_value()) {
      return *((*cfg.link).*fallback);
    }
    throw ConfigError("missing field '" + name + "'");
  };
  for (std::size_t i = 0; i < sw.series.size(); ++i) {
    const SweepSeries& s = sw.series[i];
    const std::string base = "sweep.series[" + std::to_string(i) + "]";
    const double sigma_t =
        series_sigma(s.sigma_t, &LinkSection::sigma_t, base + ".sigma_t");
    const double sigma_p =
        series_sigma(s.sigma_p, &LinkSection::sigma_p, base + ".sigma_p");
    api_check(omc_experiment_add_series(exp.h, s.aA, sigma_t, sigma_p,
                                        s.label.c_str()),
              "add series");
  }

  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(sw.wz_count));
  for (long long i = 0; i < sw.wz_count; ++i) {
    grid.push_back(sw.wz_count == 1
                       ? sw.wz_min
                       : sw.wz_min + (sw.wz_max - sw.wz_min) *
                                         static_cast<double>(i) /
                                         static_cast<double>(sw.wz_count - 1));
  }
  CurvePoints points;
  int skipped = 0;
  api_check(omc_sweep_link_curves(
                exp.h, outage_curve ? OMC_CURVE_EXPECTED_OUTAGE : OMC_CURVE_AVG_POWER,
                grid.data(), grid.size(), &points.h, &skipped),
            "sweep");
  std::size_t count = 0;
  api_check(omc_curve_points_size(points.h, &count), "curve point count");

  std::string content;
  if (format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < count; ++i) {
      double w_z = 0.0, value = 0.0;
      const char* series = nullptr;
      const char* method = nullptr;
      api_check(omc_curve_points_get(points.h, i, &w_z, &value, &series, &method),
                "curve point");
      rows.push_back({{"w_z", w_z},
                      {"value", value},
                      {"series", series},
                      {"method", method}});
    }
    content = rows.dump(2) + "\n";
  } else {
    std::ostringstream os;
    CsvWriter csv(os);
    csv.row({"w_z", "value", "series", "method"});
    for (std::size_t i = 0; i < count; ++i) {
      double w_z = 0.0, value = 0.0;
      const char* series = nullptr;
      const char* method = nullptr;
      api_check(omc_curve_points_get(points.h, i, &w_z, &value, &series, &method),
                "curve point");
      csv.row({fmt_full(w_z), fmt_full(value), series, method});
    }
    content = os.str();
  }
  std::vector<std::string> outputs;
  if (out.empty()) {
    std::cout << content;
  } else {
    write_text_file(out, content);
    outputs.push_back(out);
  }
  if (skipped > 0) {
    std::cerr << "note: skipped " << skipped
              << " grid points at or above the maximum feasible beam width\n";
  }
  json invocation = {{"curve", curve}, {"format", format}};
  if (!out.empty()) invocation["out"] = out;
  write_run_manifest("sweep", invocation, cfg, outputs, out);
  return 0;
}

/* ---------------- track ---------------- */

int cmd_track(const Config& cfg, const Flags& flags) {
  const json* inv = manifest_fields(cfg, "track");
  const std::string format = resolve_format(flags, inv);
  const std::string out = resolve_out(flags, inv);

  std::string algorithm = "mle-grid";
  if (flags.algorithm_set) {
    algorithm = flags.algorithm;
  } else if (auto m = manifest_get<std::string>(inv, "algorithm")) {
    algorithm = *m;
  }
  if (algorithm != "mle-grid" && algorithm != "multilateration") {
    throw UsageFailure("unknown algorithm '" + algorithm +
                       "' (expected mle-grid or multilateration)");
  }
  const bool mle = algorithm == "mle-grid";

  bool noiseless = false;
  if (flags.noiseless_set) {
    noiseless = flags.noiseless;
  } else if (auto m = manifest_get<bool>(inv, "noiseless")) {
    noiseless = *m;
  }

  std::array<double, 2> target{};
  if (flags.target_set) {
    target = parse_target(flags.target);
  } else if (auto m = manifest_get<std::array<double, 2>>(inv, "target")) {
    target = *m;
  } else if (cfg.target.has_value()) {
    target = *cfg.target;
  } else {
    throw ConfigError("missing field 'target'");
  }

  long long trials = 10000;
  if (flags.trials_set) {
    trials = flags.trials;
  } else if (auto m = manifest_get<long long>(inv, "trials")) {
    trials = *m;
  } else if (cfg.simulation.has_value() && cfg.simulation->trials.has_value()) {
    trials = *cfg.simulation->trials;
  }
  if (trials < 1 || trials > 100000000) {
    throw UsageFailure("trial count must be between 1 and 1e8");
  }
  const std::uint64_t seed = resolve_seed(flags, inv, cfg);

  const BeaconSection& beacons = need_section(cfg.beacons, "beacons");
  double sigma_n = 0.0;
  if (!noiseless) {
    sigma_n = need(cfg.link, &LinkSection::sigma_n, "link.sigma_n");
  }

  BeaconArray array(1.0);
  for (const auto& c : beacons.centers) {
    api_check(omc_beacon_array_add(array.h, beacons.aA, beacons.w_z,
                                   {c[0], c[1]}),
              "add beacon");
  }
  Experiment exp;
  api_check(omc_experiment_set_array(exp.h, array.h), "set beacon array");
  api_check(omc_experiment_set_sigmas(
                exp.h, link_sigma_or_zero(cfg, &LinkSection::sigma_t),
                link_sigma_or_zero(cfg, &LinkSection::sigma_p), sigma_n),
            "set sigmas");
  api_check(omc_experiment_set_trials(exp.h, static_cast<int>(trials)),
            "set trials");
  api_check(omc_experiment_set_seed(exp.h, seed), "set seed");
  if (cfg.link.has_value() && cfg.link->z.has_value()) {
    api_check(omc_experiment_set_link_distance(exp.h, *cfg.link->z), "set z");
  }
  if (mle) {
    const GridSection& g = need_section(cfg.grid, "grid");
    api_check(omc_experiment_set_grid(
                  exp.h, {g.x_min, g.x_max, g.y_min, g.y_max, g.step}),
              "set grid");
  }

  omc_trial_stats stats{};
  std::vector<double> est_xy;
  std::vector<double> errors;
  double* est_ptr = nullptr;
  double* err_ptr = nullptr;
  if (!out.empty()) {
    est_xy.resize(static_cast<std::size_t>(2 * trials));
    errors.resize(static_cast<std::size_t>(trials));
    est_ptr = est_xy.data();
    err_ptr = errors.data();
  }
  api_check(omc_run_tracking_experiment(
                exp.h, {target[0], target[1]},
                mle ? OMC_TRACK_MLE_GRID : OMC_TRACK_MULTILATERATION, &stats,
                est_ptr, err_ptr, nullptr),
            "tracking experiment");

  std::ostringstream report;
  report << "tracking report\n"
         << "  algorithm:            " << algorithm << "\n"
         << "  target:               (" << fmt_full(target[0]) << ", "
         << fmt_full(target[1]) << ")\n"
         << "  trials:               " << trials << "\n"
         << "  seed:                 " << seed << "\n"
         << "  sigma_n:              " << fmt_full(sigma_n)
         << (noiseless ? " W (noiseless)" : " W") << "\n"
         << "  mean radial error:    " << fmt_full(stats.mean_radial_error)
         << " m\n"
         << "  rms error:            " << fmt_full(stats.rms_error) << " m\n"
         << "  error angle:          " << fmt_full(stats.error_angle)
         << " rad\n"
         << "  clamped measurements: " << stats.clamped_measurements << "\n";

  json result = {{"algorithm", algorithm},
                 {"target", {target[0], target[1]}},
                 {"trial_count", trials},
                 {"seed", seed},
                 {"sigma_n", sigma_n},
                 {"noiseless", noiseless},
                 {"stats",
                  {{"mean_radial_error", stats.mean_radial_error},
                   {"rms_error", stats.rms_error},
                   {"error_angle", stats.error_angle},
                   {"clamped_measurements", stats.clamped_measurements}}}};
  std::cout << (format == "json" ? result.dump(2) + "\n" : report.str());

  std::vector<std::string> outputs;
  if (!out.empty()) {
    std::string content;
    if (format == "json") {
      json rows = json::array();
      for (long long t = 0; t < trials; ++t) {
        const std::size_t i = static_cast<std::size_t>(t);
        rows.push_back({{"trial", t},
                        {"est_x", est_xy[2 * i]},
                        {"est_y", est_xy[2 * i + 1]},
                        {"error", errors[i]}});
      }
      json full = result;
      full["trials"] = rows;
      content = full.dump(2) + "\n";
    } else {
      std::ostringstream os;
      CsvWriter csv(os);
      csv.row({"trial", "est_x", "est_y", "error"});
      for (long long t = 0; t < trials; ++t) {
        const std::size_t i = static_cast<std::size_t>(t);
        csv.row({std::to_string(t), fmt_full(est_xy[2 * i]),
                 fmt_full(est_xy[2 * i + 1]), fmt_full(errors[i])});
      }
      content = os.str();
    }
    write_text_file(out, content);
    outputs.push_back(out);
  }
  json invocation = {{"algorithm", algorithm},
                     {"target", {target[0], target[1]}},
                     {"trials", trials},
                     {"seed", seed},
                     {"noiseless", noiseless},
                     {"format", format}};
  if (!out.empty()) invocation["out"] = out;
  write_run_manifest("track", invocation, cfg, outputs, out);
  return 0;
}

/* ---------------- error-bound ---------------- */

int cmd_error_bound(const Config& cfg, const Flags& flags) {
  const json* inv = manifest_fields(cfg, "error-bound");
  const std::string format = resolve_format(flags, inv);
  const std::string out = resolve_out(flags, inv);

  const BeaconSection& beacons = need_section(cfg.beacons, "beacons");
  const double sigma_n = need(cfg.link, &LinkSection::sigma_n, "link.sigma_n");
  if (!cfg.points.has_value()) throw ConfigError("missing field 'points'");

  BeaconArray array(1.0);
  for (const auto& c : beacons.centers) {
    api_check(omc_beacon_array_add(array.h, beacons.aA, beacons.w_z,
                                   {c[0], c[1]}),
              "add beacon");
  }

  struct Row {
    std::array<double, 2> point;
    bool ok;
    double error;
    std::string message;
  };
  std::vector<Row> rows;
  for (const auto& p : *cfg.points) {
    double value = 0.0;
    const omc_status status =
        omc_theoretical_error(array.h, {p[0], p[1]}, sigma_n, &value);
    if (status == OMC_OK) {
      rows.push_back({p, true, value, {}});
    } else if (status == OMC_ERR_RANK_DEFICIENT) {
      // Per-point rank failures are reported without aborting the rest.
      rows.push_back({p, false, 0.0, omc_last_error()});
    } else {
      api_check(status, "theoretical error");
    }
  }

  std::ostringstream report;
  report << "theoretical error bounds\n"
         << "  sigma_n: " << fmt_full(sigma_n) << " W\n";
  for (const Row& r : rows) {
    report << "  (" << fmt_full(r.point[0]) << ", " << fmt_full(r.point[1])
           << ")  ";
    if (r.ok) {
      report << fmt_full(r.error) << "\n";
    } else {
      report << "rank deficient: " << r.message << "\n";
    }
  }

  json result = json::array();
  for (const Row& r : rows) {
    json entry = {{"x", r.point[0]}, {"y", r.point[1]}};
    if (r.ok) {
      entry["error"] = r.error;
    } else {
      entry["error"] = nullptr;
      entry["message"] = r.message;
    }
    result.push_back(entry);
  }
  std::cout << (format == "json" ? result.dump(2) + "\n" : report.str());

  std::vector<std::string> outputs;
  if (!out.empty()) {
    std::string content;
    if (format == "json") {
      content = result.dump(2) + "\n";
    } else {
      std::ostringstream os;
      CsvWriter csv(os);
      csv.row({"x", "y", "error"});
      for (const Row& r : rows) {
        csv.row({fmt_full(r.point[0]), fmt_full(r.point[1]),
                 r.ok ? fmt_full(r.error) : "nan"});
      }
      content = os.str();
    }
    write_text_file(out, content);
    outputs.push_back(out);
  }
  json invocation = {{"format", format}};
  if (!out.empty()) invocation["out"] = out;
  write_run_manifest("error-bound", invocation, cfg, outputs, out);

  for (const Row& r : rows) {
    if (!r.ok) return 4;
  }
  return 0;
}

/* ---------------- simulate ---------------- */

int cmd_simulate(const Config& cfg, const Flags& flags) {
  const json* inv = manifest_fields(cfg, "simulate");
  const std::string format = resolve_format(flags, inv);
  const std::string out = resolve_out(flags, inv);

  const double aA = need(cfg.link, &LinkSection::aA, "link.aA");
  const double w_z = need(cfg.link, &LinkSection::w_z, "link.w_z");
  const double sigma_t = need(cfg.link, &LinkSection::sigma_t, "link.sigma_t");
  const double sigma_p = need(cfg.link, &LinkSection::sigma_p, "link.sigma_p");
  const double gamma_th =
      need(cfg.thresholds, &ThresholdSection::gamma_th, "thresholds.gamma_th");

  long long steps = 0;
  if (flags.trials_set) {
    steps = flags.trials;
  } else if (auto m = manifest_get<long long>(inv, "steps")) {
    steps = *m;
  } else if (cfg.simulation.has_value() && cfg.simulation->steps.has_value()) {
    steps = *cfg.simulation->steps;
  } else {
    throw ConfigError("missing field 'simulation.steps'");
  }
  if (steps < 1 || steps > 100000000) {
    throw UsageFailure("step count must be between 1 and 1e8");
  }
  const std::uint64_t seed = resolve_seed(flags, inv, cfg);

  Experiment exp;
  api_check(omc_experiment_set_main_beam(exp.h, aA, w_z), "set main beam");
  api_check(omc_experiment_set_receiver_area(exp.h, 1.0), "set receiver area");
  api_check(omc_experiment_set_sigmas(exp.h, sigma_t, sigma_p, 0.0),
            "set sigmas");
  const double eta =
      cfg.thresholds.has_value() ? cfg.thresholds->eta.value_or(0.0) : 0.0;
  const double xi =
      cfg.thresholds.has_value() ? cfg.thresholds->xi.value_or(0.5) : 0.5;
  api_check(omc_experiment_set_thresholds(exp.h, eta, gamma_th, xi),
            "set thresholds");
  api_check(omc_experiment_set_seed(exp.h, seed), "set seed");

  Trajectory traj;
  api_check(omc_simulate_trajectory(exp.h, static_cast<int>(steps), &traj.h),
            "simulate trajectory");
  std::size_t count = 0;
  api_check(omc_trajectory_size(traj.h, &count), "trajectory size");

  long long outages = 0;
  double power_sum = 0.0;
  std::ostringstream os;
  CsvWriter csv(os);
  json rows = json::array();
  const bool want_json = format == "json";
  if (!want_json) {
    csv.row({"interval", "target_x", "target_y", "center_x", "center_y",
             "power", "outage"});
  }
  for (std::size_t i = 0; i < count; ++i) {
    int interval = 0;
    omc_vec2 target{}, center{};
    double power = 0.0;
    int outage = 0;
    api_check(omc_trajectory_get(traj.h, i, &interval, &target, &center,
                                 &power, &outage),
              "trajectory record");
    outages += outage;
    power_sum += power;
    if (want_json) {
      rows.push_back({{"interval", interval},
                      {"target_x", target.x},
                      {"target_y", target.y},
                      {"center_x", center.x},
                      {"center_y", center.y},
                      {"power", power},
                      {"outage", outage != 0}});
    } else {
      csv.row({std::to_string(interval), fmt_full(target.x), fmt_full(target.y),
               fmt_full(center.x), fmt_full(center.y), fmt_full(power),
               std::to_string(outage)});
    }
  }
  const double empirical_outage =
      static_cast<double>(outages) / static_cast<double>(count);
  const double mean_power = power_sum / static_cast<double>(count);

  double avg_power_cf = 0.0;
  api_check(omc_average_power(aA, sigma_p, sigma_t, w_z, &avg_power_cf),
            "average power");
  double expected_outage_cf = 0.0;
  const bool outage_cf_ok =
      omc_expected_outage(w_z, aA, gamma_th, sigma_t, sigma_p,
                          &expected_outage_cf) == OMC_OK;

  std::ostringstream report;
  report << "trajectory summary\n"
         << "  steps:                       " << steps << "\n"
         << "  seed:                        " << seed << "\n"
         << "  empirical outage rate:       " << fmt_full(empirical_outage)
         << "\n"
         << "  mean received power:         " << fmt_full(mean_power)
         << " W\n"
         << "  closed-form average power:   " << fmt_full(avg_power_cf)
         << " W\n";
  if (outage_cf_ok) {
    report << "  closed-form expected outage: " << fmt_full(expected_outage_cf)
           << "\n";
  } else {
    report << "  closed-form expected outage: undefined for this beam width\n";
  }

  json summary = {{"steps", steps},
                  {"seed", seed},
                  {"empirical_outage_rate", empirical_outage},
                  {"mean_received_power", mean_power},
                  {"closed_form_average_power", avg_power_cf}};
  if (outage_cf_ok) {
    summary["closed_form_expected_outage"] = expected_outage_cf;
  }
  std::cout << (want_json ? summary.dump(2) + "\n" : report.str());

  std::vector<std::string> outputs;
  if (!out.empty()) {
    std::string content;
    if (want_json) {
      json full = summary;
      full["records"] = rows;
      content = full.dump(2) + "\n";
    } else {
      content = os.str();
    }
    write_text_file(out, content);
    outputs.push_back(out);
  }
  json invocation = {{"steps", steps}, {"seed", seed}, {"format", format}};
  if (!out.empty()) invocation["out"] = out;
  write_run_manifest("simulate", invocation, cfg, outputs, out);
  return 0;
}

}  // namespace
}  // namespace omcli

int main(int argc, char** argv) {
  using namespace omcli;
  CLI::App app{std::string("omctrack ") + omc_version() +
               ": link design and tracking simulation for short-range optical"
               " mobile links"};
  app.require_subcommand(1);
  app.set_version_flag("--version", omc_version());

  Flags flags;
  CLI::App* design = app.add_subcommand("design", "evaluate the beam-width design rule");
  CLI::App* sweep = app.add_subcommand("sweep", "emit link curves over a beam-width grid");
  CLI::App* track = app.add_subcommand("track", "Monte Carlo tracking experiment at a target point");
  CLI::App* error_bound = app.add_subcommand("error-bound", "theoretical tracking error at configured points");
  CLI::App* simulate = app.add_subcommand("simulate", "simulate a mobility trajectory under ideal tracking");
  for (CLI::App* sub : {design, sweep, track, error_bound, simulate}) {
    sub->add_option("--config", flags.config,
                    "config file (path, or bare name under $OMCTRACK_CONFIG_DIR)")
        ->required();
    sub->add_option("--out", flags.out, "output file path");
    sub->add_option("--format", flags.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", flags.seed, "master seed override");
    sub->add_option("--trials", flags.trials,
                    "trial count override (simulate: trajectory step count)");
  }
  sweep->add_option("--curve", flags.curve, "curve selector")
      ->check(CLI::IsMember({"avg_power", "expected_outage"}));
  track->add_option("--algorithm", flags.algorithm, "tracking algorithm")
      ->check(CLI::IsMember({"mle-grid", "multilateration"}));
  track->add_option("--target", flags.target, "target point as 'x,y'");
  track->add_flag("--noiseless", flags.noiseless,
                  "disable measurement noise generation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const auto was_given = [sub](const std::string& name) {
    const CLI::Option* option = sub->get_option_no_throw(name);
    return option != nullptr && option->count() > 0;
  };
  flags.out_set = was_given("--out");
  flags.format_set = was_given("--format");
  flags.seed_set = was_given("--seed");
  flags.trials_set = was_given("--trials");
  flags.algorithm_set = was_given("--algorithm");
  flags.curve_set = was_given("--curve");
  flags.target_set = was_given("--target");
  flags.noiseless_set = was_given("--noiseless");

  try {
    const Config cfg = load_config(flags.config);
    const std::string& name = sub->get_name();
    if (name == "design") return cmd_design(cfg, flags);
    if (name == "sweep") return cmd_sweep(cfg, flags);
    if (name == "track") return cmd_track(cfg, flags);
    if (name == "error-bound") return cmd_error_bound(cfg, flags);
    if (name == "simulate") return cmd_simulate(cfg, flags);
    std::cerr << "error: unknown subcommand '" << name << "'\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const RuntimeFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
