// Config file loading for the omctrack CLI.
//
// Configs are JSON with nested sections mirroring the toolkit's parameter
// names (aA, sigma_t, sigma_p, sigma_n, w_z, z, eta, gamma_th, xi, beacon
// center list).  Unknown keys are rejected; missing required fields are
// reported by their dotted path.  A run manifest (written next to every
// output) is itself accepted as a config: its embedded snapshot becomes the
// config and its recorded invocation supplies flag defaults.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace omcli {

using nlohmann::json;

// Raised for any config problem (resolution, parse, schema); exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LinkSection {
  std::optional<double> z, aA, w_z, sigma_t, sigma_p, sigma_n;
};

struct ThresholdSection {
  std::optional<double> eta, gamma_th, xi;
};

// All fields required when the section is present.
struct BeaconSection {
  double aA = 0.0;
  double w_z = 0.0;
  std::vector<std::array<double, 2>> centers;
};

struct GridSection {
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0, step = 0.0;
};

struct SweepSeries {
  double aA = 0.0;
  std::optional<double> sigma_t, sigma_p;
  std::string label;
};

struct SweepSection {
  std::optional<std::string> curve;  // "avg_power" or "expected_outage"
  double wz_min = 0.0, wz_max = 0.0;
  long long wz_count = 0;
  std::vector<SweepSeries> series;
};

struct SimulationSection {
  std::optional<long long> trials, steps;
  std::optional<std::uint64_t> master_seed;
};

// Invocation recorded in a manifest; fields default un-set CLI flags when the
// rerun uses the same subcommand.
struct Invocation {
  std::string command;
  json fields = json::object();
};

struct Config {
  std::optional<LinkSection> link;
  std::optional<ThresholdSection> thresholds;
  std::optional<BeaconSection> beacons;
  std::optional<GridSection> grid;
  std::optional<SweepSection> sweep;
  std::optional<SimulationSection> simulation;
  std::optional<std::array<double, 2>> target;
  std::optional<std::vector<std::array<double, 2>>> points;
  json snapshot;                        // the resolved config object
  std::optional<Invocation> manifest;   // set when loaded from a manifest
};

// Resolves path_arg (literal path, or bare name looked up under
// $OMCTRACK_CONFIG_DIR), parses, and validates.  Throws ConfigError.
Config load_config(const std::string& path_arg);

// Field accessors for cross-command requirements: throw ConfigError naming
// the missing field's dotted path.
template <typename Section>
double need(const std::optional<Section>& section,
            std::optional<double> Section::* field, const std::string& name) {
  if (section.has_value() && ((*section).*field).has_value()) {
    return *((*section).*field);
  }
  throw ConfigError("missing field '" + name + "'");
}

template <typename Section>
const Section& need_section(const std::optional<Section>& section,
                            const std::string& name) {
  if (section.has_value()) return *section;
  throw ConfigError("missing field '" + name + "'");
}

}  // namespace omcli
