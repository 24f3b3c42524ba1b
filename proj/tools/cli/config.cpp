#include "config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

namespace omcli {

namespace {

std::string qualify(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key '" + qualify(path, item.key()) + "'");
    }
  }
}

const json& require_object(const json& j, const std::string& name) {
  if (!j.is_object()) {
    throw ConfigError("field '" + name + "' must be an object");
  }
  return j;
}

double as_number(const json& j, const std::string& name) {
  if (!j.is_number()) {
    throw ConfigError("field '" + name + "' must be a number");
  }
  return j.get<double>();
}

double get_num(const json& j, const std::string& path, const char* key) {
  const std::string name = qualify(path, key);
  if (!j.contains(key)) throw ConfigError("missing field '" + name + "'");
  return as_number(j.at(key), name);
}

std::optional<double> opt_num(const json& j, const std::string& path,
                              const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return as_number(j.at(key), qualify(path, key));
}

long long as_integer(const json& j, const std::string& name) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    throw ConfigError("field '" + name + "' must be an integer");
  }
  return j.get<long long>();
}

std::optional<long long> opt_int(const json& j, const std::string& path,
                                 const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return as_integer(j.at(key), qualify(path, key));
}

std::optional<std::uint64_t> opt_u64(const json& j, const std::string& path,
                                     const char* key) {
  if (!j.contains(key)) return std::nullopt;
  const std::string name = qualify(path, key);
  if (!j.at(key).is_number_integer() && !j.at(key).is_number_unsigned()) {
    throw ConfigError("field '" + name + "' must be an integer");
  }
  return j.at(key).get<std::uint64_t>();
}

std::array<double, 2> as_point(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError("field '" + name + "' must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<std::array<double, 2>> as_point_list(const json& j,
                                                 const std::string& name) {
  if (!j.is_array()) {
    throw ConfigError("field '" + name + "' must be a list of [x, y] points");
  }
  std::vector<std::array<double, 2>> points;
  points.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    points.push_back(as_point(j[i], name + "[" + std::to_string(i) + "]"));
  }
  return points;
}

LinkSection parse_link(const json& j) {
  require_object(j, "link");
  check_keys(j, "link", {"z", "aA", "w_z", "sigma_t", "sigma_p", "sigma_n"});
  LinkSection s;
  s.z = opt_num(j, "link", "z");
  s.aA = opt_num(j, "link", "aA");
  s.w_z = opt_num(j, "link", "w_z");
  s.sigma_t = opt_num(j, "link", "sigma_t");
  s.sigma_p = opt_num(j, "link", "sigma_p");
  s.sigma_n = opt_num(j, "link", "sigma_n");
  return s;
}

ThresholdSection parse_thresholds(const json& j) {
  require_object(j, "thresholds");
  check_keys(j, "thresholds", {"eta", "gamma_th", "xi"});
  ThresholdSection s;
  s.eta = opt_num(j, "thresholds", "eta");
  s.gamma_th = opt_num(j, "thresholds", "gamma_th");
  s.xi = opt_num(j, "thresholds", "xi");
  return s;
}

BeaconSection parse_beacons(const json& j) {
  require_object(j, "beacons");
  check_keys(j, "beacons", {"aA", "w_z", "centers"});
  BeaconSection s;
  s.aA = get_num(j, "beacons", "aA");
  s.w_z = get_num(j, "beacons", "w_z");
  if (!j.contains("centers")) {
    throw ConfigError("missing field 'beacons.centers'");
  }
  s.centers = as_point_list(j.at("centers"), "beacons.centers");
  if (s.centers.empty()) {
    throw ConfigError("field 'beacons.centers' must not be empty");
  }
  return s;
}

GridSection parse_grid(const json& j) {
  require_object(j, "grid");
  check_keys(j, "grid", {"x_min", "x_max", "y_min", "y_max", "step"});
  GridSection s;
  s.x_min = get_num(j, "grid", "x_min");
  s.x_max = get_num(j, "grid", "x_max");
  s.y_min = get_num(j, "grid", "y_min");
  s.y_max = get_num(j, "grid", "y_max");
  s.step = get_num(j, "grid", "step");
  return s;
}

SweepSection parse_sweep(const json& j) {
  require_object(j, "sweep");
  check_keys(j, "sweep", {"curve", "w_z", "series"});
  SweepSection s;
  if (j.contains("curve")) {
    if (!j.at("curve").is_string()) {
      throw ConfigError("field 'sweep.curve' must be a string");
    }
    const std::string curve = j.at("curve").get<std::string>();
    if (curve != "avg_power" && curve != "expected_outage") {
      throw ConfigError(
          "field 'sweep.curve' must be 'avg_power' or 'expected_outage'");
    }
    s.curve = curve;
  }
  if (!j.contains("w_z")) throw ConfigError("missing field 'sweep.w_z'");
  const json& grid = require_object(j.at("w_z"), "sweep.w_z");
  check_keys(grid, "sweep.w_z", {"min", "max", "count"});
  s.wz_min = get_num(grid, "sweep.w_z", "min");
  s.wz_max = get_num(grid, "sweep.w_z", "max");
  if (!grid.contains("count")) {
    throw ConfigError("missing field 'sweep.w_z.count'");
  }
  s.wz_count = as_integer(grid.at("count"), "sweep.w_z.count");
  if (s.wz_count < 1) {
    throw ConfigError("field 'sweep.w_z.count' must be at least 1");
  }
  if (!j.contains("series")) throw ConfigError("missing field 'sweep.series'");
  if (!j.at("series").is_array()) {
    throw ConfigError("field 'sweep.series' must be a list");
  }
  for (std::size_t i = 0; i < j.at("series").size(); ++i) {
    const std::string path = "sweep.series[" + std::to_string(i) + "]";
    const json& entry = require_object(j.at("series")[i], path);
    check_keys(entry, path, {"aA", "sigma_t", "sigma_p", "label"});
    SweepSeries series;
    series.aA = get_num(entry, path, "aA");
    series.sigma_t = opt_num(entry, path, "sigma_t");
    series.sigma_p = opt_num(entry, path, "sigma_p");
    if (entry.contains("label")) {
      if (!entry.at("label").is_string()) {
        throw ConfigError("field '" + path + ".label' must be a string");
      }
      series.label = entry.at("label").get<std::string>();
    }
    s.series.push_back(std::move(series));
  }
  if (s.series.empty()) {
    throw ConfigError("field 'sweep.series' must not be empty");
  }
  return s;
}

SimulationSection parse_simulation(const json& j) {
  require_object(j, "simulation");
  check_keys(j, "simulation", {"trials", "steps", "master_seed"});
  SimulationSection s;
  s.trials = opt_int(j, "simulation", "trials");
  s.steps = opt_int(j, "simulation", "steps");
  s.master_seed = opt_u64(j, "simulation", "master_seed");
  return s;
}

Config parse_config_object(const json& j) {
  require_object(j, "config");
  check_keys(j, "", {"link", "thresholds", "beacons", "grid", "sweep",
                     "simulation", "target", "points"});
  Config cfg;
  if (j.contains("link")) cfg.link = parse_link(j.at("link"));
  if (j.contains("thresholds")) cfg.thresholds = parse_thresholds(j.at("thresholds"));
  if (j.contains("beacons")) cfg.beacons = parse_beacons(j.at("beacons"));
  if (j.contains("grid")) cfg.grid = parse_grid(j.at("grid"));
  if (j.contains("sweep")) cfg.sweep = parse_sweep(j.at("sweep"));
  if (j.contains("simulation")) cfg.simulation = parse_simulation(j.at("simulation"));
  if (j.contains("target")) cfg.target = as_point(j.at("target"), "target");
  if (j.contains("points")) cfg.points = as_point_list(j.at("points"), "points");
  cfg.snapshot = j;
  return cfg;
}

std::string resolve_path(const std::string& path_arg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::exists(path_arg, ec)) return path_arg;
  // Bare names fall back to the default config directory.
  if (path_arg.find('/') == std::string::npos) {
    if (const char* dir = std::getenv("OMCTRACK_CONFIG_DIR")) {
      const fs::path base(dir);
      for (const fs::path candidate :
           {base / path_arg, base / (path_arg + ".json")}) {
        if (fs::exists(candidate, ec)) return candidate.string();
      }
    }
  }
  throw ConfigError("config file not found: '" + path_arg + "'");
}

}  // namespace

Config load_config(const std::string& path_arg) {
  const std::string path = resolve_path(path_arg);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  json j;
  try {
    j = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in '" + path + "': " + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError("config file '" + path + "' must contain a JSON object");
  }
  if (!j.contains("omctrack_manifest")) return parse_config_object(j);

  // Manifest files double as configs: the snapshot is the config, and the
  // recorded invocation supplies defaults for un-set flags.
  check_keys(j, "", {"omctrack_manifest", "version", "command", "invocation",
                     "config", "outputs"});
  if (!j.contains("config")) {
    throw ConfigError("manifest '" + path + "' has no 'config' snapshot");
  }
  Config cfg = parse_config_object(j.at("config"));
  Invocation invocation;
  if (j.contains("command") && j.at("command").is_string()) {
    invocation.command = j.at("command").get<std::string>();
  }
  if (j.contains("invocation") && j.at("invocation").is_object()) {
    invocation.fields = j.at("invocation");
  }
  cfg.manifest = std::move(invocation);
  return cfg;
}

}  // namespace omcli
