#pragma once

#include "lapnum/grid.hpp"
#include "lapnum/potential.hpp"
#include "lapnum/weights.hpp"

#include <yaml-cpp/yaml.h>

#include <string>
#include <vector>

namespace lapnum {

/// Malformed configuration; the message names the field and, when known, the source line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Sections: grid, potential, weights, phase, suite, output. Keys are dotted paths, e.g. "grid.extent".
struct Config {
  YAML::Node root;
  std::string origin;
};

Config load_config_file(const std::string& path);
Config load_config_text(const std::string& text, const std::string& origin = "<inline>");

/// "a.b.c=value"; the value is parsed as YAML, so "[1, 2]" yields a list.
void apply_override(Config& cfg, const std::string& assignment);

bool has_key(const Config& cfg, const std::string& key);
double get_double(const Config& cfg, const std::string& key, double fallback);
int get_int(const Config& cfg, const std::string& key, int fallback);
bool get_bool(const Config& cfg, const std::string& key, bool fallback);
std::string get_string(const Config& cfg, const std::string& key, const std::string& fallback);
std::vector<double> get_doubles(const Config& cfg, const std::string& key, const std::vector<double>& fallback);
/// Every numeric entry of a mapping, skipping the listed keys.
Params get_params(const Config& cfg, const std::string& key, const std::vector<std::string>& skip = {});

/// Emitted YAML for the run snapshot; key order follows the source.
std::string snapshot(const Config& cfg);

/// grid: {dim, extent, spacing}
RadialGrid grid_from(const Config& cfg);
/// potential: {name, <params>}
PotentialModel potential_from(const Config& cfg);
/// weights.<slot>: {kind: power | escort | lap_fk | theta_alpha | h_squared_theta, ...}
/// escort reads beta0 and target (bounded | divergent); h_squared_theta uses weights.h.
WeightFn weight_from(const Config& cfg, const std::string& slot, const PotentialModel& pot, double r_end);

}  // namespace lapnum
