#include "lapnum/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace lapnum {

namespace {

const std::vector<std::string> kSections{"grid", "potential", "weights", "phase", "suite", "output"};

std::vector<std::string> split_key(const std::string& key) {
  std::vector<std::string> parts;
  std::stringstream ss(key);
  std::string p;
  while (std::getline(ss, p, '.')) {
    if (p.empty()) throw ConfigError("config: empty path component in '" + key + "'");
    parts.push_back(p);
  }
  if (parts.empty()) throw ConfigError("config: empty key");
  return parts;
}

std::string where(const Config& cfg, const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  if (m.line < 0) return cfg.origin;
  return cfg.origin + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
}

YAML::Node descend(const YAML::Node& n, const std::vector<std::string>& parts, std::size_t i) {
  if (i == parts.size()) return n;
  if (!n.IsMap()) return YAML::Node(YAML::NodeType::Undefined);
  const YAML::Node next = n[parts[i]];  // const access never inserts
  if (!next.IsDefined()) return next;
  return descend(next, parts, i + 1);
}

// Undefined node when any component is absent.
YAML::Node lookup(const Config& cfg, const std::string& key) {
  const YAML::Node& root = cfg.root;
  return descend(root, split_key(key), 0);
}

template <class T>
T convert(const Config& cfg, const std::string& key, const YAML::Node& n, const char* what) {
  try {
    if (!n.IsScalar()) throw YAML::BadConversion(n.Mark());
    return n.as<T>();
  } catch (const YAML::Exception&) {
    std::ostringstream os;
    os << where(cfg, n) << ": field '" << key << "' expects " << what;
    if (n.IsScalar()) os << ", got '" << n.Scalar() << "'";
    throw ConfigError(os.str());
  }
}

void check_sections(const Config& cfg) {
  if (!cfg.root.IsDefined() || cfg.root.IsNull()) return;
  if (!cfg.root.IsMap()) throw ConfigError(where(cfg, cfg.root) + ": top level must be a mapping of sections");
  for (const auto& kv : cfg.root) {
    const std::string name = kv.first.as<std::string>();
    if (std::find(kSections.begin(), kSections.end(), name) == kSections.end())
      throw ConfigError(where(cfg, kv.first) + ": unknown section '" + name +
                        "' (grid, potential, weights, phase, suite, output)");
  }
}

}  // namespace

Config load_config_text(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin = origin;
  try {
    cfg.root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                      ": " + e.msg);
  }
  if (!cfg.root.IsDefined() || cfg.root.IsNull()) cfg.root = YAML::Node(YAML::NodeType::Map);
  check_sections(cfg);
  return cfg;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str(), path);
}

void apply_override(Config& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set '" + assignment + "': expected key=value");
  const std::vector<std::string> parts = split_key(assignment.substr(0, eq));
  YAML::Node value;
  try {
    value = YAML::Load(assignment.substr(eq + 1));
  } catch (const YAML::ParserException& e) {
    throw ConfigError("--set '" + assignment + "': " + e.msg);
  }
  YAML::Node cur = cfg.root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    YAML::Node next = cur[parts[i]];
    if (next.IsDefined() && !next.IsMap())
      throw ConfigError("--set '" + assignment + "': '" + parts[i] + "' is not a section");
    if (!next.IsDefined()) cur[parts[i]] = YAML::Node(YAML::NodeType::Map);
    cur.reset(cur[parts[i]]);
  }
  cur[parts.back()] = value;
  cfg.origin += " (with --set)";
  check_sections(cfg);
}

bool has_key(const Config& cfg, const std::string& key) { return lookup(cfg, key).IsDefined(); }

double get_double(const Config& cfg, const std::string& key, double fallback) {
  const YAML::Node n = lookup(cfg, key);
  return n.IsDefined() ? convert<double>(cfg, key, n, "a number") : fallback;
}

int get_int(const Config& cfg, const std::string& key, int fallback) {
  const YAML::Node n = lookup(cfg, key);
  return n.IsDefined() ? convert<int>(cfg, key, n, "an integer") : fallback;
}

bool get_bool(const Config& cfg, const std::string& key, bool fallback) {
  const YAML::Node n = lookup(cfg, key);
  return n.IsDefined() ? convert<bool>(cfg, key, n, "true or false") : fallback;
}

std::string get_string(const Config& cfg, const std::string& key, const std::string& fallback) {
  const YAML::Node n = lookup(cfg, key);
  return n.IsDefined() ? convert<std::string>(cfg, key, n, "a string") : fallback;
}

std::vector<double> get_doubles(const Config& cfg, const std::string& key, const std::vector<double>& fallback) {
  const YAML::Node n = lookup(cfg, key);
  if (!n.IsDefined()) return fallback;
  if (n.IsScalar()) return {convert<double>(cfg, key, n, "a number or a list of numbers")};
  if (!n.IsSequence()) throw ConfigError(where(cfg, n) + ": field '" + key + "' expects a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i)
    out.push_back(convert<double>(cfg, key + "[" + std::to_string(i) + "]", n[i], "a number"));
  return out;
}

Params get_params(const Config& cfg, const std::string& key, const std::vector<std::string>& skip) {
  const YAML::Node n = lookup(cfg, key);
  Params out;
  if (!n.IsDefined()) return out;
  if (!n.IsMap()) throw ConfigError(where(cfg, n) + ": field '" + key + "' expects a mapping");
  for (const auto& kv : n) {
    const std::string name = kv.first.as<std::string>();
    if (std::find(skip.begin(), skip.end(), name) != skip.end()) continue;
    out[name] = convert<double>(cfg, key + "." + name, kv.second, "a number");
  }
  return out;
}

std::string snapshot(const Config& cfg) {
  YAML::Emitter out;
  out << cfg.root;
  return std::string(out.c_str()) + "\n";
}

RadialGrid grid_from(const Config& cfg) {
  const int dim = get_int(cfg, "grid.dim", 1);
  const double extent = get_double(cfg, "grid.extent", 256.0);
  const double spacing = get_double(cfg, "grid.spacing", 0.1);
  try {
    return build_grid_spacing(dim, extent, spacing);
  } catch (const Error& e) {
    throw ConfigError(cfg.origin + ": grid: " + e.what());
  }
}

PotentialModel potential_from(const Config& cfg) {
  const std::string name = get_string(cfg, "potential.name", "free");
  try {
    return builtin_potential(name, get_params(cfg, "potential", {"name"}));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(cfg.origin + ": potential: " + e.what());
  }
}

WeightFn weight_from(const Config& cfg, const std::string& slot, const PotentialModel& pot, double r_end) {
  const std::string base = "weights." + slot;
  if (!has_key(cfg, base)) throw ConfigError(cfg.origin + ": missing section '" + base + "'");
  const std::string kind = get_string(cfg, base + ".kind", "power");
  const WeightClass tag = slot == "h" ? WeightClass::H : slot == "f" ? WeightClass::F : WeightClass::W;
  try {
    if (kind == "power")
      return power_weight(tag, get_double(cfg, base + ".scale", 1.0), get_double(cfg, base + ".power", 0.0),
                          get_double(cfg, base + ".shift", 0.0));
    if (kind == "escort") {
      const std::string target = get_string(cfg, base + ".target", "bounded");
      if (target != "bounded" && target != "divergent")
        throw ConfigError(cfg.origin + ": field '" + base + ".target' expects bounded or divergent");
      EscortOptions eo;
      eo.kappa = get_double(cfg, base + ".kappa", eo.kappa);
      return construct_escort_h(pot.w0, pot.w0_tail, get_double(cfg, base + ".beta0", 0.9),
                                target == "divergent" ? EscortTarget::Divergent : EscortTarget::Bounded, r_end, eo)
          .h;
    }
    if (kind == "h_squared_theta") {
      const WeightFn h = weight_from(cfg, "h", pot, r_end);
      return named_f_family(kind, get_params(cfg, base, {"kind"}), &h);
    }
    return named_f_family(kind, get_params(cfg, base, {"kind"}));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(cfg.origin + ": " + base + ": " + e.what());
  }
}

}  // namespace lapnum
