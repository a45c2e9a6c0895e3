#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "antijam/scenario.hpp"

namespace antijam {

/// Outcome of reading a scenario file. On failure, `scenario` is empty and
/// `errors` lists every problem found, each prefixed with its line number
/// where one applies.
struct ScenarioParseResult {
  std::optional<Scenario> scenario;
  std::vector<std::string> errors;

  bool ok() const { return scenario.has_value() && errors.empty(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct RawValue {
  int line = 0;
  bool is_array = false;
  double scalar = 0.0;
  std::vector<double> array;
};

struct RawConfig {
  // section -> key -> value
  std::map<std::string, std::map<std::string, RawValue>> sections;
  std::vector<std::string> errors;

  bool has(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
  }
};

inline bool parse_number(const std::string& text, double& out) {
  std::istringstream in(text);
  in >> out;
  if (!in) return false;
  std::string rest;
  in >> rest;
  return rest.empty() && std::isfinite(out);
}

inline RawConfig read_raw(std::istream& in) {
  RawConfig cfg;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        cfg.errors.push_back("line " + std::to_string(line_no) + ": unterminated section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        cfg.errors.push_back("line " + std::to_string(line_no) + ": empty section name");
      }
      cfg.sections[section];  // record even if no keys follow
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      cfg.errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    if (section.empty()) {
      cfg.errors.push_back("line " + std::to_string(line_no) + ": key outside any section");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      cfg.errors.push_back("line " + std::to_string(line_no) + ": empty key");
      continue;
    }
    if (cfg.sections[section].count(key)) {
      cfg.errors.push_back("line " + std::to_string(line_no) + ": duplicate key '" + key +
                           "' in [" + section + "]");
      continue;
    }
    RawValue raw;
    raw.line = line_no;
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']') {
        cfg.errors.push_back("line " + std::to_string(line_no) + ": unterminated array for '" +
                             key + "'");
        continue;
      }
      raw.is_array = true;
      std::string body = value.substr(1, value.size() - 2);
      std::string item;
      std::istringstream items(body);
      bool bad = false;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        double x = 0.0;
        if (!parse_number(item, x)) {
          cfg.errors.push_back("line " + std::to_string(line_no) + ": '" + item +
                               "' in '" + key + "' is not a number");
          bad = true;
          break;
        }
        raw.array.push_back(x);
      }
      if (bad) continue;
    } else {
      if (!parse_number(value, raw.scalar)) {
        cfg.errors.push_back("line " + std::to_string(line_no) + ": value of '" + key +
                             "' is not a number");
        continue;
      }
    }
    cfg.sections[section][key] = std::move(raw);
  }
  return cfg;
}

}  // namespace detail

/// Parses a scenario from a stream. Collects every structural error it can
/// before giving up; does not run validate_scenario (callers do that once
/// overrides are applied).
inline ScenarioParseResult parse_scenario(std::istream& in) {
  ScenarioParseResult result;
  detail::RawConfig raw = detail::read_raw(in);
  result.errors = raw.errors;

  static const std::set<std::string> known_sections = {
      "world", "channels", "fc", "jammer", "uavs", "fading", "constants"};
  for (const auto& [name, keys] : raw.sections) {
    (void)keys;
    if (!known_sections.count(name)) {
      result.errors.push_back("unknown section [" + name + "]");
    }
  }
  for (const std::string& name : known_sections) {
    if (!raw.sections.count(name)) {
      result.errors.push_back("missing section [" + name + "]");
    }
  }
  if (!result.errors.empty()) return result;

  std::vector<std::string>& errors = result.errors;
  auto scalar = [&](const std::string& section, const std::string& key,
                    std::optional<double> fallback = std::nullopt) -> double {
    if (!raw.has(section, key)) {
      if (fallback) return *fallback;
      errors.push_back("missing key '" + key + "' in [" + section + "]");
      return 0.0;
    }
    const detail::RawValue& v = raw.sections[section][key];
    if (v.is_array) {
      errors.push_back("line " + std::to_string(v.line) + ": '" + key +
                       "' must be a scalar");
      return 0.0;
    }
    return v.scalar;
  };
  auto array = [&](const std::string& section, const std::string& key,
                   bool required = true) -> std::vector<double> {
    if (!raw.has(section, key)) {
      if (required) errors.push_back("missing key '" + key + "' in [" + section + "]");
      return {};
    }
    const detail::RawValue& v = raw.sections[section][key];
    if (!v.is_array) {
      errors.push_back("line " + std::to_string(v.line) + ": '" + key +
                       "' must be an array");
      return {};
    }
    return v.array;
  };

  Scenario s;
  s.n_periods = static_cast<int>(scalar("world", "periods"));
  s.n_channels = static_cast<int>(scalar("channels", "count"));

  {
    auto fc = array("fc", "position");
    if (fc.size() == 2) {
      s.fc_pos = {fc[0], fc[1]};
    } else if (raw.has("fc", "position")) {
      errors.push_back("'position' in [fc] must have exactly 2 entries");
    }
  }
  {
    auto jp = array("jammer", "position");
    if (jp.size() == 2) {
      s.jammer_pos = {jp[0], jp[1]};
    } else if (raw.has("jammer", "position")) {
      errors.push_back("'position' in [jammer] must have exactly 2 entries");
    }
    s.p_jammer = scalar("jammer", "power");
  }

  s.n_uavs = static_cast<int>(scalar("uavs", "count"));
  auto altitudes = array("uavs", "altitudes");
  auto powers = array("uavs", "powers");
  if (s.n_uavs >= 1 && s.n_periods >= 1) {
    if (altitudes.size() != static_cast<std::size_t>(s.n_uavs)) {
      errors.push_back("'altitudes' in [uavs] must have " + std::to_string(s.n_uavs) +
                       " entries");
    }
    if (powers.size() != static_cast<std::size_t>(s.n_uavs)) {
      errors.push_back("'powers' in [uavs] must have " + std::to_string(s.n_uavs) +
                       " entries");
    }
    s.p_uav = powers;
    for (int i = 1; i <= s.n_uavs; ++i) {
      UavTrajectory t;
      t.uav_id = i;
      t.altitude = i <= static_cast<int>(altitudes.size())
                       ? altitudes[static_cast<std::size_t>(i - 1)]
                       : 0.0;
      const std::string wp_key = "waypoints_" + std::to_string(i);
      const std::string start_key = "start_" + std::to_string(i);
      const std::string dest_key = "dest_" + std::to_string(i);
      if (raw.has("uavs", wp_key)) {
        auto flat = array("uavs", wp_key);
        if (flat.size() != 2 * static_cast<std::size_t>(s.n_periods + 1)) {
          errors.push_back("'" + wp_key + "' must list " +
                           std::to_string(2 * (s.n_periods + 1)) +
                           " values (x,y per period boundary)");
        } else {
          for (std::size_t j = 0; j + 1 < flat.size(); j += 2) {
            t.waypoints.push_back({flat[j], flat[j + 1]});
          }
        }
      } else if (raw.has("uavs", start_key) && raw.has("uavs", dest_key)) {
        auto start = array("uavs", start_key);
        auto dest = array("uavs", dest_key);
        if (start.size() != 2 || dest.size() != 2) {
          errors.push_back("'" + start_key + "'/'" + dest_key +
                           "' must each have exactly 2 entries");
        } else {
          t.waypoints = linear_waypoints({start[0], start[1]}, {dest[0], dest[1]},
                                         s.n_periods);
        }
      } else {
        errors.push_back("UAV " + std::to_string(i) + " needs either '" + wp_key +
                         "' or both '" + start_key + "' and '" + dest_key + "'");
      }
      s.trajectories.push_back(std::move(t));
    }
  }

  s.fading_at_jammer.gains = array("fading", "jammer_gains");
  s.fading_at_jammer.probs = array("fading", "jammer_probs");
  s.fading_at_fc.gains = array("fading", "fc_gains");
  s.fading_at_fc.probs = array("fading", "fc_probs");

  s.alpha = scalar("constants", "alpha");
  s.gain_scale = scalar("constants", "gain_scale");
  s.noise_db = scalar("constants", "noise_db");
  s.noise_linear = std::pow(10.0, s.noise_db / 10.0);
  s.flight_cost = scalar("constants", "flight_cost");
  s.balance_factor = scalar("constants", "balance_factor");
  s.utility_offset = scalar("constants", "utility_offset");
  s.reference_distance = scalar("constants", "reference_distance", 50.0);

  // reject unknown keys so typos surface instead of silently using defaults
  static const std::map<std::string, std::set<std::string>> known_keys = {
      {"world", {"periods"}},
      {"channels", {"count"}},
      {"fc", {"position"}},
      {"jammer", {"position", "power"}},
      {"fading", {"jammer_gains", "jammer_probs", "fc_gains", "fc_probs"}},
      {"constants",
       {"alpha", "gain_scale", "noise_db", "flight_cost", "balance_factor",
        "utility_offset", "reference_distance"}},
  };
  for (const auto& [section, keys] : raw.sections) {
    if (section == "uavs") {
      for (const auto& [key, value] : keys) {
        const bool per_uav = key.rfind("start_", 0) == 0 || key.rfind("dest_", 0) == 0 ||
                             key.rfind("waypoints_", 0) == 0;
        if (key != "count" && key != "altitudes" && key != "powers" && !per_uav) {
          errors.push_back("line " + std::to_string(value.line) + ": unknown key '" + key +
                           "' in [uavs]");
        }
      }
      continue;
    }
    auto it = known_keys.find(section);
    if (it == known_keys.end()) continue;
    for (const auto& [key, value] : keys) {
      if (!it->second.count(key)) {
        errors.push_back("line " + std::to_string(value.line) + ": unknown key '" + key +
                         "' in [" + section + "]");
      }
    }
  }

  if (errors.empty()) {
    result.scenario = std::move(s);
  }
  return result;
}

inline ScenarioParseResult parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ScenarioParseResult result;
    result.errors.push_back("cannot open scenario file: " + path);
    return result;
  }
  return parse_scenario(in);
}

inline ScenarioParseResult parse_scenario_string(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

}  // namespace antijam
