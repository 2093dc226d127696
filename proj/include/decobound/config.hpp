#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "decobound/optomech.hpp"

// Flat key/value configuration with [sections]. Unknown sections or keys are
// hard errors: a silent typo in a physics parameter is worse than a refused
// config. The [materials] section is the one free-form map (name = density).

namespace decobound {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SimChannel { none, depolarizing, dephasing };

struct Config {
  PhysicalConstants constants;

  std::map<std::string, double> materials = {{"aluminum", 2700.0},
                                             {"rhenium", 21020.0}};

  // [optomech]
  double g0 = 1.0;
  double omega_m = 1.0;
  double gamma_m = 1e-10;
  std::vector<double> temperatures = {1e-9};
  int time_samples = 513;

  // [grids]
  int region_grid = 65;
  int channels_grid = 41;

  // [simulate]
  std::int64_t simulate_rounds = 1000000;
  std::uint64_t simulate_seed = 1;
  SimChannel simulate_channel = SimChannel::none;
  double simulate_noise = 0.0;

  // [certify]
  int certificate_states = 100;
  int oracle_states = 50;
  std::uint64_t certify_seed = 7;

  // [tolerances]
  double curve_inversion = 1e-10;

  OptomechParams optomech_params(double density, double temperature) const {
    return OptomechParams{g0, omega_m, gamma_m, temperature, density};
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& field, const std::string& v) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(field, "expected a number, got '" + v + "'");
  }
}

inline std::int64_t parse_int(const std::string& field, const std::string& v) {
  try {
    size_t pos = 0;
    long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(field, "expected an integer, got '" + v + "'");
  }
}

inline std::vector<double> parse_double_list(const std::string& field,
                                             const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(field, item));
  }
  if (out.empty()) throw ConfigError(field, "expected a comma-separated list");
  return out;
}

}  // namespace detail

inline Config parse_config(std::istream& in) {
  Config cfg;
  cfg.materials.clear();  // explicit configs define their own material table
  bool saw_materials = false;

  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno), "malformed section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "constants" && section != "materials" &&
          section != "optomech" && section != "grids" &&
          section != "simulate" && section != "certify" &&
          section != "tolerances")
        throw ConfigError(section, "unknown section");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    std::string field = section + "." + key;

    if (section == "constants") {
      if (key == "G") cfg.constants.gravitational_constant = detail::parse_double(field, value);
      else if (key == "k_B") cfg.constants.boltzmann = detail::parse_double(field, value);
      else if (key == "hbar") cfg.constants.hbar = detail::parse_double(field, value);
      else throw ConfigError(field, "unknown key");
    } else if (section == "materials") {
      saw_materials = true;
      double density = detail::parse_double(field, value);
      if (!(density > 0)) throw ConfigError(field, "density must be positive");
      cfg.materials[key] = density;
    } else if (section == "optomech") {
      if (key == "g0") cfg.g0 = detail::parse_double(field, value);
      else if (key == "omega_m") cfg.omega_m = detail::parse_double(field, value);
      else if (key == "gamma_m") cfg.gamma_m = detail::parse_double(field, value);
      else if (key == "temperatures") cfg.temperatures = detail::parse_double_list(field, value);
      else if (key == "time_samples") cfg.time_samples = static_cast<int>(detail::parse_int(field, value));
      else throw ConfigError(field, "unknown key");
    } else if (section == "grids") {
      if (key == "region") cfg.region_grid = static_cast<int>(detail::parse_int(field, value));
      else if (key == "channels") cfg.channels_grid = static_cast<int>(detail::parse_int(field, value));
      else throw ConfigError(field, "unknown key");
    } else if (section == "simulate") {
      if (key == "rounds") cfg.simulate_rounds = detail::parse_int(field, value);
      else if (key == "seed") cfg.simulate_seed = static_cast<std::uint64_t>(detail::parse_int(field, value));
      else if (key == "channel") {
        if (value == "none") cfg.simulate_channel = SimChannel::none;
        else if (value == "depolarizing") cfg.simulate_channel = SimChannel::depolarizing;
        else if (value == "dephasing") cfg.simulate_channel = SimChannel::dephasing;
        else throw ConfigError(field, "expected none|depolarizing|dephasing");
      } else if (key == "noise") cfg.simulate_noise = detail::parse_double(field, value);
      else throw ConfigError(field, "unknown key");
    } else if (section == "certify") {
      if (key == "certificate_states") cfg.certificate_states = static_cast<int>(detail::parse_int(field, value));
      else if (key == "oracle_states") cfg.oracle_states = static_cast<int>(detail::parse_int(field, value));
      else if (key == "seed") cfg.certify_seed = static_cast<std::uint64_t>(detail::parse_int(field, value));
      else throw ConfigError(field, "unknown key");
    } else if (section == "tolerances") {
      if (key == "curve_inversion") cfg.curve_inversion = detail::parse_double(field, value);
      else throw ConfigError(field, "unknown key");
    } else {
      throw ConfigError("line " + std::to_string(lineno), "key outside any section");
    }
  }
  if (!saw_materials)
    cfg.materials = {{"aluminum", 2700.0}, {"rhenium", 21020.0}};

  if (cfg.time_samples < 2) throw ConfigError("optomech.time_samples", "must be >= 2");
  if (cfg.region_grid < 2) throw ConfigError("grids.region", "must be >= 2");
  if (cfg.channels_grid < 2) throw ConfigError("grids.channels", "must be >= 2");
  if (cfg.simulate_rounds < 1) throw ConfigError("simulate.rounds", "must be >= 1");
  if (cfg.simulate_noise < 0 || cfg.simulate_noise > 1)
    throw ConfigError("simulate.noise", "must be in [0, 1]");
  if (cfg.certificate_states < 1) throw ConfigError("certify.certificate_states", "must be >= 1");
  if (cfg.oracle_states < 1) throw ConfigError("certify.oracle_states", "must be >= 1");
  for (double t : cfg.temperatures)
    if (t < 0) throw ConfigError("optomech.temperatures", "negative temperature");
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path);
  return parse_config(in);
}

}  // namespace decobound
