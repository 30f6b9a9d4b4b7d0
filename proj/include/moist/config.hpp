#pragma once

// INI-style experiment configuration. Every key is described once in a table
// that drives parsing, serialization and the generated reference listing.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "moist/rothe.hpp"
#include "moist/stepper.hpp"

namespace moist {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BatteryConfig {
  int problems = 20;
  int n = 16;
  int N = 32;
  double horizon = 1.0;
  double a_lo = 0.5, a_hi = 2.0;
  double b_hi = 1.0;
  double robin_hi = 2.0;
  std::uint64_t seed = 2024;
  double rel_tol = 1e-10;
  bool operator==(const BatteryConfig&) const = default;
};

struct MmsConfig {
  std::vector<int> sizes = {8, 16, 32};
  int parabolic_N = 16;
  double horizon = 1.0;
  int temporal_n = 32;
  std::vector<int> temporal_steps = {4, 8, 16};
  double spatial_order_min = 1.8;
  double temporal_order_min = 0.9;
  bool operator==(const MmsConfig&) const = default;
};

struct TwoRunConfig {
  std::vector<double> eps = {1e-2, 1e-3, 1e-4};
  std::uint64_t seed = 7;
  double pert_T = 1.0;
  double pert_q = 1e-3;
  double agreement_tol = 0.1;
  bool operator==(const TwoRunConfig&) const = default;
};

struct Config {
  SimConfig sim;
  BatteryConfig battery;
  MmsConfig mms;
  TwoRunConfig two_run;
  bool operator==(const Config&) const = default;
};

/// Parses the text; throws ConfigError naming the line on unknown sections or
/// keys, duplicates and malformed values. Missing keys keep their defaults.
Config parse_config(const std::string& text);
/// Reads and parses a file; a missing file is a ConfigError naming the path.
Config load_config(const std::string& path);
/// Full listing of every key with unit and provenance comments.
std::string serialize_config(const Config& c);

struct ConfigKeyInfo {
  std::string section;
  std::string key;
  std::string unit;
  std::string provenance;  // "given" (fixed by the model formulation), "literature" or "artifact"
  std::string description;
};
const std::vector<ConfigKeyInfo>& config_keys();

}  // namespace moist
