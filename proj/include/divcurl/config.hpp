#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace divcurl {

/// Every violation found in a config, each prefixed with its key path.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

struct RunConfig {
  // [run]
  std::string experiment;
  std::uint64_t seed = 0;
  std::optional<std::string> out_dir;
  int jobs = 1;
  // [grid]
  int d = 0;
  int n = 0;
  std::optional<double> band;
  // [identity]
  int trials = 20;
  // [family]
  std::optional<double> radius;
  std::string pairing = "rotate";
  std::string e_mode = "orthonormal";
  std::string polarization = "all";
  std::optional<int> components;
  // [norm]
  std::optional<std::string> variant;
  std::optional<double> q;
  std::optional<double> p;
  // [series]
  std::vector<std::size_t> n_list;
  std::optional<std::vector<double>> weights;
  // [schatten]
  std::optional<std::string> which;
  std::vector<std::string> u_recipes;
  // [extremizer]
  std::optional<std::size_t> pairs;
  std::optional<std::size_t> pool;
  std::optional<int> steps;
  std::optional<double> step_size;
  // [certify]
  int certify_steps = 60;
  double certify_step = 1.0;
  // [gates]
  std::map<std::string, double> gates;

  bool operator==(const RunConfig&) const = default;
};

const std::vector<std::string>& experiment_names();
/// Gate names accepted for an experiment.
const std::vector<std::string>& gate_names(const std::string& experiment);

/// Parses and validates TOML text; throws ConfigError listing all violations.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);
/// Accepts the JSON echo produced by to_json.
RunConfig config_from_json(const nlohmann::json& j);

/// Sectioned JSON of the config as used, defaults included.
nlohmann::json to_json(const RunConfig& config);
std::string to_toml(const RunConfig& config);

}  // namespace divcurl
