#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "badapprox/instances.hpp"

namespace badapprox {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `key = value` lines; `#` starts a comment. Unknown and repeated keys are rejected.
struct ExperimentConfig {
  std::map<std::string, std::string> instance;
  long depth = 3;
  Mode mode = Mode::greedy;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::string format = "both";
  unsigned workers = 0;
  std::size_t samples = 100;
  std::optional<long> height_bound;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Checks a single run-level setting and stores it; used for config lines and CLI flags alike.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Builds the instance named by `instance`, applying theta/kappa overrides.
/// The returned spec's config echo contains every key needed to rebuild it.
InstanceSpec instance_from_config(const std::map<std::string, std::string>& keys);

}  // namespace badapprox
