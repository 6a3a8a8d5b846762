#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsel/flow/flow.h"
#include "fsel/sde/integrate.h"
#include "fsel/selection/detect.h"

namespace fsel {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Invalid configuration; `field` is the JSON path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class NoiseMethod { exact, volterra };

struct ExperimentConfig {
  ModelParams model;
  double dt_over_t_eps = 1e-3;
  double horizon_over_t_eps = 50.0;
  std::size_t n_paths = 1000;
  std::uint64_t seed = 1;
  Scheme scheme = Scheme::flow_splitting;
  double x0 = 0.0;
  double alpha = 0.0;  // resolved to (H + 1/(1-gamma))/2 when absent
  DetectOptions selection;
  NoiseMethod noise = NoiseMethod::exact;
  double history_over_t_eps = 100.0;  // volterra noise only
  std::vector<double> epsilons;       // sweep only
  bool save_paths = false;
};

/// Parses a config document or a manifest written by a previous run (its
/// "config" member, checked against the recorded hash). Every default is
/// filled in, so to_json(parse_config(j)) is the fully resolved config.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& file);

nlohmann::json to_json(const ExperimentConfig& c);

/// FNV-1a 64 of the canonical (sorted-key) dump of to_json(c), as hex.
std::string config_hash(const ExperimentConfig& c);

const char* to_string(Scheme s);
const char* to_string(MarginMode m);
const char* to_string(NoiseMethod m);
const char* to_string(Selected s);

}  // namespace fsel
