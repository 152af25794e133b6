#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lamarck/evolution.hpp"

namespace lamarck {

inline constexpr std::string_view kVersion = "lamarck-bo 1.0.0";

struct ExperimentConfig {
  EvoConfig evo;
  int runs = 1;
  std::string output_dir = "runs";
  double delta_subsample = 1.0;  ///< fraction of offspring resimulated for the learning delta
  int delta_random_samples = 30;
  int long_budget = 100;
  int long_robots = 20;  ///< per record
  std::uint64_t analysis_seed = 0;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string field, const std::string& message)
      : std::runtime_error(format(line, field, message)), line_(line), field_(std::move(field)) {}

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string format(int line, const std::string& field, const std::string& message);
  int line_;
  std::string field_;
};

/// `key = value` lines; '#' starts a comment. Unknown keys, malformed values
/// and failed validation raise ConfigError with the offending line.
ExperimentConfig parse_config(std::string_view text);
std::string serialize_config(const ExperimentConfig& cfg);

/// Applies one `key=value` override on top of `cfg`.
void apply_override(ExperimentConfig& cfg, std::string_view assignment);

/// Empty when valid.
std::string validate(const ExperimentConfig& cfg);

std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ull);
std::string hex64(std::uint64_t v);

/// Checksum of the canonical serialisation.
std::string config_checksum(const ExperimentConfig& cfg);

}  // namespace lamarck
