// Subcommands behind the lightwit executable. Each returns a process exit code:
// 0 ran to completion (whatever the verdict), 1 usage or config error,
// 2 numerical failure (including a failing verify suite).
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "lightwit/config.hpp"

namespace lightwit::commands {

inline constexpr const char* kToolName = "lightwit";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalFailure = 2 };

/// Command-line values that take precedence over the config's run section.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<std::string> format;
};

/// Applies overrides and re-validates the run section. Throws config::ConfigError.
config::ExperimentConfig apply_overrides(config::ExperimentConfig cfg, const Overrides& o);

/// Hex SHA-256 of the canonical (sorted-key, compact) JSON serialization.
std::string sha256_hex(const std::string& data);
std::string config_digest(const config::ExperimentConfig& cfg);

/// {"tool", "version", "config_sha256", "seed"}
nlohmann::json provenance(const config::ExperimentConfig& cfg);

int cmd_witness(const config::ExperimentConfig& cfg, std::ostream& log);
int cmd_scan(const config::ExperimentConfig& cfg, std::ostream& log);
int cmd_threshold(const config::ExperimentConfig& cfg, std::ostream& log);
/// Without a config the defaults of config::RunSpec are used and nothing is written
/// unless `out` is set.
int cmd_verify(const std::optional<config::ExperimentConfig>& cfg, const Overrides& o, std::ostream& log);

/// Polar angles of a unit vector, phi in [0, 2 pi).
std::pair<double, double> angles_of(const geometry::Vec3& direction);

}  // namespace lightwit::commands
