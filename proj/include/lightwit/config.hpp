// Experiment configuration: a JSON document with four sections.
//
//   state      {"name": "dicke_symmetric" | "singlet" | "w_state" | "two_qutrit_example" | "custom",
//               "n": int, "d": int, "amplitudes": [[re, im], ...], "noise": p}
//   geometry   {"positions": [[x, y, z], ...]  or  "lattice": {"n", "spacing", "axis": [x, y, z]},
//               "transitions": [{"pair": [a, b], "dipole": [[re, im] x3] or preset name}, ...]}
//   detection  {"polarization": preset name or [{"pair": [a, b], "vector": ...}, ...],
//               "direction": {"theta", "phi"} or {"vector": [x, y, z]},
//               "grid": {"n_theta", "n_phi"} or {"theta": [...], "phi": [...]}}
//   run        {"seed", "tolerance", "threshold_resolution", "verify_trials",
//               "corrupt_loo_phase", "output_dir", "format": "csv" | "json"}
//
// Complex numbers are always [re, im]. Vectors are stored as written and
// normalized only when library objects are built.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lightwit/geometry.hpp"
#include "lightwit/scan.hpp"
#include "lightwit/states.hpp"

namespace lightwit::config {

/// Schema or consistency violation; `path` is a JSON pointer into the config.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

using Complex3 = std::array<cplx, 3>;
using Real3 = std::array<double, 3>;

/// Either a named preset or explicit components.
struct VectorSpec {
  std::optional<geometry::PolarizationPreset> preset;
  Complex3 components{};
  bool operator==(const VectorSpec&) const = default;
};

struct StateSpec {
  states::StateLabel label = states::StateLabel::two_qutrit_example;
  std::optional<int> n;
  std::optional<int> d;
  std::vector<cplx> amplitudes;
  double noise = 0.0;
  bool operator==(const StateSpec&) const = default;
};

struct LatticeSpec {
  int n = 1;
  double spacing = 1.0;
  Real3 axis{0.0, 0.0, 1.0};
  bool operator==(const LatticeSpec&) const = default;
};

struct TransitionSpec {
  geometry::TransitionPair pair;
  VectorSpec vector;
  bool operator==(const TransitionSpec&) const = default;
};

struct GeometrySpec {
  std::vector<Real3> positions;
  std::optional<LatticeSpec> lattice;
  std::vector<TransitionSpec> transitions;
  bool operator==(const GeometrySpec&) const = default;
};

struct DirectionSpec {
  std::optional<std::array<double, 2>> angles;  // theta, phi
  std::optional<Real3> vector;
  bool operator==(const DirectionSpec&) const = default;
};

struct GridSpec {
  std::optional<std::array<int, 2>> uniform;  // n_theta, n_phi
  std::vector<double> theta;
  std::vector<double> phi;
  bool operator==(const GridSpec&) const = default;
};

struct DetectionSpec {
  std::optional<geometry::PolarizationPreset> uniform_polarization;
  std::vector<TransitionSpec> per_transition;
  std::optional<DirectionSpec> direction;
  std::optional<GridSpec> grid;
  bool operator==(const DetectionSpec&) const = default;
};

struct RunSpec {
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  double threshold_resolution = 1e-10;
  int verify_trials = 200;
  double corrupt_loo_phase = 0.0;
  std::string output_dir = "out";
  std::string format = "csv";
  bool operator==(const RunSpec&) const = default;
};

struct ExperimentConfig {
  StateSpec state;
  GeometrySpec geometry;
  DetectionSpec detection;
  RunSpec run;
  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Library objects. All throw ConfigError on cross-field inconsistencies.
states::NamedState build_state(const ExperimentConfig& cfg);
geometry::EmitterArray build_array(const ExperimentConfig& cfg);
geometry::TransitionTable build_table(const ExperimentConfig& cfg);
geometry::Polarization build_polarization(const ExperimentConfig& cfg);
geometry::Vec3 build_direction(const ExperimentConfig& cfg);
scan::AngularGrid build_grid(const ExperimentConfig& cfg);

/// Checks everything that can be checked without a subcommand (state, geometry, polarization).
void validate(const ExperimentConfig& cfg);

}  // namespace lightwit::config
