// Witness fields over a (theta, phi) grid of detection directions, their
// stereographic map, the circular-channel mirror check and CSV/JSON output.
#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lightwit/geometry.hpp"
#include "lightwit/hilbert.hpp"
#include "lightwit/witness.hpp"

namespace lightwit::scan {

class AngularGrid {
public:
  /// theta strictly increasing in [0, pi], phi strictly increasing in [0, 2 pi).
  AngularGrid(std::vector<double> theta, std::vector<double> phi);

  /// theta_i = pi i / (n_theta - 1) (just pi/2 when n_theta = 1), phi_j = 2 pi j / n_phi.
  static AngularGrid uniform(int n_theta, int n_phi);

  const std::vector<double>& theta() const { return theta_; }
  const std::vector<double>& phi() const { return phi_; }
  std::size_t size() const { return theta_.size() * phi_.size(); }
  /// Row-major: theta outer, phi inner.
  std::pair<std::size_t, std::size_t> unflatten(std::size_t k) const { return {k / phi_.size(), k % phi_.size()}; }

  bool operator==(const AngularGrid&) const = default;

private:
  std::vector<double> theta_;
  std::vector<double> phi_;
};

/// Radius emitted for directions too close to theta = pi.
inline constexpr double kStereoSentinel = 1e6;

/// tan(theta / 2) (cos phi, sin phi), radius capped at kStereoSentinel.
std::pair<double, double> stereographic(double theta, double phi);

struct FieldPoint {
  double theta = 0.0;
  double phi = 0.0;
  geometry::Vec3 direction;
  double x_stereo = 0.0;
  double y_stereo = 0.0;
  witness::WitnessBreakdown witness;
  /// R.r_eta per emitter.
  std::vector<double> optical_phases;
  /// Per allowed transition (table order); empty optional when the dipole is
  /// complex or its projection has no transverse part.
  std::vector<std::optional<double>> dipole_phases;
};

struct WitnessField {
  AngularGrid grid;
  std::vector<FieldPoint> points;  // grid order
  bool real_dipoles = true;
  /// Set when every allowed transition is detected through the same preset.
  std::optional<geometry::PolarizationPreset> preset;

  double violating_fraction(double tolerance = witness::kDetectionTol) const;
  /// Index of the smallest W (first one on ties).
  std::size_t argmin() const;
};

/// witness_min at every grid direction. Points are evaluated on `threads`
/// workers (0 = hardware concurrency); the result is in grid order either way.
WitnessField sweep(const hilbert::DensityMatrix& rho, const geometry::EmitterArray& array,
                   const geometry::TransitionTable& table, const geometry::Polarization& polarization,
                   const AngularGrid& grid, unsigned threads = 0);

struct MirrorReport {
  double max_discrepancy = 0.0;  // over all seven candidates and W
  std::size_t compared = 0;
  std::size_t unmatched = 0;     // points whose phase-negated partner is not on the grid
  bool ok(double tolerance) const { return unmatched == 0 && max_discrepancy < tolerance; }
};

inline constexpr double kPhaseMatchTol = 1e-9;

/// Pairs every point of `plus` with the point of `minus` whose optical phases are
/// equal and whose dipole phases are negated (mod 2 pi) and compares the witnesses.
/// Throws std::invalid_argument on grid mismatch, complex dipoles, or channels
/// other than e_plus / e_minus.
MirrorReport mirror_check(const WitnessField& plus, const WitnessField& minus);

inline constexpr const char* kCsvHeader = "theta,phi,x_stereo,y_stereo,w1,w2_X,w2_Y,w2_Z,w3_X,w3_Y,w3_Z,W,min_label";
inline constexpr int kSchemaVersion = 1;

/// Each provenance line is written as "# line" before the header.
void write_csv(std::ostream& out, const WitnessField& field, const std::vector<std::string>& provenance);
nlohmann::json to_json(const WitnessField& field);
nlohmann::json to_json(const witness::WitnessBreakdown& b);

}  // namespace lightwit::scan
