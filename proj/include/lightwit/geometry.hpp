// Emitter positions, dipole table, detection direction and polarization.
//
// Positions are in units of 1/k0, so every optical phase k0.r is simply R.r.
#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lightwit/hilbert.hpp"

namespace lightwit::geometry {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr double kUnitTol = 1e-12;
inline constexpr double kDegenerateZeta = 1e-12;

/// Atomic transition alpha <-> beta, 1-based with alpha < beta.
struct TransitionPair {
  int alpha = 1;
  int beta = 2;
  auto operator<=>(const TransitionPair&) const = default;
};

/// d(d-1)/2
std::size_t pair_count(int local_dim);
/// Lexicographic position of (alpha, beta) among all pairs, 0-based.
std::size_t pair_index(TransitionPair pair, int local_dim);
TransitionPair pair_at(std::size_t index, int local_dim);
std::string to_string(TransitionPair pair);

class EmitterArray {
public:
  EmitterArray(std::vector<Vec3> positions, int local_dim);

  /// n emitters at (eta - 1) * spacing * axis.
  static EmitterArray linear_lattice(int n, double spacing, const Vec3& axis, int local_dim);

  const std::vector<Vec3>& positions() const { return positions_; }
  int size() const { return static_cast<int>(positions_.size()); }
  int local_dim() const { return local_dim_; }

private:
  std::vector<Vec3> positions_;
  int local_dim_;
};

/// Allowed transitions and their (unit, possibly complex) dipole vectors.
class TransitionTable {
public:
  /// All transitions start out forbidden.
  explicit TransitionTable(int local_dim);

  /// Throws std::invalid_argument unless |dipole| = 1 within kUnitTol.
  void allow(TransitionPair pair, const CVec3& dipole);

  int local_dim() const { return local_dim_; }
  bool allowed(TransitionPair pair) const;
  const CVec3& dipole(TransitionPair pair) const;
  std::vector<TransitionPair> allowed_pairs() const;
  int allowed_count() const;    // T1
  int forbidden_count() const;  // T2
  bool all_real() const;

  bool operator==(const TransitionTable&) const = default;

private:
  int local_dim_;
  std::vector<std::optional<CVec3>> dipoles_;
};

enum class PolarizationPreset { e_plus, e_minus, e_z };

std::string_view to_string(PolarizationPreset preset);
std::optional<PolarizationPreset> parse_preset(std::string_view name);

/// Sign convention of the lab-frame spherical basis: e_+- = kCircularSign * (+-)(x +- i y)/sqrt2.
/// With kCircularSign = -1 this is e_+- = -+(x +- i y)/sqrt2.
inline constexpr double kCircularSign = -1.0;

/// (e_+, e_-) in the lab frame.
std::pair<CVec3, CVec3> circular_basis();
CVec3 preset_vector(PolarizationPreset preset);

/// Per-transition detection polarization, fixed in the lab frame.
class Polarization {
public:
  explicit Polarization(int local_dim);

  /// Same vector for every allowed transition of `table`.
  static Polarization uniform(const CVec3& e, const TransitionTable& table);
  static Polarization uniform(PolarizationPreset preset, const TransitionTable& table);

  /// Throws std::invalid_argument unless |e| = 1 within kUnitTol.
  void set(TransitionPair pair, const CVec3& e);

  int local_dim() const { return local_dim_; }
  const std::optional<CVec3>& at(TransitionPair pair) const;
  bool all_real() const;

  /// Every allowed transition has a vector and no forbidden one does.
  void validate_against(const TransitionTable& table) const;

private:
  int local_dim_;
  std::vector<std::optional<CVec3>> vectors_;
};

class DetectionChannel {
public:
  /// Throws std::invalid_argument unless |direction| = 1 within kUnitTol.
  DetectionChannel(const Vec3& direction, Polarization polarization);

  const Vec3& direction() const { return direction_; }
  const Polarization& polarization() const { return polarization_; }
  DetectionChannel with_direction(const Vec3& direction) const { return {direction, polarization_}; }

private:
  Vec3 direction_;
  Polarization polarization_;
};

/// (sin t cos p, sin t sin p, cos t)
Vec3 direction_from_angles(double theta, double phi);

/// R x (R x d) = R (R.d) - d
CVec3 projected_dipole(const Vec3& direction, const CVec3& dipole);

struct Zeta {
  cplx value;
  bool degenerate = false;  // |value| < kDegenerateZeta
};

/// zeta = e . (R x (R x d)) (bilinear, no conjugation). Throws std::invalid_argument for a
/// forbidden transition or a transition without polarization.
Zeta zeta(const DetectionChannel& channel, TransitionPair pair, const TransitionTable& table);

/// atan2(v2, v1) of the projected (real) dipole. Throws std::domain_error when
/// its first two components vanish, std::invalid_argument for a complex dipole.
double dipole_phase(const Vec3& direction, const Vec3& dipole);
double dipole_phase(const Vec3& direction, const CVec3& dipole);

/// |sum_eta exp(i R.r_eta)|^2
double structure_factor(const EmitterArray& array, const Vec3& direction);

}  // namespace lightwit::geometry
