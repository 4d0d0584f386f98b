// The seven witness candidates built from collective LOO quadratures.
//
// For each collective operator O = sum_eta G^(eta) we keep <O>, <O^2> and the
// local term q = <sum_eta (G^(eta))^2>. With var = <O^2> - <O>^2:
//
//   modified variance        var - q
//   modified second moment   <O^2> - q
//
//   w1    = sum var(X) + sum var(Y) + sum var(Z) - (d - 1) N
//   w2(A) = (N - 1) sum modvar(A) - sum msec(B) - sum msec(C) + N (N - 1)
//   w3(C) = (N - 1) (sum modvar(A) + sum modvar(B)) - sum msec(C) + N (N - 1)
//
// where {A, B, C} = {X, Y, Z}. Every fully separable state has all seven >= 0.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lightwit/geometry.hpp"
#include "lightwit/hilbert.hpp"
#include "lightwit/loos.hpp"

namespace lightwit::witness {

using loos::Family;

/// Plain variances below this are clamped to it (and reported); larger negatives are roundoff.
inline constexpr double kVarianceFloor = -1e-12;
/// W < -kDetectionTol counts as detection.
inline constexpr double kDetectionTol = 1e-9;

struct Moment {
  double first = 0.0;   // <O>
  double second = 0.0;  // <O^2>
  double local = 0.0;   // <sum_eta (G^(eta))^2>

  double variance() const { return second - first * first; }
};

class MomentSet {
public:
  MomentSet(int n_sites, int local_dim);

  int n_sites() const { return n_; }
  int local_dim() const { return d_; }
  std::vector<Moment>& operator[](Family f) { return families_[static_cast<std::size_t>(f)]; }
  const std::vector<Moment>& operator[](Family f) const { return families_[static_cast<std::size_t>(f)]; }

private:
  int n_;
  int d_;
  std::array<std::vector<Moment>, 3> families_;
};

/// One- and two-site reduced density matrices; all that second moments of
/// collective sums ever need.
class SiteMarginals {
public:
  explicit SiteMarginals(const hilbert::DensityMatrix& rho);

  int n_sites() const { return n_; }
  int local_dim() const { return d_; }
  /// rho_eta, eta 1-based.
  const CMatrix& one(int eta) const;
  /// rho_{eta nu} for eta < nu (1-based), site eta as the leading factor.
  const CMatrix& two(int eta, int nu) const;

  /// Marginals of p * I / d^N + (1 - p) rho, without touching the full state.
  SiteMarginals with_white_noise(double p) const;

private:
  SiteMarginals() = default;
  std::size_t pair_slot(int eta, int nu) const;

  int n_ = 0;
  int d_ = 0;
  std::vector<CMatrix> one_;
  std::vector<CMatrix> two_;
};

MomentSet compute_moments(const SiteMarginals& marginals, const loos::LooFamily& family);
MomentSet compute_moments(const hilbert::DensityMatrix& rho, const loos::LooFamily& family);

/// Per-family sums used by the candidates, with the variance clamp applied.
struct FamilySums {
  double variance = 0.0;
  double modified_variance = 0.0;
  double modified_second = 0.0;
};

FamilySums family_sums(const MomentSet& moments, Family f, std::vector<std::string>* warnings = nullptr);

double w1(const MomentSet& moments);
double w2(const MomentSet& moments, Family variance_family);
double w3(const MomentSet& moments, Family second_moment_family);

inline constexpr std::array<const char*, 7> kCandidateLabels = {"w1",   "w2_X", "w2_Y", "w2_Z",
                                                                "w3_X", "w3_Y", "w3_Z"};

struct WitnessBreakdown {
  double w1 = 0.0;
  std::array<double, 3> w2{};  // indexed by variance family
  std::array<double, 3> w3{};  // indexed by second-moment family
  double W = 0.0;
  std::string min_label;
  geometry::Vec3 direction = geometry::Vec3::UnitZ();
  std::vector<std::string> warnings;

  /// Candidates in kCandidateLabels order.
  std::array<double, 7> candidates() const;
  bool detected(double tolerance = kDetectionTol) const { return W < -tolerance; }
};

WitnessBreakdown evaluate(const MomentSet& moments);
WitnessBreakdown witness_min(const hilbert::DensityMatrix& rho, const loos::LooFamily& family);
WitnessBreakdown witness_min(const SiteMarginals& marginals, const loos::LooFamily& family);

struct BlindTriple {
  double w1 = 0.0;
  double w2_Z = 0.0;
  double w3_Z = 0.0;
};

/// The candidates that do not depend on the polarization channel.
BlindTriple polarization_blind_values(const hilbert::DensityMatrix& rho, const loos::LooFamily& family);

struct ThresholdSearch {
  /// Smallest p with W(p) >= 0, or nullopt when W(0) >= 0 already.
  std::optional<double> p_star;
  double w_at_zero = 0.0;
  std::string min_label_at_zero;
  int evaluations = 0;
};

inline constexpr int kCoarseSteps = 64;

/// W evaluated on p * I / d^N + (1 - p) |psi><psi|. A coarse scan with step
/// 1/kCoarseSteps finds the first p with W >= 0; bisection refines it to `resolution`.
/// Throws std::runtime_error if W(1) < 0.
ThresholdSearch noise_threshold(const hilbert::StateVector& psi, const geometry::EmitterArray& array,
                                const geometry::TransitionTable& table, const geometry::DetectionChannel& channel,
                                double resolution = 1e-10);

}  // namespace lightwit::witness
