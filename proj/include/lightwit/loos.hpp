// Phase-dependent local orthogonal observables (LOOs) and their collective sums.
//
// For every atom eta at r_eta, detection direction R and transition (alpha, beta)
// with unit phase u = zeta / |zeta|:
//
//   G+ = ( e^{-i R.r} u |a><b| + e^{+i R.r} u* |b><a| ) / sqrt2
//   G- = i ( e^{-i R.r} u |a><b| - e^{+i R.r} u* |b><a| ) / sqrt2
//   Gz = |b><b|                                   (one per level b)
//
// Forbidden transitions and transitions whose zeta vanishes use u = 1 but keep
// the optical phase. The d^2 operators are stored per atom in index-map order:
// all G+ (pairs in lexicographic order), then all G-, then the d projectors.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "lightwit/geometry.hpp"
#include "lightwit/hilbert.hpp"

namespace lightwit::loos {

using geometry::TransitionPair;

/// X collects the G+ quadratures, Y the G- quadratures, Z the populations.
enum class Family { X = 0, Y = 1, Z = 2 };
inline constexpr Family kFamilies[] = {Family::X, Family::Y, Family::Z};
char to_char(Family f);

struct LooIndex {
  Family family;
  TransitionPair pair;  // X, Y only
  int level = 0;        // Z only, 1-based
};

/// Bijection between the single 1-based index m in [1, d^2] and (family, pair or level).
class LooIndexMap {
public:
  explicit LooIndexMap(int local_dim);

  int local_dim() const { return d_; }
  int size() const { return d_ * d_; }
  int pairs() const { return d_ * (d_ - 1) / 2; }
  /// Number of indices in a family: pairs() for X and Y, d for Z.
  int family_size(Family f) const { return f == Family::Z ? d_ : pairs(); }

  LooIndex at(int m) const;
  int plus_index(TransitionPair pair) const;
  int minus_index(TransitionPair pair) const;
  int population_index(int level) const;
  /// m of the k-th (0-based) member of a family.
  int index_of(Family f, int k) const;

private:
  int d_;
};

/// d^2 Hermitian d x d operators of one atom, 0-based storage of the 1-based index m.
using AtomLoos = std::vector<CMatrix>;

class LooFamily {
public:
  LooFamily(std::vector<AtomLoos> per_atom, std::vector<cplx> unit_phases, geometry::Vec3 direction,
            std::vector<std::string> warnings);

  int n_sites() const { return static_cast<int>(per_atom_.size()); }
  int local_dim() const { return index_.local_dim(); }
  const LooIndexMap& index_map() const { return index_; }

  /// G^(atom)_m with atom in [1, N] and m in [1, d^2].
  const CMatrix& op(int atom, int m) const;
  const AtomLoos& atom(int atom) const;
  /// Unit phase used for the transition (1 for forbidden or degenerate ones).
  cplx unit_phase(TransitionPair pair) const;
  const geometry::Vec3& direction() const { return direction_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Test hook: multiplies only the (alpha, beta) entry of atom 1's first G+ by e^{i angle},
  /// leaving the conjugate entry alone.
  void corrupt_phase_for_testing(double angle);

private:
  std::vector<AtomLoos> per_atom_;
  std::vector<cplx> unit_phases_;
  geometry::Vec3 direction_;
  std::vector<std::string> warnings_;
  LooIndexMap index_;
};

LooFamily build_loos(const geometry::EmitterArray& array, const geometry::TransitionTable& table,
                     const geometry::DetectionChannel& channel);

/// LOOs for one atom given its optical phase R.r and the per-pair unit phases.
AtomLoos atom_loos(double optical_phase, std::span<const cplx> unit_phases, int local_dim);

struct Quadratures {
  std::vector<hilbert::CollectiveOperator> x;
  std::vector<hilbert::CollectiveOperator> y;
  std::vector<hilbert::CollectiveOperator> z;

  const std::vector<hilbert::CollectiveOperator>& operator[](Family f) const;
};

/// X_mu = sum_eta G+^(eta), Y_mu = sum_eta G-^(eta), Z_b = sum_eta |b><b|.
Quadratures collective_quadratures(const LooFamily& family);

struct LooDecomposition {
  std::vector<double> coefficients;
  double norm_squared() const;
};

/// g_m = tr(rho G_m) for a single-atom density matrix.
LooDecomposition loo_decompose(const CMatrix& rho_single, std::span<const CMatrix> atom_loos);
CMatrix reconstruct(const LooDecomposition& g, std::span<const CMatrix> atom_loos);

struct BasisErrors {
  double hermiticity = 0.0;    // max_m max |G - G^dagger|
  double orthonormality = 0.0; // max_mn |tr(G_m G_n) - delta_mn|
  double completeness = 0.0;   // max |sum_m G_m^2 - d * I|
};

/// Orthonormal Hermitian bases satisfy sum_m G_m^2 = d * I.
BasisErrors check_basis(std::span<const CMatrix> atom_loos);

}  // namespace lightwit::loos
