// Random geometries, dipole tables, channels and states for property checks.
//
// Everything draws from std::mt19937_64; Gaussian variates come from
// std::normal_distribution<double>, so a seed reproduces a draw exactly on one
// standard library (not necessarily across implementations).
#pragma once

#include <cstdint>
#include <random>

#include "lightwit/geometry.hpp"
#include "lightwit/hilbert.hpp"

namespace lightwit::sampling {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>()(engine_); }
  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

geometry::Vec3 random_unit(Rng& rng);
geometry::CVec3 random_complex_unit(Rng& rng);

/// n emitters uniformly in a cube of side `extent` (units of 1/k0).
geometry::EmitterArray random_array(Rng& rng, int n, int local_dim, double extent = 20.0);

/// Each transition allowed with probability 1/2 (at least one allowed), unit dipoles.
geometry::TransitionTable random_table(Rng& rng, int local_dim, bool real_dipoles);

/// Independent unit vector per allowed transition.
geometry::Polarization random_polarization(Rng& rng, const geometry::TransitionTable& table, bool real);

geometry::DetectionChannel random_channel(Rng& rng, const geometry::TransitionTable& table, bool real);

/// Haar-random pure state on the full space.
hilbert::StateVector random_state(Rng& rng, int n_sites, int local_dim);

/// Random single-qudit density matrix (Ginibre, rank up to d).
CMatrix random_density(Rng& rng, int local_dim);

/// Convex mixture of 1..max_terms random pure product states with random weights.
hilbert::DensityMatrix random_separable(Rng& rng, int n_sites, int local_dim, int max_terms = 5);

}  // namespace lightwit::sampling
