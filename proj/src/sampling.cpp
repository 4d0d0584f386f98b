#include "lightwit/sampling.hpp"

#include <vector>

namespace lightwit::sampling {

geometry::Vec3 random_unit(Rng& rng) {
  geometry::Vec3 v;
  do v = {rng.normal(), rng.normal(), rng.normal()};
  while (v.norm() < 1e-6);
  return v.normalized();
}

geometry::CVec3 random_complex_unit(Rng& rng) {
  geometry::CVec3 v;
  do
    for (int k = 0; k < 3; ++k) v(k) = cplx(rng.normal(), rng.normal());
  while (v.norm() < 1e-6);
  return v.normalized();
}

geometry::EmitterArray random_array(Rng& rng, int n, int local_dim, double extent) {
  std::vector<geometry::Vec3> positions;
  for (int eta = 0; eta < n; ++eta)
    positions.emplace_back(rng.uniform(0.0, extent), rng.uniform(0.0, extent), rng.uniform(0.0, extent));
  return {std::move(positions), local_dim};
}

geometry::TransitionTable random_table(Rng& rng, int local_dim, bool real_dipoles) {
  geometry::TransitionTable table(local_dim);
  const auto count = geometry::pair_count(local_dim);
  const auto forced = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(count) - 1));
  for (std::size_t k = 0; k < count; ++k) {
    if (k != forced && rng.uniform(0.0, 1.0) < 0.5) continue;
    const auto dipole = real_dipoles ? geometry::CVec3(random_unit(rng).cast<cplx>()) : random_complex_unit(rng);
    table.allow(geometry::pair_at(k, local_dim), dipole);
  }
  return table;
}

geometry::Polarization random_polarization(Rng& rng, const geometry::TransitionTable& table, bool real) {
  geometry::Polarization pol(table.local_dim());
  for (auto pair : table.allowed_pairs())
    pol.set(pair, real ? geometry::CVec3(random_unit(rng).cast<cplx>()) : random_complex_unit(rng));
  return pol;
}

geometry::DetectionChannel random_channel(Rng& rng, const geometry::TransitionTable& table, bool real) {
  const auto direction = random_unit(rng);
  return {direction, random_polarization(rng, table, real)};
}

hilbert::StateVector random_state(Rng& rng, int n_sites, int local_dim) {
  CVector amps(static_cast<Eigen::Index>(hilbert::hilbert_dim(n_sites, local_dim)));
  for (auto& a : amps) a = cplx(rng.normal(), rng.normal());
  return hilbert::StateVector::normalized(std::move(amps), n_sites, local_dim);
}

CMatrix random_density(Rng& rng, int local_dim) {
  CMatrix g(local_dim, local_dim);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = cplx(rng.normal(), rng.normal());
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

hilbert::DensityMatrix random_separable(Rng& rng, int n_sites, int local_dim, int max_terms) {
  const int terms = rng.uniform_int(1, max_terms);
  std::vector<double> weights;
  std::vector<hilbert::DensityMatrix> states;
  double total = 0.0;
  for (int t = 0; t < terms; ++t) {
    weights.push_back(rng.uniform(0.05, 1.0));
    total += weights.back();
    states.push_back(hilbert::DensityMatrix::pure(hilbert::random_product_state(rng.next(), n_sites, local_dim)));
  }
  for (auto& w : weights) w /= total;
  return hilbert::DensityMatrix::mixture(weights, states);
}

}  // namespace lightwit::sampling
