#include "lightwit/loos.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lightwit::loos {

char to_char(Family f) {
  switch (f) {
    case Family::X: return 'X';
    case Family::Y: return 'Y';
    case Family::Z: return 'Z';
  }
  return '?';
}

// ---------------------------------------------------------------------------

LooIndexMap::LooIndexMap(int local_dim) : d_(local_dim) {
  if (local_dim < 2) throw std::invalid_argument("local_dim must be >= 2");
}

LooIndex LooIndexMap::at(int m) const {
  if (m < 1 || m > size()) throw std::out_of_range("LOO index out of range");
  const int k = m - 1;
  if (k < pairs()) return {Family::X, geometry::pair_at(static_cast<std::size_t>(k), d_), 0};
  if (k < 2 * pairs()) return {Family::Y, geometry::pair_at(static_cast<std::size_t>(k - pairs()), d_), 0};
  return {Family::Z, {}, k - 2 * pairs() + 1};
}

int LooIndexMap::plus_index(TransitionPair pair) const {
  return static_cast<int>(geometry::pair_index(pair, d_)) + 1;
}

int LooIndexMap::minus_index(TransitionPair pair) const { return plus_index(pair) + pairs(); }

int LooIndexMap::population_index(int level) const {
  if (level < 1 || level > d_) throw std::out_of_range("level out of range");
  return 2 * pairs() + level;
}

int LooIndexMap::index_of(Family f, int k) const {
  if (k < 0 || k >= family_size(f)) throw std::out_of_range("family member out of range");
  return static_cast<int>(f) * pairs() + k + 1;
}

// ---------------------------------------------------------------------------

LooFamily::LooFamily(std::vector<AtomLoos> per_atom, std::vector<cplx> unit_phases, geometry::Vec3 direction,
                     std::vector<std::string> warnings)
    : per_atom_(std::move(per_atom)),
      unit_phases_(std::move(unit_phases)),
      direction_(direction),
      warnings_(std::move(warnings)),
      index_(per_atom_.empty() || per_atom_.front().empty() ? 2 : static_cast<int>(per_atom_.front().front().rows())) {
  if (per_atom_.empty()) throw std::invalid_argument("LOO family needs at least one atom");
  for (const auto& atom : per_atom_)
    if (static_cast<int>(atom.size()) != index_.size()) throw std::invalid_argument("each atom needs d^2 LOOs");
  if (static_cast<int>(unit_phases_.size()) != index_.pairs()) throw std::invalid_argument("one unit phase per transition");
}

const CMatrix& LooFamily::op(int atom_index, int m) const {
  if (m < 1 || m > index_.size()) throw std::out_of_range("LOO index out of range");
  return atom(atom_index)[static_cast<std::size_t>(m - 1)];
}

const AtomLoos& LooFamily::atom(int atom_index) const {
  if (atom_index < 1 || atom_index > n_sites()) throw std::out_of_range("atom index out of range");
  return per_atom_[static_cast<std::size_t>(atom_index - 1)];
}

cplx LooFamily::unit_phase(TransitionPair pair) const {
  return unit_phases_[geometry::pair_index(pair, local_dim())];
}

void LooFamily::corrupt_phase_for_testing(double angle) {
  auto& g = per_atom_.front().front();
  g(0, 1) *= std::polar(1.0, angle);
}

// ---------------------------------------------------------------------------

AtomLoos atom_loos(double optical_phase, std::span<const cplx> unit_phases, int local_dim) {
  const LooIndexMap index(local_dim);
  if (static_cast<int>(unit_phases.size()) != index.pairs()) throw std::invalid_argument("one unit phase per transition");

  AtomLoos ops(static_cast<std::size_t>(index.size()));
  const cplx optical = std::polar(1.0, -optical_phase);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const cplx i(0.0, 1.0);

  for (int k = 0; k < index.pairs(); ++k) {
    const auto pair = geometry::pair_at(static_cast<std::size_t>(k), local_dim);
    const cplx c = optical * unit_phases[static_cast<std::size_t>(k)];  // coefficient of |a><b|
    CMatrix plus = CMatrix::Zero(local_dim, local_dim);
    CMatrix minus = CMatrix::Zero(local_dim, local_dim);
    plus(pair.alpha - 1, pair.beta - 1) = c * inv_sqrt2;
    plus(pair.beta - 1, pair.alpha - 1) = std::conj(c) * inv_sqrt2;
    minus(pair.alpha - 1, pair.beta - 1) = i * c * inv_sqrt2;
    minus(pair.beta - 1, pair.alpha - 1) = -i * std::conj(c) * inv_sqrt2;
    ops[static_cast<std::size_t>(index.plus_index(pair) - 1)] = std::move(plus);
    ops[static_cast<std::size_t>(index.minus_index(pair) - 1)] = std::move(minus);
  }
  for (int level = 1; level <= local_dim; ++level)
    ops[static_cast<std::size_t>(index.population_index(level) - 1)] = hilbert::ladder(level, level, local_dim);
  return ops;
}

LooFamily build_loos(const geometry::EmitterArray& array, const geometry::TransitionTable& table,
                     const geometry::DetectionChannel& channel) {
  const int d = table.local_dim();
  if (array.local_dim() != d) throw std::invalid_argument("emitter array and transition table disagree on d");
  channel.polarization().validate_against(table);

  std::vector<cplx> unit(geometry::pair_count(d), cplx(1.0, 0.0));
  std::vector<std::string> warnings;
  for (auto pair : table.allowed_pairs()) {
    const auto z = geometry::zeta(channel, pair, table);
    if (z.degenerate) {
      warnings.push_back("transition " + geometry::to_string(pair) +
                         ": zeta vanishes for this channel, using the zeta-free LOOs");
      continue;
    }
    unit[geometry::pair_index(pair, d)] = z.value / std::abs(z.value);
  }

  std::vector<AtomLoos> per_atom;
  per_atom.reserve(static_cast<std::size_t>(array.size()));
  for (const auto& r : array.positions()) per_atom.push_back(atom_loos(channel.direction().dot(r), unit, d));
  return LooFamily(std::move(per_atom), std::move(unit), channel.direction(), std::move(warnings));
}

// ---------------------------------------------------------------------------

const std::vector<hilbert::CollectiveOperator>& Quadratures::operator[](Family f) const {
  switch (f) {
    case Family::X: return x;
    case Family::Y: return y;
    case Family::Z: return z;
  }
  throw std::logic_error("unknown family");
}

Quadratures collective_quadratures(const LooFamily& family) {
  Quadratures q;
  const auto& index = family.index_map();
  for (Family f : kFamilies) {
    auto& out = f == Family::X ? q.x : f == Family::Y ? q.y : q.z;
    for (int k = 0; k < index.family_size(f); ++k) {
      const int m = index.index_of(f, k);
      std::vector<CMatrix> per_site;
      for (int atom = 1; atom <= family.n_sites(); ++atom) per_site.push_back(family.op(atom, m));
      out.push_back(hilbert::CollectiveOperator::site_sum(std::move(per_site)));
    }
  }
  return q;
}

// ---------------------------------------------------------------------------

double LooDecomposition::norm_squared() const {
  double s = 0.0;
  for (double g : coefficients) s += g * g;
  return s;
}

LooDecomposition loo_decompose(const CMatrix& rho_single, std::span<const CMatrix> atom_loos) {
  if (atom_loos.empty()) throw std::invalid_argument("empty LOO set");
  const auto d = atom_loos.front().rows();
  if (rho_single.rows() != d || rho_single.cols() != d) throw std::invalid_argument("loo_decompose: dimension mismatch");
  LooDecomposition out;
  out.coefficients.reserve(atom_loos.size());
  for (const auto& g : atom_loos) out.coefficients.push_back((rho_single * g).trace().real());
  return out;
}

CMatrix reconstruct(const LooDecomposition& g, std::span<const CMatrix> atom_loos) {
  if (g.coefficients.size() != atom_loos.size()) throw std::invalid_argument("reconstruct: coefficient count mismatch");
  CMatrix out = CMatrix::Zero(atom_loos.front().rows(), atom_loos.front().cols());
  for (std::size_t m = 0; m < atom_loos.size(); ++m) out += g.coefficients[m] * atom_loos[m];
  return out;
}

BasisErrors check_basis(std::span<const CMatrix> atom_loos) {
  BasisErrors err;
  if (atom_loos.empty()) return err;
  const auto d = atom_loos.front().rows();
  CMatrix sum_sq = CMatrix::Zero(d, d);
  for (std::size_t m = 0; m < atom_loos.size(); ++m) {
    err.hermiticity = std::max(err.hermiticity, hilbert::hermiticity_error(atom_loos[m]));
    for (std::size_t n = 0; n < atom_loos.size(); ++n) {
      const cplx overlap = (atom_loos[m] * atom_loos[n]).trace();
      err.orthonormality = std::max(err.orthonormality, std::abs(overlap - (m == n ? 1.0 : 0.0)));
    }
    sum_sq += atom_loos[m] * atom_loos[m];
  }
  err.completeness = (sum_sq - static_cast<double>(d) * CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  return err;
}

}  // namespace lightwit::loos
