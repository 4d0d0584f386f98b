#include "lightwit/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lightwit::geometry {

namespace {

void require_unit(const Vec3& v, const char* what) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > kUnitTol) throw std::invalid_argument(std::string(what) + " must be a unit vector");
}

void require_unit(const CVec3& v, const char* what) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > kUnitTol) throw std::invalid_argument(std::string(what) + " must be a unit vector");
}

bool is_real(const CVec3& v) { return v.imag().cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

std::size_t pair_count(int local_dim) {
  return static_cast<std::size_t>(local_dim) * static_cast<std::size_t>(local_dim - 1) / 2;
}

std::size_t pair_index(TransitionPair pair, int local_dim) {
  if (pair.alpha < 1 || pair.beta > local_dim || pair.alpha >= pair.beta)
    throw std::out_of_range("invalid transition " + to_string(pair) + " for d = " + std::to_string(local_dim));
  // pairs with first index < alpha come first
  std::size_t index = 0;
  for (int a = 1; a < pair.alpha; ++a) index += static_cast<std::size_t>(local_dim - a);
  return index + static_cast<std::size_t>(pair.beta - pair.alpha - 1);
}

TransitionPair pair_at(std::size_t index, int local_dim) {
  for (int a = 1; a < local_dim; ++a) {
    const auto row = static_cast<std::size_t>(local_dim - a);
    if (index < row) return {a, a + 1 + static_cast<int>(index)};
    index -= row;
  }
  throw std::out_of_range("transition index out of range");
}

std::string to_string(TransitionPair pair) { return std::to_string(pair.alpha) + "-" + std::to_string(pair.beta); }

// ---------------------------------------------------------------------------

EmitterArray::EmitterArray(std::vector<Vec3> positions, int local_dim)
    : positions_(std::move(positions)), local_dim_(local_dim) {
  if (positions_.empty()) throw std::invalid_argument("emitter array needs at least one emitter");
  if (local_dim_ < 2) throw std::invalid_argument("local_dim must be >= 2");
  for (const auto& r : positions_)
    if (!r.allFinite()) throw std::invalid_argument("emitter positions must be finite");
}

EmitterArray EmitterArray::linear_lattice(int n, double spacing, const Vec3& axis, int local_dim) {
  if (n < 1) throw std::invalid_argument("lattice needs n >= 1");
  require_unit(axis, "lattice axis");
  std::vector<Vec3> positions;
  positions.reserve(static_cast<std::size_t>(n));
  for (int eta = 0; eta < n; ++eta) positions.emplace_back(static_cast<double>(eta) * spacing * axis);
  return EmitterArray(std::move(positions), local_dim);
}

// ---------------------------------------------------------------------------

TransitionTable::TransitionTable(int local_dim) : local_dim_(local_dim) {
  if (local_dim < 2) throw std::invalid_argument("local_dim must be >= 2");
  dipoles_.resize(pair_count(local_dim));
}

void TransitionTable::allow(TransitionPair pair, const CVec3& dipole) {
  require_unit(dipole, "dipole");
  dipoles_[pair_index(pair, local_dim_)] = dipole;
}

bool TransitionTable::allowed(TransitionPair pair) const { return dipoles_[pair_index(pair, local_dim_)].has_value(); }

const CVec3& TransitionTable::dipole(TransitionPair pair) const {
  const auto& d = dipoles_[pair_index(pair, local_dim_)];
  if (!d) throw std::invalid_argument("transition " + to_string(pair) + " is forbidden");
  return *d;
}

std::vector<TransitionPair> TransitionTable::allowed_pairs() const {
  std::vector<TransitionPair> out;
  for (std::size_t i = 0; i < dipoles_.size(); ++i)
    if (dipoles_[i]) out.push_back(pair_at(i, local_dim_));
  return out;
}

int TransitionTable::allowed_count() const { return static_cast<int>(allowed_pairs().size()); }

int TransitionTable::forbidden_count() const { return static_cast<int>(dipoles_.size()) - allowed_count(); }

bool TransitionTable::all_real() const {
  for (const auto& d : dipoles_)
    if (d && !is_real(*d)) return false;
  return true;
}

// ---------------------------------------------------------------------------

std::string_view to_string(PolarizationPreset preset) {
  switch (preset) {
    case PolarizationPreset::e_plus: return "e_plus";
    case PolarizationPreset::e_minus: return "e_minus";
    case PolarizationPreset::e_z: return "e_z";
  }
  return "?";
}

std::optional<PolarizationPreset> parse_preset(std::string_view name) {
  if (name == "e_plus") return PolarizationPreset::e_plus;
  if (name == "e_minus") return PolarizationPreset::e_minus;
  if (name == "e_z") return PolarizationPreset::e_z;
  return std::nullopt;
}

std::pair<CVec3, CVec3> circular_basis() {
  const double s = kCircularSign / std::numbers::sqrt2;
  const CVec3 plus(cplx(s, 0.0), cplx(0.0, s), cplx(0.0, 0.0));
  const CVec3 minus(cplx(-s, 0.0), cplx(0.0, s), cplx(0.0, 0.0));
  return {plus, minus};
}

CVec3 preset_vector(PolarizationPreset preset) {
  switch (preset) {
    case PolarizationPreset::e_plus: return circular_basis().first;
    case PolarizationPreset::e_minus: return circular_basis().second;
    case PolarizationPreset::e_z: return CVec3(0.0, 0.0, 1.0);
  }
  throw std::logic_error("unknown polarization preset");
}

// ---------------------------------------------------------------------------

Polarization::Polarization(int local_dim) : local_dim_(local_dim) { vectors_.resize(pair_count(local_dim)); }

Polarization Polarization::uniform(const CVec3& e, const TransitionTable& table) {
  Polarization pol(table.local_dim());
  for (auto pair : table.allowed_pairs()) pol.set(pair, e);
  return pol;
}

Polarization Polarization::uniform(PolarizationPreset preset, const TransitionTable& table) {
  return uniform(preset_vector(preset), table);
}

void Polarization::set(TransitionPair pair, const CVec3& e) {
  require_unit(e, "polarization vector");
  vectors_[pair_index(pair, local_dim_)] = e;
}

const std::optional<CVec3>& Polarization::at(TransitionPair pair) const { return vectors_[pair_index(pair, local_dim_)]; }

bool Polarization::all_real() const {
  for (const auto& e : vectors_)
    if (e && !is_real(*e)) return false;
  return true;
}

void Polarization::validate_against(const TransitionTable& table) const {
  if (table.local_dim() != local_dim_) throw std::invalid_argument("polarization and transition table disagree on d");
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    const auto pair = pair_at(i, local_dim_);
    if (table.allowed(pair) && !vectors_[i])
      throw std::invalid_argument("no polarization given for allowed transition " + to_string(pair));
    if (!table.allowed(pair) && vectors_[i])
      throw std::invalid_argument("polarization given for forbidden transition " + to_string(pair));
  }
}

DetectionChannel::DetectionChannel(const Vec3& direction, Polarization polarization)
    : direction_(direction), polarization_(std::move(polarization)) {
  require_unit(direction_, "detection direction");
}

// ---------------------------------------------------------------------------

Vec3 direction_from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

CVec3 projected_dipole(const Vec3& direction, const CVec3& dipole) {
  require_unit(direction, "direction");
  const CVec3 r = direction.cast<cplx>();
  const cplx along = r.transpose() * dipole;
  return r * along - dipole;
}

Zeta zeta(const DetectionChannel& channel, TransitionPair pair, const TransitionTable& table) {
  const auto& dipole = table.dipole(pair);
  const auto& e = channel.polarization().at(pair);
  if (!e) throw std::invalid_argument("no polarization for transition " + to_string(pair));
  const CVec3 v = projected_dipole(channel.direction(), dipole);
  const cplx value = e->transpose() * v;
  return {value, std::abs(value) < kDegenerateZeta};
}

double dipole_phase(const Vec3& direction, const Vec3& dipole) {
  const CVec3 v = projected_dipole(direction, dipole.cast<cplx>());
  const double v1 = v(0).real();
  const double v2 = v(1).real();
  if (std::hypot(v1, v2) < kDegenerateZeta) throw std::domain_error("dipole phase undefined: projected dipole has no transverse xy part");
  return std::atan2(v2, v1);
}

double dipole_phase(const Vec3& direction, const CVec3& dipole) {
  if (!is_real(dipole)) throw std::invalid_argument("dipole phase needs a real dipole");
  return dipole_phase(direction, Vec3(dipole.real()));
}

double structure_factor(const EmitterArray& array, const Vec3& direction) {
  require_unit(direction, "direction");
  cplx sum{};
  for (const auto& r : array.positions()) sum += std::polar(1.0, direction.dot(r));
  return std::norm(sum);
}

}  // namespace lightwit::geometry
