#include "lightwit/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "lightwit/loos.hpp"

namespace lightwit::scan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_increasing(const std::vector<double>& v, double lo, double hi, bool hi_open, const char* name) {
  if (v.empty()) throw std::invalid_argument(std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool above = hi_open ? v[i] >= hi : v[i] > hi;
    if (!std::isfinite(v[i]) || v[i] < lo || above)
      throw std::invalid_argument(std::string(name) + " grid value out of range");
    if (i > 0 && v[i] <= v[i - 1]) throw std::invalid_argument(std::string(name) + " grid must be strictly increasing");
  }
}

bool same_angle(double a, double b) { return std::abs(std::remainder(a - b, kTwoPi)) < kPhaseMatchTol; }

}  // namespace

AngularGrid::AngularGrid(std::vector<double> theta, std::vector<double> phi)
    : theta_(std::move(theta)), phi_(std::move(phi)) {
  require_increasing(theta_, 0.0, std::numbers::pi, false, "theta");
  require_increasing(phi_, 0.0, kTwoPi, true, "phi");
}

AngularGrid AngularGrid::uniform(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw std::invalid_argument("grid needs at least one point per axis");
  std::vector<double> theta(static_cast<std::size_t>(n_theta));
  std::vector<double> phi(static_cast<std::size_t>(n_phi));
  for (int i = 0; i < n_theta; ++i)
    theta[static_cast<std::size_t>(i)] = n_theta == 1 ? std::numbers::pi / 2 : std::numbers::pi * i / (n_theta - 1);
  for (int j = 0; j < n_phi; ++j) phi[static_cast<std::size_t>(j)] = kTwoPi * j / n_phi;
  return {std::move(theta), std::move(phi)};
}

std::pair<double, double> stereographic(double theta, double phi) {
  const double r = std::min(std::tan(theta / 2.0), kStereoSentinel);
  return {r * std::cos(phi), r * std::sin(phi)};
}

// ---------------------------------------------------------------------------

double WitnessField::violating_fraction(double tolerance) const {
  if (points.empty()) return 0.0;
  const auto n = std::count_if(points.begin(), points.end(), [&](const FieldPoint& p) { return p.witness.detected(tolerance); });
  return static_cast<double>(n) / static_cast<double>(points.size());
}

std::size_t WitnessField::argmin() const {
  if (points.empty()) throw std::logic_error("empty witness field");
  std::size_t best = 0;
  for (std::size_t k = 1; k < points.size(); ++k)
    if (points[k].witness.W < points[best].witness.W) best = k;
  return best;
}

namespace {

std::optional<geometry::PolarizationPreset> common_preset(const geometry::Polarization& pol,
                                                          const geometry::TransitionTable& table) {
  for (auto preset : {geometry::PolarizationPreset::e_plus, geometry::PolarizationPreset::e_minus,
                      geometry::PolarizationPreset::e_z}) {
    const auto e = geometry::preset_vector(preset);
    bool all = !table.allowed_pairs().empty();
    for (auto pair : table.allowed_pairs()) all = all && pol.at(pair) && (*pol.at(pair) - e).norm() < 1e-12;
    if (all) return preset;
  }
  return std::nullopt;
}

FieldPoint evaluate_point(const witness::SiteMarginals& marginals, const geometry::EmitterArray& array,
                          const geometry::TransitionTable& table, const geometry::Polarization& polarization,
                          double theta, double phi) {
  FieldPoint p;
  p.theta = theta;
  p.phi = phi;
  p.direction = geometry::direction_from_angles(theta, phi);
  p.direction.normalize();
  std::tie(p.x_stereo, p.y_stereo) = stereographic(theta, phi);
  const geometry::DetectionChannel channel(p.direction, polarization);
  p.witness = witness::witness_min(marginals, loos::build_loos(array, table, channel));
  for (const auto& r : array.positions()) p.optical_phases.push_back(p.direction.dot(r));
  for (auto pair : table.allowed_pairs()) {
    std::optional<double> phase;
    try {
      phase = geometry::dipole_phase(p.direction, table.dipole(pair));
    } catch (const std::exception&) {
      // complex dipole or no transverse projection: phase undefined
    }
    p.dipole_phases.push_back(phase);
  }
  return p;
}

}  // namespace

WitnessField sweep(const hilbert::DensityMatrix& rho, const geometry::EmitterArray& array,
                   const geometry::TransitionTable& table, const geometry::Polarization& polarization,
                   const AngularGrid& grid, unsigned threads) {
  if (rho.n_sites() != array.size() || rho.local_dim() != table.local_dim())
    throw std::invalid_argument("state, emitter array and transition table disagree on (N, d)");
  polarization.validate_against(table);

  const witness::SiteMarginals marginals(rho);
  WitnessField field{grid, std::vector<FieldPoint>(grid.size()), table.all_real(), common_preset(polarization, table)};

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, grid.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t k = next++; k < grid.size() && !failed; k = next++) {
      try {
        const auto [i, j] = grid.unflatten(k);
        field.points[k] = evaluate_point(marginals, array, table, polarization, grid.theta()[i], grid.phi()[j]);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return field;
}

// ---------------------------------------------------------------------------

namespace {

bool partners(const FieldPoint& a, const FieldPoint& b) {
  if (a.optical_phases.size() != b.optical_phases.size() || a.dipole_phases.size() != b.dipole_phases.size()) return false;
  for (std::size_t k = 0; k < a.optical_phases.size(); ++k)
    if (!same_angle(a.optical_phases[k], b.optical_phases[k])) return false;
  for (std::size_t k = 0; k < a.dipole_phases.size(); ++k) {
    const auto& pa = a.dipole_phases[k];
    const auto& pb = b.dipole_phases[k];
    if (pa.has_value() != pb.has_value()) return false;
    if (pa && !same_angle(*pa, -*pb)) return false;
  }
  return true;
}

}  // namespace

MirrorReport mirror_check(const WitnessField& plus, const WitnessField& minus) {
  if (!(plus.grid == minus.grid) || plus.points.size() != minus.points.size())
    throw std::invalid_argument("mirror check needs both fields on the same grid");
  if (!plus.real_dipoles || !minus.real_dipoles) throw std::invalid_argument("mirror check needs real dipoles");
  if (plus.preset != geometry::PolarizationPreset::e_plus || minus.preset != geometry::PolarizationPreset::e_minus)
    throw std::invalid_argument("mirror check compares an e_plus field with an e_minus field");

  const auto& grid = plus.grid;
  const std::size_t n_phi = grid.phi().size();
  MirrorReport report;
  for (std::size_t k = 0; k < plus.points.size(); ++k) {
    const FieldPoint& a = plus.points[k];
    // (theta, 2 pi - phi) is the partner for emitters on the xz-plane; try it first
    const FieldPoint* match = nullptr;
    const auto [i, j] = grid.unflatten(k);
    const std::size_t guess = i * n_phi + (n_phi - j) % n_phi;
    if (partners(a, minus.points[guess])) {
      match = &minus.points[guess];
    } else {
      for (const auto& b : minus.points)
        if (partners(a, b)) {
          match = &b;
          break;
        }
    }
    if (!match) {
      ++report.unmatched;
      continue;
    }
    ++report.compared;
    const auto va = a.witness.candidates();
    const auto vb = match->witness.candidates();
    for (std::size_t c = 0; c < va.size(); ++c) report.max_discrepancy = std::max(report.max_discrepancy, std::abs(va[c] - vb[c]));
    report.max_discrepancy = std::max(report.max_discrepancy, std::abs(a.witness.W - match->witness.W));
  }
  return report;
}

// ---------------------------------------------------------------------------

void write_csv(std::ostream& out, const WitnessField& field, const std::vector<std::string>& provenance) {
  for (const auto& line : provenance) out << "# " << line << '\n';
  out << kCsvHeader << '\n';
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : field.points) {
    out << p.theta << ',' << p.phi << ',' << p.x_stereo << ',' << p.y_stereo;
    for (double v : p.witness.candidates()) out << ',' << v;
    out << ',' << p.witness.W << ',' << p.witness.min_label << '\n';
  }
  out.precision(old_precision);
}

nlohmann::json to_json(const witness::WitnessBreakdown& b) {
  nlohmann::json j;
  j["w1"] = b.w1;
  for (std::size_t f = 0; f < 3; ++f) {
    const char c = loos::to_char(static_cast<loos::Family>(f));
    j[std::string("w2_") + c] = b.w2[f];
    j[std::string("w3_") + c] = b.w3[f];
  }
  j["W"] = b.W;
  j["min_label"] = b.min_label;
  j["direction"] = {b.direction.x(), b.direction.y(), b.direction.z()};
  j["warnings"] = b.warnings;
  return j;
}

nlohmann::json to_json(const WitnessField& field) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["columns"] = nlohmann::json::array();
  {
    std::string header = kCsvHeader;
    std::size_t start = 0;
    for (std::size_t comma; (comma = header.find(',', start)) != std::string::npos; start = comma + 1)
      j["columns"].push_back(header.substr(start, comma - start));
    j["columns"].push_back(header.substr(start));
  }
  j["grid"] = {{"theta", field.grid.theta()}, {"phi", field.grid.phi()}};
  auto& rows = j["points"] = nlohmann::json::array();
  for (const auto& p : field.points) {
    nlohmann::json row = to_json(p.witness);
    row.erase("direction");
    row.erase("warnings");
    row["theta"] = p.theta;
    row["phi"] = p.phi;
    row["x_stereo"] = p.x_stereo;
    row["y_stereo"] = p.y_stereo;
    rows.push_back(std::move(row));
  }
  return j;
}

}  // namespace lightwit::scan
