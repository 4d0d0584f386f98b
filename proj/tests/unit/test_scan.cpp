#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "lightwit/sampling.hpp"
#include "lightwit/scan.hpp"
#include "lightwit/states.hpp"
#include "oracle.hpp"

using namespace lightwit;
using namespace lightwit::scan;
using geometry::CVec3;
using geometry::Polarization;
using geometry::PolarizationPreset;
using geometry::Vec3;

namespace {

constexpr double kPi = std::numbers::pi;

struct Scene {
  geometry::EmitterArray array;
  geometry::TransitionTable table;
};

Scene two_qutrit_scene() {
  Scene s{geometry::EmitterArray({Vec3::Zero(), Vec3(0, 0, 15)}, 3), geometry::TransitionTable(3)};
  s.table.allow({1, 2}, Vec3(1, 0, 1).normalized().cast<cplx>());
  s.table.allow({1, 3}, Vec3(1, 0, -1).normalized().cast<cplx>());
  return s;
}

/// Two-level atoms on the x axis with dipoles along z.
Scene dicke_lattice(int n, double spacing) {
  Scene s{geometry::EmitterArray::linear_lattice(n, spacing, Vec3::UnitX(), n), geometry::TransitionTable(n)};
  for (std::size_t k = 0; k < geometry::pair_count(n); ++k) s.table.allow(geometry::pair_at(k, n), CVec3(0, 0, 1));
  return s;
}

Scene random_xz_scene(sampling::Rng& rng, int n, int d) {
  std::vector<Vec3> positions;
  for (int eta = 0; eta < n; ++eta) positions.emplace_back(rng.uniform(-10, 10), 0.0, rng.uniform(-10, 10));
  Scene s{geometry::EmitterArray(std::move(positions), d), geometry::TransitionTable(d)};
  for (std::size_t k = 0; k < geometry::pair_count(d); ++k) {
    const double a = rng.uniform(0.0, 2 * kPi);
    s.table.allow(geometry::pair_at(k, d), CVec3(std::cos(a), 0.0, std::sin(a)));
  }
  return s;
}

WitnessField circular(const hilbert::DensityMatrix& rho, const Scene& s, PolarizationPreset p, const AngularGrid& grid) {
  return sweep(rho, s.array, s.table, Polarization::uniform(p, s.table), grid, 2);
}

}  // namespace

TEST_CASE("angular grid") {
  const auto g = AngularGrid::uniform(5, 8);
  CHECK(g.size() == 40);
  CHECK(g.theta().front() == 0.0);
  CHECK(g.theta().back() == doctest::Approx(kPi));
  CHECK(g.phi()[2] == doctest::Approx(kPi / 2));
  CHECK(g.phi().back() < 2 * kPi);
  CHECK(g.unflatten(13) == std::pair<std::size_t, std::size_t>{1, 5});
  CHECK(AngularGrid::uniform(1, 1).theta().front() == doctest::Approx(kPi / 2));

  CHECK_THROWS_AS(AngularGrid({}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(AngularGrid({0.2, 0.1}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(AngularGrid({0.0, 4.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(AngularGrid({0.0}, {0.0, 2 * kPi}), std::invalid_argument);
  CHECK_THROWS_AS(AngularGrid::uniform(0, 3), std::invalid_argument);
}

TEST_CASE("stereographic map") {
  const auto [x0, y0] = stereographic(0.0, 1.0);
  CHECK(x0 == 0.0);
  CHECK(y0 == 0.0);
  const auto [x1, y1] = stereographic(kPi / 2, 0.0);
  CHECK(x1 == doctest::Approx(1.0));
  CHECK(std::abs(y1) < 1e-15);
  const auto [x2, y2] = stereographic(kPi / 2, kPi / 2);
  CHECK(std::abs(x2) < 1e-15);
  CHECK(y2 == doctest::Approx(1.0));
  const auto [x3, y3] = stereographic(kPi, 0.0);
  CHECK(std::hypot(x3, y3) == doctest::Approx(kStereoSentinel));
  for (double t : {0.3, 1.2, 2.0, 3.0}) {
    const auto [x, y] = stereographic(t, 0.8);
    CHECK(std::hypot(x, y) == doctest::Approx(std::tan(t / 2)));
  }
}

TEST_CASE("sweep is deterministic across thread counts") {
  sampling::Rng rng(200);
  const auto table = sampling::random_table(rng, 3, false);
  const auto array = sampling::random_array(rng, 2, 3);
  const auto rho = hilbert::DensityMatrix::pure(sampling::random_state(rng, 2, 3));
  const auto pol = sampling::random_polarization(rng, table, false);
  const auto grid = AngularGrid::uniform(7, 11);
  const auto a = sweep(rho, array, table, pol, grid, 1);
  const auto b = sweep(rho, array, table, pol, grid, 4);
  REQUIRE(a.points.size() == grid.size());
  REQUIRE(b.points.size() == grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(a.points[k].witness.candidates() == b.points[k].witness.candidates());
    CHECK(a.points[k].theta == b.points[k].theta);
    CHECK(a.points[k].phi == b.points[k].phi);
  }
  CHECK(a.argmin() == b.argmin());
  CHECK(a.real_dipoles == table.all_real());
}

TEST_CASE("sweep points carry the witness at their direction") {
  const auto s = two_qutrit_scene();
  const auto rho = hilbert::DensityMatrix::pure(states::two_qutrit_example());
  const auto pol = Polarization::uniform(PolarizationPreset::e_plus, s.table);
  const auto field = sweep(rho, s.array, s.table, pol, AngularGrid::uniform(5, 6), 1);
  CHECK(field.preset == PolarizationPreset::e_plus);
  for (const auto& p : field.points) {
    CHECK((p.direction - geometry::direction_from_angles(p.theta, p.phi)).norm() < 1e-15);
    const auto direct = witness::witness_min(rho, loos::build_loos(s.array, s.table, {p.direction, pol}));
    CHECK(oracle::max_abs_diff(direct.candidates(), p.witness.candidates()) == 0.0);
    REQUIRE(p.optical_phases.size() == 2);
    CHECK(p.optical_phases[1] == doctest::Approx(15.0 * std::cos(p.theta)));
  }
}

TEST_CASE("product |11> is never detected anywhere") {
  const auto s = two_qutrit_scene();
  const std::vector<int> levels{1, 1};
  const auto rho = hilbert::DensityMatrix::pure(hilbert::StateVector::basis(levels, 3));
  for (auto p : {PolarizationPreset::e_plus, PolarizationPreset::e_minus, PolarizationPreset::e_z}) {
    const auto field = circular(rho, s, p, AngularGrid::uniform(11, 20));
    for (const auto& pt : field.points) CHECK(pt.witness.W >= -1e-9);
    CHECK(field.violating_fraction() == 0.0);
  }
}

TEST_CASE("two-qutrit example: the sign of W depends on direction") {
  const auto s = two_qutrit_scene();
  const auto rho = hilbert::DensityMatrix::pure(states::two_qutrit_example());
  const auto field = circular(rho, s, PolarizationPreset::e_plus, AngularGrid::uniform(25, 48));
  const double f = field.violating_fraction();
  CHECK(f > 0.0);
  CHECK(f < 1.0);
  CHECK(field.points[field.argmin()].witness.W < -1e-9);
}

TEST_CASE("Dicke pair on a lattice: w1 < 0 exactly where S < N") {
  const auto s = dicke_lattice(2, 1.3);
  const auto rho = hilbert::DensityMatrix::pure(states::dicke_symmetric(2));
  const auto field = sweep(rho, s.array, s.table, Polarization::uniform(PolarizationPreset::e_z, s.table),
                           AngularGrid::uniform(21, 40), 2);
  int checked = 0;
  for (const auto& p : field.points) {
    const double sf = geometry::structure_factor(s.array, p.direction);
    // w1 = S - 2 for this state; skip directions where the dipole projection vanishes
    if (std::abs(sf - 2.0) < 1e-6 || std::sin(p.theta) < 1e-6) continue;
    CHECK((p.witness.w1 < 0) == (sf < 2.0));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("circular channels mirror each other") {
  SUBCASE("two-qutrit example") {
    const auto s = two_qutrit_scene();
    const auto rho = hilbert::DensityMatrix::pure(states::two_qutrit_example());
    const auto grid = AngularGrid::uniform(13, 24);
    const auto plus = circular(rho, s, PolarizationPreset::e_plus, grid);
    const auto minus = circular(rho, s, PolarizationPreset::e_minus, grid);
    const auto report = mirror_check(plus, minus);
    CHECK(report.unmatched == 0);
    CHECK(report.compared == grid.size());
    CHECK(report.max_discrepancy < 1e-9);
    // the minima sit at mirrored azimuths
    const auto& a = plus.points[plus.argmin()];
    const auto& b = minus.points[minus.argmin()];
    CHECK(a.witness.W == doctest::Approx(b.witness.W).epsilon(1e-9));
    CHECK(std::abs(std::remainder(a.phi + b.phi, 2 * kPi)) < 1e-9);
    CHECK(a.theta == b.theta);
  }
  SUBCASE("single transition in the phi = 0 plane") {
    Scene s{geometry::EmitterArray({Vec3::Zero(), Vec3(3, 0, 4)}, 2), geometry::TransitionTable(2)};
    s.table.allow({1, 2}, CVec3(1, 0, 0));
    const auto rho = hilbert::DensityMatrix::pure(states::dicke_symmetric(2));
    const auto grid = AngularGrid::uniform(9, 16);
    const auto report = mirror_check(circular(rho, s, PolarizationPreset::e_plus, grid),
                                     circular(rho, s, PolarizationPreset::e_minus, grid));
    CHECK(report.ok(1e-9));
  }
  SUBCASE("random real dipoles in the xz-plane") {
    sampling::Rng rng(201);
    const auto grid = AngularGrid::uniform(9, 16);
    for (int trial = 0; trial < 20; ++trial) {
      const int d = 2 + trial % 2;
      const auto s = random_xz_scene(rng, 2, d);
      const auto rho = hilbert::DensityMatrix::pure(sampling::random_state(rng, 2, d));
      const auto report = mirror_check(circular(rho, s, PolarizationPreset::e_plus, grid),
                                       circular(rho, s, PolarizationPreset::e_minus, grid));
      CHECK(report.unmatched == 0);
      CHECK(report.max_discrepancy < 1e-9);
    }
  }
  SUBCASE("rejected inputs") {
    const auto s = two_qutrit_scene();
    const auto rho = hilbert::DensityMatrix::pure(states::two_qutrit_example());
    const auto plus = circular(rho, s, PolarizationPreset::e_plus, AngularGrid::uniform(5, 8));
    const auto minus = circular(rho, s, PolarizationPreset::e_minus, AngularGrid::uniform(5, 8));
    CHECK_THROWS_AS(mirror_check(plus, circular(rho, s, PolarizationPreset::e_minus, AngularGrid::uniform(5, 9))),
                    std::invalid_argument);
    CHECK_THROWS_AS(mirror_check(plus, circular(rho, s, PolarizationPreset::e_z, AngularGrid::uniform(5, 8))),
                    std::invalid_argument);
    CHECK_THROWS_AS(mirror_check(minus, plus), std::invalid_argument);

    geometry::TransitionTable complex_table(2);
    complex_table.allow({1, 2}, CVec3(cplx(1, 0), cplx(0, 1), 0).normalized());
    const Scene c{geometry::EmitterArray({Vec3::Zero(), Vec3(1, 0, 0)}, 2), complex_table};
    const auto d2 = hilbert::DensityMatrix::pure(states::dicke_symmetric(2));
    CHECK_THROWS_AS(mirror_check(circular(d2, c, PolarizationPreset::e_plus, AngularGrid::uniform(3, 4)),
                                 circular(d2, c, PolarizationPreset::e_minus, AngularGrid::uniform(3, 4))),
                    std::invalid_argument);
  }
}

TEST_CASE("CSV and JSON output") {
  const auto s = two_qutrit_scene();
  const auto rho = hilbert::DensityMatrix::pure(states::two_qutrit_example());
  const auto field = circular(rho, s, PolarizationPreset::e_plus, AngularGrid({kPi / 3}, {0.5}));
  std::ostringstream out;
  write_csv(out, field, {"tool lightwit", "seed 1"});
  std::istringstream in(out.str());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "# tool lightwit");
  CHECK(lines[1] == "# seed 1");
  CHECK(lines[2] == kCsvHeader);
  CHECK(std::count(lines[3].begin(), lines[3].end(), ',') == 12);
  CHECK(lines[3].ends_with(field.points[0].witness.min_label));

  // full precision survives the round trip
  std::istringstream row(lines[3]);
  std::string cell;
  std::vector<double> values;
  while (std::getline(row, cell, ',') && values.size() < 12) values.push_back(std::stod(cell));
  CHECK(values[0] == field.points[0].theta);
  CHECK(values[11] == field.points[0].witness.W);

  const auto j = to_json(field);
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("points").size() == 1);
  CHECK(j.at("points")[0].at("W").get<double>() == field.points[0].witness.W);
}

TEST_CASE("polarization-blind candidates are the same field for every channel") {
  sampling::Rng rng(202);
  const auto table = sampling::random_table(rng, 3, false);
  const auto array = sampling::random_array(rng, 2, 3);
  const auto rho = hilbert::DensityMatrix::pure(sampling::random_state(rng, 2, 3));
  const auto grid = AngularGrid::uniform(6, 9);
  const auto a = sweep(rho, array, table, sampling::random_polarization(rng, table, false), grid, 1);
  const auto b = sweep(rho, array, table, sampling::random_polarization(rng, table, false), grid, 1);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& x = a.points[k].witness;
    const auto& y = b.points[k].witness;
    CHECK(std::abs(x.w1 - y.w1) < 1e-10);
    CHECK(std::abs(x.w2[2] - y.w2[2]) < 1e-10);
    CHECK(std::abs(x.w3[2] - y.w3[2]) < 1e-10);
  }
}

TEST_CASE("grid refinement keeps the coarse points") {
  const auto s = two_qutrit_scene();
  const auto rho = hilbert::DensityMatrix::pure(states::two_qutrit_example());
  const auto coarse = circular(rho, s, PolarizationPreset::e_plus, AngularGrid::uniform(5, 8));
  const auto fine = circular(rho, s, PolarizationPreset::e_plus, AngularGrid::uniform(9, 16));
  for (std::size_t k = 0; k < coarse.points.size(); ++k) {
    const auto [i, j] = coarse.grid.unflatten(k);
    const auto& f = fine.points[(2 * i) * 16 + 2 * j];
    CHECK(f.theta == doctest::Approx(coarse.points[k].theta).epsilon(1e-15));
    CHECK(oracle::max_abs_diff(f.witness.candidates(), coarse.points[k].witness.candidates()) < 1e-12);
  }
  // the fine minimum can only be lower
  CHECK(fine.points[fine.argmin()].witness.W <= coarse.points[coarse.argmin()].witness.W + 1e-12);
}
