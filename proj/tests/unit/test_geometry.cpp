#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "lightwit/geometry.hpp"
#include "lightwit/sampling.hpp"

using namespace lightwit;
using namespace lightwit::geometry;

namespace {
const double s2 = 1.0 / std::numbers::sqrt2;
}

TEST_CASE("transition pairs enumerate lexicographically") {
  for (int d : {2, 3, 4, 5}) {
    std::set<TransitionPair> seen;
    for (std::size_t k = 0; k < pair_count(d); ++k) {
      const auto p = pair_at(k, d);
      CHECK(p.alpha < p.beta);
      CHECK(pair_index(p, d) == k);
      if (k > 0) CHECK(pair_at(k - 1, d) < p);
      seen.insert(p);
    }
    CHECK(seen.size() == static_cast<std::size_t>(d * (d - 1) / 2));
  }
  CHECK(pair_at(0, 3) == TransitionPair{1, 2});
  CHECK(pair_at(2, 3) == TransitionPair{2, 3});
  CHECK_THROWS_AS(pair_index({2, 2}, 3), std::out_of_range);
  CHECK_THROWS_AS(pair_index({1, 4}, 3), std::out_of_range);
  CHECK(to_string(TransitionPair{1, 3}) == "1-3");
}

TEST_CASE("emitter arrays") {
  const auto lattice = EmitterArray::linear_lattice(3, 2.0, Vec3::UnitZ(), 3);
  CHECK(lattice.size() == 3);
  CHECK((lattice.positions()[2] - Vec3(0, 0, 4)).norm() == 0.0);
  CHECK_THROWS_AS(EmitterArray({}, 2), std::invalid_argument);
  CHECK_THROWS_AS(EmitterArray::linear_lattice(2, 1.0, Vec3(1, 1, 0), 2), std::invalid_argument);
}

TEST_CASE("transition tables only accept unit dipoles") {
  TransitionTable t(3);
  CHECK(t.allowed_count() == 0);
  CHECK(t.forbidden_count() == 3);
  t.allow({1, 2}, CVec3(0, 0, 1));
  t.allow({1, 3}, CVec3(s2, cplx(0, s2), 0));
  CHECK(t.allowed_count() == 2);
  CHECK(t.forbidden_count() == 1);
  CHECK_FALSE(t.all_real());
  CHECK_THROWS_AS(t.allow({2, 3}, CVec3(1, 1, 0)), std::invalid_argument);
  CHECK_THROWS_AS(t.dipole({2, 3}), std::invalid_argument);
  CHECK(t.allowed_pairs() == std::vector<TransitionPair>{{1, 2}, {1, 3}});
}

TEST_CASE("circular basis is -+(x +- iy)/sqrt2") {
  const auto [plus, minus] = circular_basis();
  CHECK((plus - CVec3(-s2, cplx(0, -s2), 0)).norm() < 1e-15);
  CHECK((minus - CVec3(s2, cplx(0, -s2), 0)).norm() < 1e-15);
  CHECK(std::abs(plus.dot(minus)) < 1e-15);  // orthogonal under the Hermitian product
  CHECK(preset_vector(PolarizationPreset::e_z) == CVec3(0, 0, 1));
  CHECK(parse_preset("e_minus") == PolarizationPreset::e_minus);
  CHECK_FALSE(parse_preset("e_x").has_value());
}

TEST_CASE("polarization must cover exactly the allowed transitions") {
  TransitionTable t(3);
  t.allow({1, 2}, CVec3(1, 0, 0));
  Polarization pol(3);
  CHECK_THROWS_AS(pol.validate_against(t), std::invalid_argument);
  pol.set({1, 2}, CVec3(0, 0, 1));
  CHECK_NOTHROW(pol.validate_against(t));
  pol.set({2, 3}, CVec3(0, 0, 1));
  CHECK_THROWS_AS(pol.validate_against(t), std::invalid_argument);
  CHECK_THROWS_AS(pol.set({1, 2}, CVec3(0, 0, 2)), std::invalid_argument);
  CHECK_THROWS_AS(DetectionChannel(Vec3(0, 0, 2), Polarization::uniform(PolarizationPreset::e_z, t)), std::invalid_argument);
}

TEST_CASE("projected dipole and zeta") {
  const Vec3 r = direction_from_angles(0.7, 1.9);
  CHECK(r.norm() == doctest::Approx(1.0).epsilon(1e-15));
  sampling::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = sampling::random_complex_unit(rng);
    const CVec3 rc = r.cast<cplx>();
    const CVec3 cross = rc.cross(rc.cross(d));
    CHECK((projected_dipole(r, d) - cross).norm() < 1e-14);
  }

  // bilinear: no conjugation of the polarization vector
  TransitionTable t(2);
  const CVec3 dipole(s2, cplx(0, -s2), 0);
  t.allow({1, 2}, dipole);
  const DetectionChannel ch(Vec3::UnitZ(), Polarization::uniform(PolarizationPreset::e_plus, t));
  const auto z = zeta(ch, {1, 2}, t);
  const CVec3 v = projected_dipole(Vec3::UnitZ(), dipole);
  CHECK(std::abs(z.value - (circular_basis().first.transpose() * v)(0)) < 1e-15);
  CHECK_FALSE(z.degenerate);
  // a conjugating product would give 0 here
  CHECK(std::abs(z.value) == doctest::Approx(1.0));

  // dipole along the detection direction radiates nothing there
  TransitionTable tz(2);
  tz.allow({1, 2}, CVec3(0, 0, 1));
  const DetectionChannel along(Vec3::UnitZ(), Polarization::uniform(PolarizationPreset::e_z, tz));
  CHECK(zeta(along, {1, 2}, tz).degenerate);

  TransitionTable t3(3);
  t3.allow({1, 2}, CVec3(1, 0, 0));
  const DetectionChannel c3(Vec3::UnitZ(), Polarization::uniform(PolarizationPreset::e_z, t3));
  CHECK_THROWS_AS(zeta(c3, {1, 3}, t3), std::invalid_argument);
}

TEST_CASE("dipole phase") {
  // R = z, d = (x + z)/sqrt2: projection is -x/sqrt2, phase pi
  CHECK(std::abs(dipole_phase(Vec3::UnitZ(), Vec3(s2, 0, s2))) == doctest::Approx(std::numbers::pi));
  CHECK(dipole_phase(Vec3::UnitX(), Vec3(0, 1, 0)) == doctest::Approx(-std::numbers::pi / 2));
  CHECK_THROWS_AS(dipole_phase(Vec3::UnitX(), Vec3(0, 0, 1)), std::domain_error);
  CHECK_THROWS_AS(dipole_phase(Vec3::UnitZ(), CVec3(s2, cplx(0, s2), 0)), std::invalid_argument);
}

TEST_CASE("structure factor") {
  const auto a = EmitterArray::linear_lattice(4, std::numbers::pi / 2, Vec3::UnitZ(), 2);
  CHECK(structure_factor(a, Vec3::UnitZ()) < 1e-24);
  CHECK(structure_factor(a, Vec3::UnitX()) == doctest::Approx(16.0));
  sampling::Rng rng(2);
  const auto arr = sampling::random_array(rng, 5, 2);
  const auto r = sampling::random_unit(rng);
  const double s = structure_factor(arr, r);
  CHECK(s >= 0.0);
  CHECK(s <= 25.0 + 1e-12);
}
