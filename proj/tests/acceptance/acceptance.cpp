// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "lightwit/analytic.hpp"
#include "lightwit/sampling.hpp"
#include "lightwit/scan.hpp"
#include "lightwit/states.hpp"
#include "lightwit/witness.hpp"

using namespace lightwit;
using geometry::CVec3;
using geometry::Polarization;
using geometry::PolarizationPreset;
using geometry::Vec3;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

geometry::TransitionTable uniform_table(int d, const CVec3& dipole) {
  geometry::TransitionTable t(d);
  for (std::size_t k = 0; k < geometry::pair_count(d); ++k) t.allow(geometry::pair_at(k, d), dipole);
  return t;
}

// ---------------------------------------------------------------------------

Outcome loo_basis() {
  sampling::Rng rng(1001);
  double ortho = 0.0, literal = 0.0, scaled = 0.0, herm = 0.0;
  int draws = 0;
  for (int trial = 0; trial < 240; ++trial) {
    const int d = 2 + trial % 3;
    const int n = 1 + trial % 3;
    const bool real = trial % 2 == 0;
    const auto table = sampling::random_table(rng, d, real);
    const auto fam = loos::build_loos(sampling::random_array(rng, n, d), table, sampling::random_channel(rng, table, real));
    for (int eta = 1; eta <= n; ++eta) {
      const auto& ops = fam.atom(eta);
      CMatrix sum = CMatrix::Zero(d, d);
      for (std::size_t m = 0; m < ops.size(); ++m) {
        herm = std::max(herm, (ops[m] - ops[m].adjoint()).cwiseAbs().maxCoeff());
        for (std::size_t k = 0; k < ops.size(); ++k)
          ortho = std::max(ortho, std::abs((ops[m] * ops[k]).trace() - (m == k ? 1.0 : 0.0)));
        sum += ops[m] * ops[m];
      }
      literal = std::max(literal, (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff());
      scaled = std::max(scaled, (sum - static_cast<double>(d) * CMatrix::Identity(d, d)).cwiseAbs().maxCoeff());
    }
    ++draws;
  }
  const bool pass = ortho < 1e-12 && literal < 1e-12 && herm < 1e-12;
  return {pass, fmt("%d draws, d in {2,3,4}: max|tr(GmGn)-delta| = %.2e, max|sum G^2 - I| = %.2e, "
                    "max|sum G^2 - d I| = %.2e, hermiticity %.2e",
                    draws, ortho, literal, scaled, herm)};
}

Outcome separability() {
  sampling::Rng rng(1002);
  double worst = 1e300;
  std::string where;
  int count = 0;
  for (int n : {2, 3})
    for (int d : {2, 3, 4})
      for (int trial = 0; trial < 180; ++trial) {
        const bool real = trial % 3 == 0;
        const auto rho = sampling::random_separable(rng, n, d);
        const auto table = sampling::random_table(rng, d, real);
        const auto fam = loos::build_loos(sampling::random_array(rng, n, d), table, sampling::random_channel(rng, table, real));
        const auto b = witness::witness_min(rho, fam);
        if (b.W < worst) {
          worst = b.W;
          where = fmt("N=%d d=%d %s", n, d, b.min_label.c_str());
        }
        ++count;
      }
  return {worst >= -1e-9, fmt("%d separable states, min candidate %.3e (%s)", count, worst, where.c_str())};
}

// Atoms on the x axis, dipoles along z, detection through e_z.
witness::ThresholdSearch lattice_threshold(const hilbert::StateVector& psi, double spacing, const Vec3& r, double& s) {
  const int n = psi.n_sites();
  const auto array = geometry::EmitterArray::linear_lattice(n, spacing, Vec3::UnitX(), psi.local_dim());
  const auto table = uniform_table(psi.local_dim(), CVec3(0, 0, 1));
  s = geometry::structure_factor(array, r);
  return witness::noise_threshold(psi, array, table, {r, Polarization::uniform(PolarizationPreset::e_z, table)}, 1e-10);
}

Outcome dicke_threshold() {
  bool pass = true;
  std::string detail;
  for (int n : {2, 3, 4}) {
    double s = 0.0;
    const auto t = lattice_threshold(states::dicke_symmetric(n), 2 * kPi / n, Vec3::UnitX(), s);
    const double expected = static_cast<double>(n) / (2 * n - 1);
    const double err = t.p_star ? std::abs(*t.p_star - expected) : 1.0;
    pass = pass && t.p_star && err < 1e-6 && s < 1e-20;
    detail += fmt("N=%d: S=%.1e p*=%.10f expected %.10f |diff| %.1e; ", n, s, t.p_star.value_or(-1), expected, err);
  }
  return {pass, detail};
}

Outcome singlet_threshold() {
  bool pass = true;
  std::string detail;
  for (int n : {2, 3}) {
    double s = 0.0;
    const auto t = lattice_threshold(states::singlet_antisymmetric(n), 1.0, Vec3::UnitY(), s);
    const double expected = static_cast<double>(n) / (n + 1);
    const double err = t.p_star ? std::abs(*t.p_star - expected) : 1.0;
    pass = pass && t.p_star && err < 1e-6 && std::abs(s - n * n) < 1e-12;
    detail += fmt("N=%d: S=%.3f p*=%.10f expected %.10f |diff| %.1e; ", n, s, t.p_star.value_or(-1), expected, err);
  }
  return {pass, detail};
}

// W state on a lattice along x with spacing 2 pi / N. Directions in the xz-plane,
// theta in [0, pi/2], sweep S from N^2 down to 0. Dipoles and polarization along y.
Outcome w_state_condition() {
  constexpr double kTol = witness::kDetectionTol;
  constexpr int kSamples = 4001;
  bool pass = true;
  std::string detail;
  for (int n : {2, 3}) {
    const double bound = analytic::w_state_violation_bound(n);
    std::vector<std::vector<double>> boundaries_by_d;
    for (int d : {3, 4}) {
      const auto psi = states::w_state(n, d);
      const auto rho = hilbert::DensityMatrix::pure(psi);
      const witness::SiteMarginals marginals(rho);
      const auto array = geometry::EmitterArray::linear_lattice(n, 2 * kPi / n, Vec3::UnitX(), d);
      const auto table = uniform_table(d, CVec3(0, 1, 0));
      const auto pol = Polarization::uniform(CVec3(0, 1, 0), table);
      auto at = [&](double theta, double& s) {
        const Vec3 r = geometry::direction_from_angles(theta, 0.0);
        s = geometry::structure_factor(array, r);
        return witness::witness_min(marginals, loos::build_loos(array, table, {r, pol})).W;
      };

      std::vector<double> boundaries;
      int mismatches = 0;
      double prev_theta = 0.0, s = 0.0;
      bool prev_violated = at(0.0, s) < -kTol;
      for (int i = 0; i <= kSamples; ++i) {
        const double theta = 0.5 * kPi * i / kSamples;
        const bool violated = at(theta, s) < -kTol;
        if (std::abs(s - bound) > 1e-3 && violated != (s <= bound)) ++mismatches;
        if (violated != prev_violated) {
          double lo = prev_theta, hi = theta;
          for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            double sm = 0.0;
            ((at(mid, sm) < -kTol) == prev_violated ? lo : hi) = mid;
          }
          double sb = 0.0;
          at(0.5 * (lo + hi), sb);
          boundaries.push_back(sb);
        }
        prev_violated = violated;
        prev_theta = theta;
      }
      std::sort(boundaries.begin(), boundaries.end());
      const bool located = boundaries.size() == 1 && std::abs(boundaries.front() - bound) < 1e-3;
      pass = pass && located && mismatches == 0;
      std::string list;
      for (double b : boundaries) list += fmt("%s%.6f", list.empty() ? "" : ",", b);
      detail += fmt("N=%d d=%d: bound %.6f, observed sign changes at S={%s}, %d mismatched directions; ", n, d, bound,
                    list.c_str(), mismatches);
      boundaries_by_d.push_back(std::move(boundaries));
    }
    bool same = boundaries_by_d[0].size() == boundaries_by_d[1].size();
    for (std::size_t k = 0; same && k < boundaries_by_d[0].size(); ++k)
      same = std::abs(boundaries_by_d[0][k] - boundaries_by_d[1][k]) < 1e-9;
    pass = pass && same;
    detail += fmt("N=%d boundaries %s across d; ", n, same ? "agree" : "differ");
  }
  return {pass, detail};
}

struct XzScene {
  geometry::EmitterArray array{{Vec3::Zero(), Vec3(0, 0, 15)}, 3};
  geometry::TransitionTable table{3};
  scan::AngularGrid grid = scan::AngularGrid::uniform(50, 100);
  XzScene() {
    table.allow({1, 2}, Vec3(1, 0, 1).normalized().cast<cplx>());
    table.allow({1, 3}, Vec3(1, 0, -1).normalized().cast<cplx>());
  }
  scan::WitnessField field(PolarizationPreset p) const {
    return scan::sweep(hilbert::DensityMatrix::pure(states::two_qutrit_example()), array, table,
                       Polarization::uniform(p, table), grid);
  }
};

Outcome closed_form(const XzScene& scene) {
  double attained = 0.0, excess = -1e300;
  int at_min = 0, points = 0, undefined = 0;
  for (auto [preset, h] : {std::pair{PolarizationPreset::e_plus, 1}, std::pair{PolarizationPreset::e_minus, -1}}) {
    const auto field = scene.field(preset);
    for (const auto& p : field.points) {
      if (!p.dipole_phases[0] || !p.dipole_phases[1]) {
        ++undefined;
        continue;
      }
      const double z2 = p.direction.dot(scene.array.positions()[1]);
      const double closed = analytic::two_qutrit_closed_form(z2, 2 * z2, *p.dipole_phases[0], *p.dipole_phases[1], h);
      if (p.witness.min_label == "w2_Y") {
        attained = std::max(attained, std::abs(p.witness.W - closed));
        ++at_min;
      }
      excess = std::max(excess, p.witness.W - closed);
      ++points;
    }
  }
  const bool pass = attained < 1e-9 && excess <= 1e-9 && at_min > 0;
  return {pass, fmt("50x100 grid, e_+ and e_-: %d points (%d without a dipole phase), closed-form candidate minimal at %d, "
                    "max|W - closed| there %.2e, max(W - closed) %.2e",
                    points, undefined, at_min, attained, excess)};
}

Outcome mirror(const XzScene& scene) {
  const auto report = scan::mirror_check(scene.field(PolarizationPreset::e_plus), scene.field(PolarizationPreset::e_minus));
  return {report.ok(1e-9), fmt("50x100 grid: %zu pairs compared, %zu unmatched, max discrepancy %.2e", report.compared,
                               report.unmatched, report.max_discrepancy)};
}

Outcome channel_invariance() {
  sampling::Rng rng(1008);
  double real_swap = 0.0, blind = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 2, d = 2 + trial % 3;
    const auto rho = hilbert::DensityMatrix::pure(sampling::random_state(rng, n, d));
    const auto array = sampling::random_array(rng, n, d);
    const Vec3 r = sampling::random_unit(rng);

    const auto real_table = sampling::random_table(rng, d, true);
    const auto a = witness::witness_min(rho, loos::build_loos(array, real_table, {r, sampling::random_polarization(rng, real_table, true)}));
    const auto b = witness::witness_min(rho, loos::build_loos(array, real_table, {r, sampling::random_polarization(rng, real_table, true)}));
    for (std::size_t k = 0; k < 7; ++k) real_swap = std::max(real_swap, std::abs(a.candidates()[k] - b.candidates()[k]));

    const auto table = sampling::random_table(rng, d, false);
    const auto x = witness::polarization_blind_values(rho, loos::build_loos(array, table, {r, sampling::random_polarization(rng, table, false)}));
    const auto y = witness::polarization_blind_values(rho, loos::build_loos(array, table, {r, sampling::random_polarization(rng, table, false)}));
    blind = std::max({blind, std::abs(x.w1 - y.w1), std::abs(x.w2_Z - y.w2_Z), std::abs(x.w3_Z - y.w3_Z)});
  }
  return {real_swap < 1e-10 && blind < 1e-10,
          fmt("300 trials: real channel swap max change %.2e (all seven), complex swap blind triple max change %.2e", real_swap, blind)};
}

Outcome moment_table(const XzScene& scene) {
  const auto rho = hilbert::DensityMatrix::pure(states::two_qutrit_example());
  double err = 0.0;
  sampling::Rng rng(1009);
  for (int trial = 0; trial < 20; ++trial) {
    const auto preset = trial % 3 == 0 ? PolarizationPreset::e_z : trial % 3 == 1 ? PolarizationPreset::e_plus : PolarizationPreset::e_minus;
    const auto fam = loos::build_loos(scene.array, scene.table, {sampling::random_unit(rng), Polarization::uniform(preset, scene.table)});
    const auto m = witness::compute_moments(rho, fam);
    using loos::Family;
    const double table[][2] = {{m[Family::Z][0].first, 1.0},        {m[Family::Z][1].first, 2.0 / 3.0},
                               {m[Family::Z][2].first, 1.0 / 3.0},  {m[Family::X][1].second, 4.0 / 6.0},
                               {m[Family::X][2].second, 1.0 / 2.0}, {m[Family::Z][0].second, 5.0 / 3.0}};
    for (const auto& row : table) err = std::max(err, std::abs(row[0] - row[1]));
  }
  return {err < 1e-12, fmt("20 directions and channels: max deviation from the table %.2e", err)};
}

Outcome structure_factor() {
  sampling::Rng rng(1010);
  double err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(1, 12);
    const double a = rng.uniform(0.0, 4 * kPi);
    const auto array = geometry::EmitterArray::linear_lattice(n, a, Vec3::UnitZ(), 2);
    err = std::max(err, std::abs(geometry::structure_factor(array, Vec3::UnitZ()) - analytic::linear_array_structure_factor(n, a)));
  }
  double cancel = 0.0;
  for (int n = 2; n <= 12; ++n) {
    const double a = 2 * kPi / n;
    const auto array = geometry::EmitterArray::linear_lattice(n, a, Vec3::UnitZ(), 2);
    cancel = std::max({cancel, geometry::structure_factor(array, Vec3::UnitZ()), analytic::linear_array_structure_factor(n, a)});
  }
  return {err < 1e-10 && cancel < 1e-12,
          fmt("100 random (N, kz a): max |closed - direct| %.2e; N kz a = 2 pi, N = 2..12: max S %.2e", err, cancel)};
}

}  // namespace

int main() {
  const XzScene scene;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"LOO basis validity", loo_basis},
      {"separability soundness", separability},
      {"symmetric Dicke threshold", dicke_threshold},
      {"singlet threshold", singlet_threshold},
      {"W-state condition", w_state_condition},
      {"two-qutrit closed form", [&] { return closed_form(scene); }},
      {"circular mirror symmetry", [&] { return mirror(scene); }},
      {"channel invariances", channel_invariance},
      {"moment table", [&] { return moment_table(scene); }},
      {"structure factor", structure_factor},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu: %s  %s | %s\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
