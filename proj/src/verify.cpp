#include "lightwit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lightwit/analytic.hpp"
#include "lightwit/geometry.hpp"
#include "lightwit/loos.hpp"
#include "lightwit/sampling.hpp"
#include "lightwit/scan.hpp"
#include "lightwit/states.hpp"
#include "lightwit/witness.hpp"

namespace lightwit::verify {

namespace {

using geometry::CVec3;
using geometry::Vec3;
using sampling::Rng;

constexpr std::size_t kMaxRecordedFailures = 5;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Recorder {
public:
  Recorder(std::string name, double tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }

  /// `error` must stay <= tolerance (the suite tolerance unless given).
  void check(double error, const std::string& what, double tolerance = -1.0) {
    if (tolerance < 0.0) tolerance = result_.tolerance;
    ++result_.checks;
    result_.max_error = std::max(result_.max_error, error);
    if (!(error <= tolerance)) fail(what + " (error " + fmt(error) + ", tolerance " + fmt(tolerance) + ")");
  }

  void fail(const std::string& what) {
    result_.passed = false;
    if (result_.failures.size() < kMaxRecordedFailures) result_.failures.push_back(what);
  }

  SuiteResult done() { return std::move(result_); }

  static std::string fmt(double v) {
    std::ostringstream out;
    out.precision(3);
    out << v;
    return out.str();
  }

private:
  SuiteResult result_;
};

std::string trial_label(int trial, int n, int d) {
  return "trial " + std::to_string(trial) + " (N=" + std::to_string(n) + ", d=" + std::to_string(d) + ")";
}

double max_abs_diff(const std::array<double, 7>& a, const std::array<double, 7>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

/// Two qutrits at 0 and 15 z, V structure with real dipoles in the xz-plane.
struct TwoQutritScene {
  geometry::EmitterArray array{{Vec3::Zero(), Vec3(0.0, 0.0, 15.0)}, 3};
  geometry::TransitionTable table{3};

  TwoQutritScene(const Vec3& d12, const Vec3& d13) {
    table.allow({1, 2}, d12.normalized().cast<cplx>());
    table.allow({1, 3}, d13.normalized().cast<cplx>());
  }
};

TwoQutritScene mirror_scene() { return {Vec3(1.0, 0.0, 1.0), Vec3(1.0, 0.0, -1.0)}; }

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

// ---------------------------------------------------------------------------

SuiteResult loo_basis_suite(const VerifyOptions& opt) {
  Recorder rec("loo_basis", 1e-12);
  Rng rng(opt.seed);
  for (int trial = 0; trial < opt.trials; ++trial) {
    const int d = 2 + trial % 3;
    const int n = rng.uniform_int(1, 3);
    const bool real = trial % 2 == 0;
    const auto array = sampling::random_array(rng, n, d);
    const auto table = sampling::random_table(rng, d, real);
    auto family = loos::build_loos(array, table, sampling::random_channel(rng, table, real));
    if (opt.corrupt_loo_phase != 0.0) family.corrupt_phase_for_testing(opt.corrupt_loo_phase);

    const auto label = trial_label(trial, n, d);
    const auto& index = family.index_map();
    for (int eta = 1; eta <= n; ++eta) {
      const auto& ops = family.atom(eta);
      const auto err = loos::check_basis(ops);
      rec.check(err.hermiticity, label + " atom " + std::to_string(eta) + ": hermiticity");
      rec.check(err.orthonormality, label + " atom " + std::to_string(eta) + ": orthonormality");
      rec.check(err.completeness, label + " atom " + std::to_string(eta) + ": completeness (d * identity)");
      for (int k = 0; k < index.pairs(); ++k) {
        const auto pair = geometry::pair_at(static_cast<std::size_t>(k), d);
        const CMatrix& gp = family.op(eta, index.plus_index(pair));
        const CMatrix& gm = family.op(eta, index.minus_index(pair));
        const CMatrix target = hilbert::ladder(pair.alpha, pair.alpha, d) + hilbert::ladder(pair.beta, pair.beta, d);
        rec.check((gp * gp + gm * gm - target).cwiseAbs().maxCoeff(), label + ": G+^2 + G-^2 for " + geometry::to_string(pair));
      }
    }
  }
  return rec.done();
}

SuiteResult separability_suite(const VerifyOptions& opt) {
  // all seven candidates must stay >= -tolerance; the recorded error is max(0, -w)
  Recorder rec("separability", witness::kDetectionTol);
  Rng rng(opt.seed + 1);
  const int trials = 5 * opt.trials;
  for (int trial = 0; trial < trials; ++trial) {
    const int n = 2 + trial % 2;
    const int d = 2 + (trial / 2) % 3;
    const bool real = trial % 3 == 0;
    const auto rho = sampling::random_separable(rng, n, d);
    const auto table = sampling::random_table(rng, d, real);
    const auto family = loos::build_loos(sampling::random_array(rng, n, d), table, sampling::random_channel(rng, table, real));
    const auto b = witness::witness_min(rho, family);
    rec.check(std::max(0.0, -b.W), trial_label(trial, n, d) + ": " + b.min_label + " = " + Recorder::fmt(b.W));
  }
  return rec.done();
}

SuiteResult real_channel_suite(const VerifyOptions& opt) {
  Recorder rec("real_channel_invariance", 1e-10);
  Rng rng(opt.seed + 2);
  for (int trial = 0; trial < opt.trials; ++trial) {
    const int n = 2 + trial % 2;
    const int d = 2 + (trial / 2) % 2;
    const auto rho = hilbert::DensityMatrix::pure(sampling::random_state(rng, n, d));
    const auto array = sampling::random_array(rng, n, d);
    const auto table = sampling::random_table(rng, d, true);
    const Vec3 direction = sampling::random_unit(rng);
    const auto a = witness::witness_min(rho, loos::build_loos(array, table, {direction, sampling::random_polarization(rng, table, true)}));
    const auto b = witness::witness_min(rho, loos::build_loos(array, table, {direction, sampling::random_polarization(rng, table, true)}));
    rec.check(max_abs_diff(a.candidates(), b.candidates()), trial_label(trial, n, d) + ": seven candidates");
  }
  return rec.done();
}

SuiteResult blind_triple_suite(const VerifyOptions& opt) {
  Recorder rec("polarization_blind", 1e-10);
  Rng rng(opt.seed + 3);
  for (int trial = 0; trial < opt.trials; ++trial) {
    const int n = 2 + trial % 2;
    const int d = 2 + (trial / 2) % 2;
    const auto rho = hilbert::DensityMatrix::pure(sampling::random_state(rng, n, d));
    const auto array = sampling::random_array(rng, n, d);
    const auto table = sampling::random_table(rng, d, false);
    const Vec3 direction = sampling::random_unit(rng);
    const auto a = witness::polarization_blind_values(rho, loos::build_loos(array, table, {direction, sampling::random_polarization(rng, table, false)}));
    const auto b = witness::polarization_blind_values(rho, loos::build_loos(array, table, {direction, sampling::random_polarization(rng, table, false)}));
    const double err = std::max({std::abs(a.w1 - b.w1), std::abs(a.w2_Z - b.w2_Z), std::abs(a.w3_Z - b.w3_Z)});
    rec.check(err, trial_label(trial, n, d) + ": blind triple");
  }
  return rec.done();
}

SuiteResult mirror_suite(const VerifyOptions& opt) {
  Recorder rec("circular_mirror", 1e-9);
  const auto grid = scan::AngularGrid::uniform(13, 24);

  auto compare = [&](const hilbert::DensityMatrix& rho, const geometry::EmitterArray& array,
                     const geometry::TransitionTable& table, const std::string& label) {
    using geometry::Polarization;
    using geometry::PolarizationPreset;
    const auto plus = scan::sweep(rho, array, table, Polarization::uniform(PolarizationPreset::e_plus, table), grid, 1);
    const auto minus = scan::sweep(rho, array, table, Polarization::uniform(PolarizationPreset::e_minus, table), grid, 1);
    const auto report = scan::mirror_check(plus, minus);
    if (report.unmatched > 0) rec.fail(label + ": " + std::to_string(report.unmatched) + " points without a mirror partner");
    rec.check(report.max_discrepancy, label);
  };

  const auto scene = mirror_scene();
  compare(hilbert::DensityMatrix::pure(states::two_qutrit_example()), scene.array, scene.table, "two-qutrit example");

  // random real dipoles and positions in the xz-plane, so every partner lies on the grid
  Rng rng(opt.seed + 4);
  const int trials = std::max(1, opt.trials / 40);
  for (int trial = 0; trial < trials; ++trial) {
    const int n = 2;
    const int d = 2 + trial % 2;
    std::vector<Vec3> positions;
    for (int eta = 0; eta < n; ++eta) positions.emplace_back(rng.uniform(-10, 10), 0.0, rng.uniform(-10, 10));
    geometry::TransitionTable table(d);
    for (std::size_t k = 0; k < geometry::pair_count(d); ++k) {
      const double angle = rng.uniform(0.0, kTwoPi);
      table.allow(geometry::pair_at(k, d), CVec3(std::cos(angle), 0.0, std::sin(angle)));
    }
    compare(hilbert::DensityMatrix::pure(sampling::random_state(rng, n, d)), geometry::EmitterArray(std::move(positions), d),
            table, trial_label(trial, n, d));
  }
  return rec.done();
}

SuiteResult analytic_suite(const VerifyOptions& opt) {
  Recorder rec("analytic_cross_checks", 1e-6);

  // permutation states on a lattice along x with dipoles and detection along z
  auto permutation_scene = [](int n, double spacing) {
    const auto array = geometry::EmitterArray::linear_lattice(n, spacing, Vec3::UnitX(), n);
    geometry::TransitionTable table(n);
    for (std::size_t k = 0; k < geometry::pair_count(n); ++k) table.allow(geometry::pair_at(k, n), CVec3(0.0, 0.0, 1.0));
    return std::pair{array, table};
  };
  for (int n : {2, 3}) {
    // S = 0 along the lattice axis when n k a = 2 pi
    {
      const auto [array, table] = permutation_scene(n, kTwoPi / n);
      const geometry::DetectionChannel channel(Vec3::UnitX(), geometry::Polarization::uniform(geometry::PolarizationPreset::e_z, table));
      const double s = geometry::structure_factor(array, channel.direction());
      const auto found = witness::noise_threshold(states::dicke_symmetric(n), array, table, channel, 1e-10);
      const double expected = analytic::sym_noise_threshold(n, s).p_star;
      if (!found.p_star) rec.fail("Dicke N=" + std::to_string(n) + ": no violation found");
      else rec.check(std::abs(*found.p_star - expected), "Dicke N=" + std::to_string(n) + " threshold");
    }
    // S = N^2 perpendicular to the lattice
    {
      const auto [array, table] = permutation_scene(n, 1.0);
      const geometry::DetectionChannel channel(Vec3::UnitY(), geometry::Polarization::uniform(geometry::PolarizationPreset::e_z, table));
      const double s = geometry::structure_factor(array, channel.direction());
      const auto found = witness::noise_threshold(states::singlet_antisymmetric(n), array, table, channel, 1e-10);
      const double expected = analytic::asym_noise_threshold(n, s).p_star;
      if (!found.p_star) rec.fail("singlet N=" + std::to_string(n) + ": no violation found");
      else rec.check(std::abs(*found.p_star - expected), "singlet N=" + std::to_string(n) + " threshold");
    }
  }

  Rng rng(opt.seed + 5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(1, 10);
    const double kza = rng.uniform(0.0, kTwoPi);
    const auto lattice = geometry::EmitterArray::linear_lattice(n, kza, Vec3::UnitZ(), 2);
    rec.check(std::abs(geometry::structure_factor(lattice, Vec3::UnitZ()) - analytic::linear_array_structure_factor(n, kza)),
              "structure factor n=" + std::to_string(n), 1e-10);
  }

  // the two-qutrit closed form is the Y-variance w2 candidate for circular channels
  const auto scene = mirror_scene();
  const auto rho = hilbert::DensityMatrix::pure(states::two_qutrit_example());
  const auto grid = scan::AngularGrid::uniform(11, 20);
  for (auto [preset, handedness] : {std::pair{geometry::PolarizationPreset::e_plus, 1}, std::pair{geometry::PolarizationPreset::e_minus, -1}}) {
    const auto field = scan::sweep(rho, scene.array, scene.table, geometry::Polarization::uniform(preset, scene.table), grid, 1);
    for (const auto& p : field.points) {
      if (!p.dipole_phases[0] || !p.dipole_phases[1]) continue;
      const Vec3 r2 = scene.array.positions()[1];
      const double closed = analytic::two_qutrit_closed_form(p.direction.dot(r2), 2.0 * p.direction.dot(r2),
                                                             *p.dipole_phases[0], *p.dipole_phases[1], handedness);
      const std::string where = std::string(geometry::to_string(preset)) + " at theta=" + Recorder::fmt(p.theta) +
                                ", phi=" + Recorder::fmt(p.phi);
      rec.check(std::abs(p.witness.w2[static_cast<std::size_t>(loos::Family::Y)] - closed), where + ": w2_Y vs closed form", 1e-9);
      rec.check(std::max(0.0, p.witness.W - closed), where + ": W above closed form", 1e-9);
    }
  }
  return rec.done();
}

VerifyReport run_all(const VerifyOptions& opt) {
  VerifyReport report;
  report.suites.push_back(loo_basis_suite(opt));
  report.suites.push_back(separability_suite(opt));
  report.suites.push_back(real_channel_suite(opt));
  report.suites.push_back(blind_triple_suite(opt));
  report.suites.push_back(mirror_suite(opt));
  report.suites.push_back(analytic_suite(opt));
  return report;
}

std::string format_report(const VerifyReport& report) {
  std::ostringstream out;
  for (const auto& s : report.suites) {
    out << (s.passed ? "PASS " : "FAIL ") << s.name << ": " << s.checks << " checks, max error " << Recorder::fmt(s.max_error)
        << " (tolerance " << Recorder::fmt(s.tolerance) << ")\n";
    for (const auto& f : s.failures) out << "    " << f << '\n';
  }
  out << (report.passed() ? "all suites passed" : "some suites failed") << '\n';
  return out.str();
}

}  // namespace lightwit::verify
