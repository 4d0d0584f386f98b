#include "lightwit/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <openssl/evp.h>

#include "lightwit/analytic.hpp"
#include "lightwit/loos.hpp"
#include "lightwit/scan.hpp"
#include "lightwit/verify.hpp"
#include "lightwit/witness.hpp"

namespace lightwit::commands {

using nlohmann::json;

config::ExperimentConfig apply_overrides(config::ExperimentConfig cfg, const Overrides& o) {
  if (o.out) cfg.run.output_dir = *o.out;
  if (o.seed) cfg.run.seed = *o.seed;
  if (o.tolerance) cfg.run.tolerance = *o.tolerance;
  if (o.format) cfg.run.format = *o.format;
  // reparse the run section so overrides get the same checks as the file
  return config::parse_config(config::to_json(cfg));
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < length; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

std::string config_digest(const config::ExperimentConfig& cfg) { return sha256_hex(config::to_json(cfg).dump()); }

json provenance(const config::ExperimentConfig& cfg) {
  return {{"tool", kToolName}, {"version", kVersion}, {"config_sha256", config_digest(cfg)}, {"seed", cfg.run.seed}};
}

std::pair<double, double> angles_of(const geometry::Vec3& direction) {
  const double theta = std::acos(std::clamp(direction.z(), -1.0, 1.0));
  double phi = std::atan2(direction.y(), direction.x());
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  return {theta, phi};
}

namespace {

std::filesystem::path output_dir(const config::ExperimentConfig& cfg) {
  std::filesystem::path dir(cfg.run.output_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setw(2) << doc << '\n';
}

json direction_json(const geometry::Vec3& r) {
  const auto [theta, phi] = angles_of(r);
  return {{"theta", theta}, {"phi", phi}, {"vector", {r.x(), r.y(), r.z()}}};
}

json state_json(const states::NamedState& s) {
  return {{"label", std::string(states::to_string(s.label))}, {"n", s.n_sites()}, {"d", s.local_dim()}, {"noise", s.noise}};
}

json document(const config::ExperimentConfig& cfg, const char* command) {
  return {{"schema_version", scan::kSchemaVersion}, {"command", command}, {"provenance", provenance(cfg)}};
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_witness(const config::ExperimentConfig& cfg, std::ostream& log) {
  const auto state = config::build_state(cfg);
  const auto array = config::build_array(cfg);
  const auto table = config::build_table(cfg);
  const auto direction = config::build_direction(cfg);
  const geometry::DetectionChannel channel(direction, config::build_polarization(cfg));

  const auto family = loos::build_loos(array, table, channel);
  const auto b = witness::witness_min(state.density(), family);
  const bool detected = b.detected(cfg.run.tolerance);

  json doc = document(cfg, "witness");
  doc["state"] = state_json(state);
  doc["direction"] = direction_json(direction);
  doc["structure_factor"] = geometry::structure_factor(array, direction);
  doc["witness"] = scan::to_json(b);
  doc["tolerance"] = cfg.run.tolerance;
  doc["verdict"] = detected ? "entangled_detected" : "not_detected";
  doc["config"] = config::to_json(cfg);

  const auto path = output_dir(cfg) / "witness.json";
  write_json(path, doc);
  log << "W = " << b.W << " (" << b.min_label << "), verdict " << doc["verdict"].get<std::string>() << '\n';
  for (const auto& w : b.warnings) log << "warning: " << w << '\n';
  log << "wrote " << path.string() << '\n';
  return kOk;
}

int cmd_scan(const config::ExperimentConfig& cfg, std::ostream& log) {
  const auto state = config::build_state(cfg);
  const auto array = config::build_array(cfg);
  const auto table = config::build_table(cfg);
  const auto polarization = config::build_polarization(cfg);
  const auto grid = config::build_grid(cfg);

  const auto field = scan::sweep(state.density(), array, table, polarization, grid);
  const auto& best = field.points[field.argmin()];
  const double fraction = field.violating_fraction(cfg.run.tolerance);

  json summary = {{"points", field.points.size()},
                  {"violating_fraction", fraction},
                  {"min_W", best.witness.W},
                  {"min_label", best.witness.min_label},
                  {"min_theta", best.theta},
                  {"min_phi", best.phi},
                  {"tolerance", cfg.run.tolerance}};

  const auto dir = output_dir(cfg);
  std::filesystem::path path;
  if (cfg.run.format == "csv") {
    path = dir / "witness_field.csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    const auto prov = provenance(cfg);
    scan::write_csv(out, field,
                    {std::string("tool ") + kToolName + " " + kVersion, "config_sha256 " + prov["config_sha256"].get<std::string>(),
                     "seed " + std::to_string(cfg.run.seed), "schema_version " + std::to_string(scan::kSchemaVersion)});
  } else {
    path = dir / "witness_field.json";
    json doc = document(cfg, "scan");
    doc["state"] = state_json(state);
    doc["summary"] = summary;
    doc["field"] = scan::to_json(field);
    doc["config"] = config::to_json(cfg);
    write_json(path, doc);
  }
  json summary_doc = document(cfg, "scan");
  summary_doc["summary"] = summary;
  write_json(dir / "scan_summary.json", summary_doc);

  log << field.points.size() << " directions, violating fraction " << fraction << ", min W = " << best.witness.W << " ("
      << best.witness.min_label << ") at theta=" << best.theta << ", phi=" << best.phi << '\n';
  log << "wrote " << path.string() << '\n';
  return kOk;
}

int cmd_threshold(const config::ExperimentConfig& cfg, std::ostream& log) {
  const auto state = config::build_state(cfg);
  const auto array = config::build_array(cfg);
  const auto table = config::build_table(cfg);
  const auto direction = config::build_direction(cfg);
  const geometry::DetectionChannel channel(direction, config::build_polarization(cfg));
  const double s = geometry::structure_factor(array, direction);

  const auto found = witness::noise_threshold(state.psi, array, table, channel, cfg.run.threshold_resolution);

  json doc = document(cfg, "threshold");
  doc["state"] = state_json(state);
  doc["state"].erase("noise");
  doc["direction"] = direction_json(direction);
  doc["structure_factor"] = s;
  doc["W_at_p0"] = found.w_at_zero;
  doc["min_label_at_p0"] = found.min_label_at_zero;
  doc["resolution"] = cfg.run.threshold_resolution;
  doc["status"] = found.p_star ? "threshold_found" : "no_violation";
  doc["p_star"] = found.p_star ? json(*found.p_star) : json(nullptr);

  const int n = state.n_sites();
  json analytic_doc = nullptr;
  if (state.label == states::StateLabel::dicke_symmetric || state.label == states::StateLabel::singlet) {
    const bool sym = state.label == states::StateLabel::dicke_symmetric;
    const auto a = sym ? analytic::sym_noise_threshold(n, s) : analytic::asym_noise_threshold(n, s);
    analytic_doc = {{"formula", sym ? "(N - S) / ((N - 1) + (N - S))" : "(S - N) / ((N - 1) + (S - N))"},
                    {"p_star", a.p_star},
                    {"note", a.note},
                    {"difference", found.p_star ? json(*found.p_star - a.p_star) : json(nullptr)}};
  } else if (state.label == states::StateLabel::w_state) {
    const double bound = analytic::w_state_violation_bound(n);
    analytic_doc = {{"formula", "violation iff S <= N^2 / (2N - 1)"},
                    {"bound", bound},
                    {"predicts_violation", s <= bound},
                    {"agrees", (s <= bound) == found.p_star.has_value()}};
  }
  doc["analytic"] = analytic_doc;
  doc["config"] = config::to_json(cfg);

  const auto path = output_dir(cfg) / "threshold.json";
  write_json(path, doc);
  if (found.p_star)
    log << "p* = " << std::setprecision(12) << *found.p_star << " at S = " << s << '\n';
  else
    log << "no violation at this direction and channel (W(0) = " << found.w_at_zero << ", S = " << s << ")\n";
  if (analytic_doc.contains("p_star"))
    log << "analytic p* = " << analytic_doc["p_star"].get<double>() << " (" << analytic_doc["note"].get<std::string>() << ")\n";
  log << "wrote " << path.string() << '\n';
  return kOk;
}

int cmd_verify(const std::optional<config::ExperimentConfig>& cfg, const Overrides& o, std::ostream& log) {
  config::RunSpec run = cfg ? cfg->run : config::RunSpec{};
  if (o.seed) run.seed = *o.seed;
  const verify::VerifyOptions opt{run.seed, run.verify_trials, run.corrupt_loo_phase};
  const auto report = verify::run_all(opt);
  log << verify::format_report(report);

  if (o.out || cfg) {
    json doc = {{"schema_version", scan::kSchemaVersion}, {"command", "verify"}};
    if (cfg) {
      auto effective = *cfg;
      effective.run = run;
      doc["provenance"] = provenance(effective);
    } else {
      const json options = {{"seed", opt.seed}, {"trials", opt.trials}, {"corrupt_loo_phase", opt.corrupt_loo_phase}};
      doc["provenance"] = {{"tool", kToolName}, {"version", kVersion}, {"config_sha256", sha256_hex(options.dump())}, {"seed", opt.seed}};
    }
    doc["passed"] = report.passed();
    for (const auto& s : report.suites)
      doc["suites"].push_back({{"name", s.name},
                               {"passed", s.passed},
                               {"checks", s.checks},
                               {"max_error", s.max_error},
                               {"tolerance", s.tolerance},
                               {"failures", s.failures}});
    std::filesystem::path dir(o.out ? *o.out : run.output_dir);
    std::filesystem::create_directories(dir);
    write_json(dir / "verify.json", doc);
    log << "wrote " << (dir / "verify.json").string() << '\n';
  }
  return report.passed() ? kOk : kNumericalFailure;
}

}  // namespace lightwit::commands
