#include "lightwit/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace lightwit::config {

using nlohmann::json;

ConfigError::ConfigError(std::string path, const std::string& message)
    : std::runtime_error("config error at " + (path.empty() ? std::string("/") : path) + ": " + message),
      path_(std::move(path)) {}

namespace {

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string join(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

void expect_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!keys.contains(key)) throw ConfigError(join(path, key), "unknown key");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

const json& array_of(const json& j, const std::string& path, std::optional<std::size_t> size = std::nullopt) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  if (size && j.size() != *size) throw ConfigError(path, "expected " + std::to_string(*size) + " entries");
  return j;
}

cplx get_complex(const json& j, const std::string& path) {
  array_of(j, path, 2);
  return {get_number(j[0], join(path, 0)), get_number(j[1], join(path, 1))};
}

Real3 get_real3(const json& j, const std::string& path) {
  array_of(j, path, 3);
  return {get_number(j[0], join(path, 0)), get_number(j[1], join(path, 1)), get_number(j[2], join(path, 2))};
}

geometry::PolarizationPreset get_preset(const json& j, const std::string& path) {
  const auto name = get_string(j, path);
  const auto preset = geometry::parse_preset(name);
  if (!preset) throw ConfigError(path, "unknown preset '" + name + "' (expected e_plus, e_minus or e_z)");
  return *preset;
}

VectorSpec get_vector_spec(const json& j, const std::string& path) {
  VectorSpec v;
  if (j.is_string()) {
    v.preset = get_preset(j, path);
    return v;
  }
  array_of(j, path, 3);
  for (std::size_t k = 0; k < 3; ++k) v.components[k] = get_complex(j[k], join(path, k));
  return v;
}

geometry::TransitionPair get_pair(const json& j, const std::string& path) {
  array_of(j, path, 2);
  const geometry::TransitionPair pair{get_int(j[0], join(path, 0)), get_int(j[1], join(path, 1))};
  if (pair.alpha < 1 || pair.alpha >= pair.beta) throw ConfigError(path, "pair must satisfy 1 <= alpha < beta");
  return pair;
}

std::vector<TransitionSpec> get_transitions(const json& j, const std::string& path, const char* vector_key) {
  array_of(j, path);
  std::vector<TransitionSpec> out;
  std::set<geometry::TransitionPair> seen;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto p = join(path, k);
    expect_object(j[k], p, {"pair", vector_key});
    if (!j[k].contains("pair")) throw ConfigError(join(p, "pair"), "missing");
    if (!j[k].contains(vector_key)) throw ConfigError(join(p, vector_key), "missing");
    TransitionSpec t{get_pair(j[k]["pair"], join(p, "pair")), get_vector_spec(j[k][vector_key], join(p, vector_key))};
    if (!seen.insert(t.pair).second) throw ConfigError(join(p, "pair"), "transition listed twice");
    out.push_back(t);
  }
  return out;
}

StateSpec parse_state(const json& j, const std::string& path) {
  expect_object(j, path, {"name", "n", "d", "amplitudes", "noise"});
  if (!j.contains("name")) throw ConfigError(join(path, "name"), "missing");
  StateSpec s;
  const auto name = get_string(j["name"], join(path, "name"));
  const auto label = states::parse_label(name);
  if (!label) throw ConfigError(join(path, "name"), "unknown state '" + name + "'");
  s.label = *label;
  if (j.contains("n")) s.n = get_int(j["n"], join(path, "n"));
  if (j.contains("d")) s.d = get_int(j["d"], join(path, "d"));
  if (j.contains("amplitudes")) {
    const auto p = join(path, "amplitudes");
    array_of(j["amplitudes"], p);
    for (std::size_t k = 0; k < j["amplitudes"].size(); ++k) s.amplitudes.push_back(get_complex(j["amplitudes"][k], join(p, k)));
  }
  if (j.contains("noise")) s.noise = get_number(j["noise"], join(path, "noise"));
  return s;
}

GeometrySpec parse_geometry(const json& j, const std::string& path) {
  expect_object(j, path, {"positions", "lattice", "transitions"});
  GeometrySpec g;
  if (j.contains("positions") == j.contains("lattice")) throw ConfigError(path, "give exactly one of positions, lattice");
  if (j.contains("positions")) {
    const auto p = join(path, "positions");
    array_of(j["positions"], p);
    for (std::size_t k = 0; k < j["positions"].size(); ++k) g.positions.push_back(get_real3(j["positions"][k], join(p, k)));
  } else {
    const auto p = join(path, "lattice");
    const auto& l = j["lattice"];
    expect_object(l, p, {"n", "spacing", "axis"});
    for (const char* key : {"n", "spacing"})
      if (!l.contains(key)) throw ConfigError(join(p, key), "missing");
    LatticeSpec lat;
    lat.n = get_int(l["n"], join(p, "n"));
    lat.spacing = get_number(l["spacing"], join(p, "spacing"));
    if (l.contains("axis")) lat.axis = get_real3(l["axis"], join(p, "axis"));
    g.lattice = lat;
  }
  if (!j.contains("transitions")) throw ConfigError(join(path, "transitions"), "missing");
  g.transitions = get_transitions(j["transitions"], join(path, "transitions"), "dipole");
  return g;
}

DetectionSpec parse_detection(const json& j, const std::string& path) {
  expect_object(j, path, {"polarization", "direction", "grid"});
  DetectionSpec det;
  if (!j.contains("polarization")) throw ConfigError(join(path, "polarization"), "missing");
  const auto& pol = j["polarization"];
  if (pol.is_string())
    det.uniform_polarization = get_preset(pol, join(path, "polarization"));
  else
    det.per_transition = get_transitions(pol, join(path, "polarization"), "vector");

  if (j.contains("direction")) {
    const auto p = join(path, "direction");
    const auto& d = j["direction"];
    expect_object(d, p, {"theta", "phi", "vector"});
    DirectionSpec dir;
    if (d.contains("vector")) {
      if (d.contains("theta") || d.contains("phi")) throw ConfigError(p, "give either theta/phi or vector");
      dir.vector = get_real3(d["vector"], join(p, "vector"));
    } else {
      for (const char* key : {"theta", "phi"})
        if (!d.contains(key)) throw ConfigError(join(p, key), "missing");
      dir.angles = std::array<double, 2>{get_number(d["theta"], join(p, "theta")), get_number(d["phi"], join(p, "phi"))};
    }
    det.direction = dir;
  }
  if (j.contains("grid")) {
    const auto p = join(path, "grid");
    const auto& g = j["grid"];
    expect_object(g, p, {"n_theta", "n_phi", "theta", "phi"});
    GridSpec grid;
    const bool uniform = g.contains("n_theta") || g.contains("n_phi");
    const bool lists = g.contains("theta") || g.contains("phi");
    if (uniform == lists) throw ConfigError(p, "give either n_theta/n_phi or theta/phi lists");
    const char* keys[2] = {uniform ? "n_theta" : "theta", uniform ? "n_phi" : "phi"};
    for (const char* key : keys)
      if (!g.contains(key)) throw ConfigError(join(p, key), "missing");
    if (uniform) {
      grid.uniform = std::array<int, 2>{get_int(g["n_theta"], join(p, "n_theta")), get_int(g["n_phi"], join(p, "n_phi"))};
    } else {
      for (std::size_t k = 0; k < array_of(g["theta"], join(p, "theta")).size(); ++k)
        grid.theta.push_back(get_number(g["theta"][k], join(join(p, "theta"), k)));
      for (std::size_t k = 0; k < array_of(g["phi"], join(p, "phi")).size(); ++k)
        grid.phi.push_back(get_number(g["phi"][k], join(join(p, "phi"), k)));
    }
    det.grid = grid;
  }
  return det;
}

RunSpec parse_run(const json& j, const std::string& path) {
  expect_object(j, path, {"seed", "tolerance", "threshold_resolution", "verify_trials", "corrupt_loo_phase", "output_dir", "format"});
  RunSpec r;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError(join(path, "seed"), "expected a non-negative integer");
    r.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tolerance")) r.tolerance = get_number(j["tolerance"], join(path, "tolerance"));
  if (r.tolerance < 0.0) throw ConfigError(join(path, "tolerance"), "must be non-negative");
  if (j.contains("threshold_resolution"))
    r.threshold_resolution = get_number(j["threshold_resolution"], join(path, "threshold_resolution"));
  if (!(r.threshold_resolution > 0.0)) throw ConfigError(join(path, "threshold_resolution"), "must be positive");
  if (j.contains("verify_trials")) r.verify_trials = get_int(j["verify_trials"], join(path, "verify_trials"));
  if (r.verify_trials < 1) throw ConfigError(join(path, "verify_trials"), "must be at least 1");
  if (j.contains("corrupt_loo_phase")) r.corrupt_loo_phase = get_number(j["corrupt_loo_phase"], join(path, "corrupt_loo_phase"));
  if (j.contains("output_dir")) r.output_dir = get_string(j["output_dir"], join(path, "output_dir"));
  if (j.contains("format")) r.format = get_string(j["format"], join(path, "format"));
  if (r.format != "csv" && r.format != "json") throw ConfigError(join(path, "format"), "expected csv or json");
  return r;
}

// ---------------------------------------------------------------------------

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json vector_json(const VectorSpec& v) {
  if (v.preset) return std::string(geometry::to_string(*v.preset));
  json out = json::array();
  for (const auto& z : v.components) out.push_back(complex_json(z));
  return out;
}

json transitions_json(const std::vector<TransitionSpec>& list, const char* key) {
  json out = json::array();
  for (const auto& t : list) out.push_back({{"pair", {t.pair.alpha, t.pair.beta}}, {key, vector_json(t.vector)}});
  return out;
}

geometry::CVec3 unit_vector(const VectorSpec& v, const std::string& path) {
  if (v.preset) return geometry::preset_vector(*v.preset);
  geometry::CVec3 out(v.components[0], v.components[1], v.components[2]);
  const double norm = out.norm();
  if (!(norm > 1e-12)) throw ConfigError(path, "vector must be non-zero");
  return out / norm;
}

int state_dim(const ExperimentConfig& cfg) { return build_state(cfg).local_dim(); }

}  // namespace

// ---------------------------------------------------------------------------

ExperimentConfig parse_config(const json& doc) {
  expect_object(doc, "", {"state", "geometry", "detection", "run"});
  for (const char* key : {"state", "geometry", "detection"})
    if (!doc.contains(key)) throw ConfigError(std::string("/") + key, "missing section");
  ExperimentConfig cfg;
  cfg.state = parse_state(doc["state"], "/state");
  cfg.geometry = parse_geometry(doc["geometry"], "/geometry");
  cfg.detection = parse_detection(doc["detection"], "/detection");
  if (doc.contains("run")) cfg.run = parse_run(doc["run"], "/run");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  json doc;
  auto& s = doc["state"];
  s["name"] = std::string(states::to_string(cfg.state.label));
  if (cfg.state.n) s["n"] = *cfg.state.n;
  if (cfg.state.d) s["d"] = *cfg.state.d;
  if (!cfg.state.amplitudes.empty()) {
    s["amplitudes"] = json::array();
    for (auto z : cfg.state.amplitudes) s["amplitudes"].push_back(complex_json(z));
  }
  s["noise"] = cfg.state.noise;

  auto& g = doc["geometry"];
  if (cfg.geometry.lattice) {
    const auto& l = *cfg.geometry.lattice;
    g["lattice"] = {{"n", l.n}, {"spacing", l.spacing}, {"axis", l.axis}};
  } else {
    g["positions"] = cfg.geometry.positions;
  }
  g["transitions"] = transitions_json(cfg.geometry.transitions, "dipole");

  auto& det = doc["detection"];
  if (cfg.detection.uniform_polarization)
    det["polarization"] = std::string(geometry::to_string(*cfg.detection.uniform_polarization));
  else
    det["polarization"] = transitions_json(cfg.detection.per_transition, "vector");
  if (cfg.detection.direction) {
    const auto& d = *cfg.detection.direction;
    if (d.vector)
      det["direction"] = {{"vector", *d.vector}};
    else
      det["direction"] = {{"theta", (*d.angles)[0]}, {"phi", (*d.angles)[1]}};
  }
  if (cfg.detection.grid) {
    const auto& gr = *cfg.detection.grid;
    if (gr.uniform)
      det["grid"] = {{"n_theta", (*gr.uniform)[0]}, {"n_phi", (*gr.uniform)[1]}};
    else
      det["grid"] = {{"theta", gr.theta}, {"phi", gr.phi}};
  }

  const auto& r = cfg.run;
  doc["run"] = {{"seed", r.seed},
                {"tolerance", r.tolerance},
                {"threshold_resolution", r.threshold_resolution},
                {"verify_trials", r.verify_trials},
                {"corrupt_loo_phase", r.corrupt_loo_phase},
                {"output_dir", r.output_dir},
                {"format", r.format}};
  return doc;
}

// ---------------------------------------------------------------------------

states::NamedState build_state(const ExperimentConfig& cfg) {
  const auto& s = cfg.state;
  if (!(s.noise >= 0.0 && s.noise <= 1.0)) throw ConfigError("/state/noise", "must lie in [0, 1]");
  auto require = [](const std::optional<int>& v, const char* key) {
    if (!v) throw ConfigError(std::string("/state/") + key, "missing");
    return *v;
  };
  auto check_d = [&](int expected) {
    if (s.d && *s.d != expected) throw ConfigError("/state/d", "must be " + std::to_string(expected) + " for this state");
  };
  if (s.label != states::StateLabel::custom && !s.amplitudes.empty())
    throw ConfigError("/state/amplitudes", "only allowed for custom states");

  try {
    switch (s.label) {
      case states::StateLabel::dicke_symmetric: {
        const int n = require(s.n, "n");
        check_d(n);
        return {s.label, states::dicke_symmetric(n), s.noise};
      }
      case states::StateLabel::singlet: {
        const int n = require(s.n, "n");
        check_d(n);
        return {s.label, states::singlet_antisymmetric(n), s.noise};
      }
      case states::StateLabel::w_state:
        return {s.label, states::w_state(require(s.n, "n"), require(s.d, "d")), s.noise};
      case states::StateLabel::two_qutrit_example:
        if (s.n && *s.n != 2) throw ConfigError("/state/n", "must be 2 for this state");
        check_d(3);
        return {s.label, states::two_qutrit_example(), s.noise};
      case states::StateLabel::custom: {
        const int n = require(s.n, "n");
        const int d = require(s.d, "d");
        if (n < 1 || d < 2) throw ConfigError("/state", "custom states need n >= 1 and d >= 2");
        const auto dim = hilbert::hilbert_dim(n, d);
        if (s.amplitudes.size() != dim)
          throw ConfigError("/state/amplitudes", "expected d^n = " + std::to_string(dim) + " amplitudes");
        CVector amps(static_cast<Eigen::Index>(dim));
        for (std::size_t k = 0; k < dim; ++k) amps(static_cast<Eigen::Index>(k)) = s.amplitudes[k];
        if (!(amps.norm() > 1e-12)) throw ConfigError("/state/amplitudes", "state vector is zero");
        return {s.label, hilbert::StateVector::normalized(std::move(amps), n, d), s.noise};
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("/state", e.what());
  }
  throw ConfigError("/state/name", "unsupported state");
}

geometry::EmitterArray build_array(const ExperimentConfig& cfg) {
  const auto psi = build_state(cfg);
  const auto& g = cfg.geometry;
  try {
    if (g.lattice) {
      const auto& l = *g.lattice;
      if (l.n != psi.n_sites()) throw ConfigError("/geometry/lattice/n", "must equal the number of atoms in the state");
      geometry::Vec3 axis(l.axis[0], l.axis[1], l.axis[2]);
      if (!(axis.norm() > 1e-12)) throw ConfigError("/geometry/lattice/axis", "must be non-zero");
      return geometry::EmitterArray::linear_lattice(l.n, l.spacing, axis.normalized(), psi.local_dim());
    }
    if (static_cast<int>(g.positions.size()) != psi.n_sites())
      throw ConfigError("/geometry/positions", "expected one position per atom (" + std::to_string(psi.n_sites()) + ")");
    std::vector<geometry::Vec3> positions;
    for (const auto& r : g.positions) positions.emplace_back(r[0], r[1], r[2]);
    return {std::move(positions), psi.local_dim()};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("/geometry", e.what());
  }
}

geometry::TransitionTable build_table(const ExperimentConfig& cfg) {
  const int d = state_dim(cfg);
  geometry::TransitionTable table(d);
  for (std::size_t k = 0; k < cfg.geometry.transitions.size(); ++k) {
    const auto& t = cfg.geometry.transitions[k];
    const auto path = "/geometry/transitions/" + std::to_string(k);
    if (t.pair.beta > d) throw ConfigError(path + "/pair", "level exceeds d = " + std::to_string(d));
    table.allow(t.pair, unit_vector(t.vector, path + "/dipole"));
  }
  if (table.allowed_count() == 0) throw ConfigError("/geometry/transitions", "at least one transition must be allowed");
  return table;
}

geometry::Polarization build_polarization(const ExperimentConfig& cfg) {
  const auto table = build_table(cfg);
  const auto& det = cfg.detection;
  if (det.uniform_polarization) return geometry::Polarization::uniform(*det.uniform_polarization, table);
  geometry::Polarization pol(table.local_dim());
  for (std::size_t k = 0; k < det.per_transition.size(); ++k) {
    const auto& t = det.per_transition[k];
    const auto path = "/detection/polarization/" + std::to_string(k);
    if (t.pair.beta > table.local_dim() || !table.allowed(t.pair))
      throw ConfigError(path + "/pair", "transition " + geometry::to_string(t.pair) + " is not allowed");
    pol.set(t.pair, unit_vector(t.vector, path + "/vector"));
  }
  for (auto pair : table.allowed_pairs())
    if (!pol.at(pair)) throw ConfigError("/detection/polarization", "no vector for allowed transition " + geometry::to_string(pair));
  return pol;
}

geometry::Vec3 build_direction(const ExperimentConfig& cfg) {
  if (!cfg.detection.direction) throw ConfigError("/detection/direction", "missing (required by this command)");
  const auto& d = *cfg.detection.direction;
  if (d.vector) {
    geometry::Vec3 v((*d.vector)[0], (*d.vector)[1], (*d.vector)[2]);
    if (!(v.norm() > 1e-12)) throw ConfigError("/detection/direction/vector", "must be non-zero");
    return v.normalized();
  }
  const double theta = (*d.angles)[0];
  if (theta < 0.0 || theta > std::numbers::pi) throw ConfigError("/detection/direction/theta", "must lie in [0, pi]");
  return geometry::direction_from_angles(theta, (*d.angles)[1]).normalized();
}

scan::AngularGrid build_grid(const ExperimentConfig& cfg) {
  if (!cfg.detection.grid) throw ConfigError("/detection/grid", "missing (required by this command)");
  const auto& g = *cfg.detection.grid;
  try {
    if (g.uniform) return scan::AngularGrid::uniform((*g.uniform)[0], (*g.uniform)[1]);
    return {g.theta, g.phi};
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/detection/grid", e.what());
  }
}

void validate(const ExperimentConfig& cfg) {
  build_array(cfg);
  build_polarization(cfg);
  if (cfg.detection.direction) build_direction(cfg);
  if (cfg.detection.grid) build_grid(cfg);
}

}  // namespace lightwit::config
