#include "ibnls/config.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "ibnls/error.hpp"
#include "ibnls/groundstate.hpp"
#include "ibnls/initial_data.hpp"
#include "ibnls/snapshot.hpp"

namespace ibnls {

using nlohmann::json;

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::GroundState: return "groundstate";
    case Experiment::Evolve: return "evolve";
    case Experiment::Classify: return "classify";
    case Experiment::Audit: return "audit";
    case Experiment::VirialCheck: return "virial-check";
    case Experiment::LorentzCheck: return "lorentz-check";
    case Experiment::Sweep: return "sweep";
  }
  return "unknown";
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ConfigParseError, "field '" + field + "': " + what);
}

Experiment experiment_from(const std::string& s, const std::string& field) {
  for (auto e : {Experiment::GroundState, Experiment::Evolve, Experiment::Classify, Experiment::Audit,
                 Experiment::VirialCheck, Experiment::LorentzCheck, Experiment::Sweep})
    if (s == to_string(e)) return e;
  fail(field, "unknown experiment '" + s + "'");
}

const json& section(const json& doc, const char* key) {
  static const json empty = json::object();
  if (!doc.contains(key)) return empty;
  if (!doc[key].is_object()) fail(key, "must be an object");
  return doc[key];
}

template <class T>
T get(const json& obj, const std::string& prefix, const char* key, const T& fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj[key].get<T>();
  } catch (const json::exception&) {
    fail(prefix + key, "has the wrong type");
  }
}

template <class T>
T require(const json& obj, const std::string& prefix, const char* key) {
  if (!obj.contains(key)) fail(prefix + key, "missing");
  return get<T>(obj, prefix, key, T{});
}

int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigParseError,
                "syntax error at line " + std::to_string(line_of(text, e.byte > 0 ? e.byte - 1 : 0)) + ": " + e.what());
  }
  return parse_config(doc);
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) fail("<root>", "must be an object");
  RunConfig c;
  c.source = doc;
  c.experiment = experiment_from(require<std::string>(doc, "", "experiment"), "experiment");

  const json& p = section(doc, "params");
  if (doc.contains("params") == false) fail("params", "missing");
  c.params.d = require<int>(p, "params.", "d");
  c.params.b = require<double>(p, "params.", "b");
  c.params.alpha = require<double>(p, "params.", "alpha");
  c.params.mu = get<double>(p, "params.", "mu", 0.0);
  c.params.kappa = get<int>(p, "params.", "kappa", 1);
  c.params.omega = get<double>(p, "params.", "omega", 1.0);

  const json& g = section(doc, "grid");
  if (c.experiment != Experiment::LorentzCheck) {
    if (!doc.contains("grid")) fail("grid", "missing");
    c.grid.n = require<int>(g, "grid.", "n");
    c.grid.L = require<double>(g, "grid.", "L");
  }
  c.grid.dim = c.params.d;
  c.grid.offset = get<bool>(g, "grid.", "offset", false);

  const json& w = section(doc, "weight");
  std::string rule = get<std::string>(w, "weight.", "rule", "corrected");
  if (rule != "corrected" && rule != "regularized") fail("weight.rule", "must be 'corrected' or 'regularized'");
  c.weight.corrected = rule == "corrected";
  c.weight.eps = get<double>(w, "weight.", "eps", 0.0);

  const json& in = section(doc, "integrator");
  auto& ic = c.integrator;
  ic.dt = get<double>(in, "integrator.", "dt", ic.dt);
  ic.t_end = get<double>(in, "integrator.", "t_end", ic.t_end);
  ic.snapshot_stride = get<int>(in, "integrator.", "snapshot_stride", ic.snapshot_stride);
  ic.dealias = get<bool>(in, "integrator.", "dealias", false);
  std::string adapt = get<std::string>(in, "integrator.", "adapt", "none");
  if (adapt != "none" && adapt != "halve-on-drift") fail("integrator.adapt", "must be 'none' or 'halve-on-drift'");
  ic.adapt = adapt == "none" ? Adapt::None : Adapt::HalveOnDrift;
  ic.drift_threshold = get<double>(in, "integrator.", "drift_threshold", ic.drift_threshold);
  ic.max_halvings = get<int>(in, "integrator.", "max_halvings", ic.max_halvings);
  ic.nonlinear = get<bool>(in, "integrator.", "nonlinear", true);
  c.checkpoint_every = get<int>(in, "integrator.", "checkpoint_every", 0);
  c.scatter = get<bool>(in, "integrator.", "scatter", false);

  const json& id = section(doc, "initial");
  auto& s = c.initial;
  s.family = get<std::string>(id, "initial.", "family", s.family);
  s.amplitude = get<double>(id, "initial.", "amplitude", s.amplitude);
  s.width = get<double>(id, "initial.", "width", s.width);
  s.radius = get<double>(id, "initial.", "radius", s.radius);
  s.xi_c = get<double>(id, "initial.", "xi_c", s.xi_c);
  s.spread = get<double>(id, "initial.", "spread", s.spread);
  s.c = get<double>(id, "initial.", "c", s.c);
  s.path = get<std::string>(id, "initial.", "path", "");
  if (id.contains("center")) {
    auto v = get<std::vector<double>>(id, "initial.", "center", {});
    if (v.size() > 3) fail("initial.center", "at most 3 components");
    for (size_t i = 0; i < v.size(); ++i) s.center[i] = v[i];
  }
  static const char* families[] = {"gaussian", "ring", "bandlimited", "random-smooth", "scaled-ground-state", "from-file"};
  if (std::find(std::begin(families), std::end(families), s.family) == std::end(families))
    fail("initial.family", "unknown family '" + s.family + "'");
  if (s.family == "from-file" && s.path.empty()) fail("initial.path", "missing");

  const json& t = section(doc, "tolerances");
  c.tolerances.tol_S = get<double>(t, "tolerances.", "tol_S", 1e-6);
  c.tolerances.tol_G = get<double>(t, "tolerances.", "tol_G", 1e-6);
  c.seed = get<std::uint64_t>(doc, "", "seed", 0);

  const json& gs = section(doc, "groundstate");
  c.gs_tol = get<double>(gs, "groundstate.", "tol", c.gs_tol);
  c.gs_max_iter = get<int>(gs, "groundstate.", "max_iter", c.gs_max_iter);
  c.c_values = get<std::vector<double>>(section(doc, "classify"), "classify.", "c_values", {});
  const json& au = section(doc, "audit");
  c.audit_samples = get<int>(au, "audit.", "samples", c.audit_samples);
  c.audit_direct = get<bool>(au, "audit.", "direct", false);
  c.virial_R = get<double>(section(doc, "virial"), "virial.", "R", 0.0);
  const json& lz = section(doc, "lorentz");
  c.lorentz_sizes = get<std::vector<int>>(lz, "lorentz.", "sizes", c.lorentz_sizes);
  c.lorentz_eps = get<double>(lz, "lorentz.", "eps", c.lorentz_eps);

  if (c.experiment == Experiment::Sweep) {
    const json& sw = section(doc, "sweep");
    if (!doc.contains("sweep")) fail("sweep", "missing");
    c.sweep_experiment = experiment_from(require<std::string>(sw, "sweep.", "experiment"), "sweep.experiment");
    if (c.sweep_experiment == Experiment::Sweep) fail("sweep.experiment", "sweeps do not nest");
    if (!sw.contains("axes") || !sw["axes"].is_object()) fail("sweep.axes", "missing");
    for (auto& [key, vals] : sw["axes"].items()) {
      if (!vals.is_array()) fail("sweep.axes." + key, "must be an array");
      try {
        c.sweep_axes.emplace_back(key, vals.get<std::vector<double>>());
      } catch (const json::exception&) {
        fail("sweep.axes." + key, "must hold numbers");
      }
    }
    c.parallel = get<int>(sw, "sweep.", "parallel", 1);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::ConfigParseError, "cannot read config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t h) {
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const json& doc) {
  json d = doc;
  if (d.contains("integrator") && d["integrator"].is_object()) {
    d["integrator"].erase("t_end");
    d["integrator"].erase("checkpoint_every");
  }
  if (d.contains("sweep") && d["sweep"].is_object()) d["sweep"].erase("parallel");
  return hex64(fnv1a64(d.dump()));  // object keys are sorted, so the dump is canonical
}

Grid build_grid(const RunConfig& c) { return make_grid(c.grid.dim, c.grid.n, c.grid.L, c.grid.offset); }

WeightField build_weight(const RunConfig& c, const Grid& g) {
  if (c.weight.corrected) return make_corrected_weight(g, c.params.b);
  return make_weight(g, c.params.b, c.weight.eps > 0 ? c.weight.eps : 0.5 * g.spacing());
}

Field build_initial(const RunConfig& c, const Grid& g, const WeightField& w) {
  const auto& s = c.initial;
  if (s.family == "gaussian") return gaussian(g, s.amplitude, s.width, s.center);
  if (s.family == "ring") return ring(g, s.amplitude, s.radius, s.width);
  if (s.family == "bandlimited") return bandlimited_bump(g, s.amplitude, s.xi_c);
  if (s.family == "random-smooth") {
    std::mt19937_64 rng(c.seed);
    return random_smooth(g, rng, s.amplitude, s.spread);
  }
  if (s.family == "scaled-ground-state") {
    GroundState gs = petviashvili_solve(c.params, w, gaussian(g, 1, 1), c.gs_tol, c.gs_max_iter);
    Field f = gs.field;
    f.values *= s.c;
    return f;
  }
  Field f = read_snapshot(s.path);
  require_same_grid(f.grid, g, "initial-data file grid differs from the configured grid");
  return to_physical(f);
}

}  // namespace ibnls
