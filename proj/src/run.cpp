#include "ibnls/run.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "ibnls/classifier.hpp"
#include "ibnls/groundstate.hpp"
#include "ibnls/initial_data.hpp"
#include "ibnls/lorentz.hpp"
#include "ibnls/scattering.hpp"
#include "ibnls/snapshot.hpp"
#include "ibnls/virial.hpp"

namespace ibnls {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigParseError:
    case ErrorKind::ConfigInvalid:
    case ErrorKind::ConfigHashMismatch:
    case ErrorKind::ParameterOutOfRange:
    case ErrorKind::InvalidGrid:
    case ErrorKind::InvalidExponent:
    case ErrorKind::RadiusOutOfRange:
    case ErrorKind::WrongGauge:
    case ErrorKind::SpaceMismatch:
    case ErrorKind::GridMismatch:
    case ErrorKind::SingularOrigin:
    case ErrorKind::IoError:
    case ErrorKind::CorruptSnapshot:
    case ErrorKind::HorizonTooShort:
    case ErrorKind::SpanTooShort:
    case ErrorKind::InsufficientSnapshots:
    case ErrorKind::NoSnapshots:
    case ErrorKind::EmptySeries:
      return 2;
    case ErrorKind::NoConvergence:
    case ErrorKind::DivergedToZero:
    case ErrorKind::NotConverged:
    case ErrorKind::NoBracket:
    case ErrorKind::ZeroField:
      return 3;
    case ErrorKind::ResolutionLoss:
    case ErrorKind::WraparoundDetected:
      return 4;
  }
  return 3;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_json(const fs::path& p, const json& j) {
  std::ofstream os(p);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + p.string());
  os << j.dump(2) << '\n';
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw Error(ErrorKind::IoError, "cannot read " + p.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

class Csv {
 public:
  Csv(const fs::path& p, const std::string& kind, const std::string& columns) : os_(p) {
    if (!os_) throw Error(ErrorKind::IoError, "cannot write " + p.string());
    os_ << "# ibnls " << kind << " v1\n" << columns << '\n';
  }
  template <class... T>
  void row(const T&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << '\n';
  }

 private:
  static std::string cell(double v) { return fmt17(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  std::ofstream os_;
};

GroundState solve_ground_state(const RunConfig& c, const PhysParams& p, const WeightField& w) {
  return petviashvili_solve(p, w, gaussian(w.grid, 1, 1), c.gs_tol, c.gs_max_iter);
}

json snapshot_json(const FunctionalSnapshot& s) {
  return {{"M", s.mass}, {"E", s.energy}, {"S", s.action}, {"G", s.pohozaev}, {"P", s.potential},
          {"grad_l2", s.grad_l2}, {"lap_l2", s.lap_l2}};
}

Mode mode_for(Experiment e) {
  return e == Experiment::Evolve || e == Experiment::VirialCheck ? Mode::Evolution : Mode::Variational;
}

// centred families are radial; only d >= 2 profits from it
bool radial_data(const RunConfig& c) {
  const auto& s = c.initial;
  bool centred = s.center[0] == 0 && s.center[1] == 0 && s.center[2] == 0;
  bool radial = (s.family == "gaussian" && centred) || s.family == "ring" || s.family == "bandlimited" ||
                s.family == "scaled-ground-state";
  return radial && c.params.d >= 2;
}

// ---- groundstate ----

RunResult run_groundstate(const RunConfig& c, const fs::path& out) {
  Grid g = build_grid(c);
  WeightField w = build_weight(c, g);
  GroundState gs = solve_ground_state(c, c.params, w);
  auto ratios = pohozaev_check(gs, c.params);
  json j;
  j["residual"] = gs.residual;
  j["tolerance"] = gs.tolerance;
  j["iterations"] = gs.iterations;
  j["pohozaev_ratio1"] = ratios.ratio1;
  j["pohozaev_ratio2"] = ratios.ratio2;
  j["m_threshold"] = gs.m_threshold;
  j["weinstein"] = gs.c_opt;
  j["lambda0"] = find_lambda0(gs.field, c.params, w);
  j["functionals"] = snapshot_json(gs.snapshot);
  if (c.params.mu == 0 && c.params.omega == 1) {
    j["c_opt"] = sharp_constant(gs, c.params);
    j["c_opt_closed_form"] = sharp_constant_closed_form(gs, c.params);
  }
  write_json(out / "groundstate.json", j);
  write_snapshot((out / "groundstate.snap").string(), gs.field);
  return {0, "ground state converged, residual " + fmt17(gs.residual), j};
}

// ---- evolve / resume ----

json checkpoint_sidecar(const RunConfig& c, double t, long step, double dt, int stride) {
  json j;
  j["t"] = t;
  j["step"] = step;
  j["dt"] = dt;
  j["snapshot_stride"] = stride;
  j["config_hash"] = config_hash(c.source);
  j["config"] = c.source;
  return j;
}

void write_checkpoint(const RunConfig& c, const fs::path& out, const Field& u, double t, long step, double dt,
                      int stride) {
  write_snapshot((out / "checkpoint.snap").string(), u);
  write_json(out / "checkpoint.json", checkpoint_sidecar(c, t, step, dt, stride));
}

RunResult finish_evolve(const RunConfig& c, const fs::path& out, const TrajectoryRecord& tr, const IntegratorConfig& ic,
                        const LinearSymbol& sym, const WeightField& w, const std::string& csv_name, long step0) {
  write_trajectory_csv((out / csv_name).string(), tr);
  write_snapshot((out / "final.snap").string(), tr.final_state);
  const int stride = static_cast<int>(std::lround(ic.snapshot_stride * ic.dt / tr.dt_used));
  const long scale = std::lround(ic.dt / tr.dt_used);
  write_checkpoint(c, out, tr.final_state, tr.times.back(), step0 * scale + tr.steps, tr.dt_used, stride);
  json j;
  j["verdict"] = to_string(tr.verdict);
  j["t_final"] = tr.times.back();
  j["steps"] = tr.steps;
  j["dt_used"] = tr.dt_used;
  j["mass_drift"] = tr.mass_drift.back();
  j["energy_drift"] = tr.energy_drift.back();
  j["accumulated_potential"] = tr.accumulated_potential.back();
  j["h2_max"] = *std::max_element(tr.h2_norm.begin(), tr.h2_norm.end());
  j["config_hash"] = config_hash(c.source);
  if (c.scatter) {
    auto ce = critical_exponents(c.params, radial_data(c));
    auto v = scatter_verdict(tr, c.params, ce, sym, w);
    json sj = json::parse(to_json(v));
    write_json(out / "scatter.json", sj);
    j["scatter_status"] = to_string(v.status);
  }
  write_json(out / "summary.json", j);
  int code = tr.verdict == Verdict::Completed ? 0 : 4;
  return {code, std::string("evolution ") + to_string(tr.verdict) + " at t = " + fmt17(tr.times.back()), j};
}

RunResult run_evolve(const RunConfig& c, const fs::path& out) {
  Grid g = build_grid(c);
  WeightField w = build_weight(c, g);
  LinearSymbol sym = make_symbol(g, c.params.mu);
  Field u0 = build_initial(c, g, w);
  IntegratorConfig ic = c.integrator;
  ic.keep_fields = c.scatter;
  int seen = 0;
  SnapshotHook hook;
  if (c.checkpoint_every > 0)
    hook = [&](long step, double t, const Field& u) {
      if (step > 0 && ++seen % c.checkpoint_every == 0) write_checkpoint(c, out, u, t, step, ic.dt, ic.snapshot_stride);
    };
  auto tr = evolve(u0, ic, c.params, w, sym, hook);
  return finish_evolve(c, out, tr, ic, sym, w, "trajectory.csv", 0);
}

}  // namespace

RunResult resume(const RunConfig& c, const std::string& out_dir) {
  fs::path out(out_dir);
  try {
    json side;
    try {
      side = json::parse(read_file(out / "checkpoint.json"));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ConfigParseError, std::string("checkpoint sidecar unreadable: ") + e.what());
    }
    if (!side.contains("config") || !side.contains("config_hash") || !side.contains("t") || !side.contains("step"))
      throw Error(ErrorKind::ConfigParseError, "checkpoint sidecar lacks t, step, config or config_hash");
    const std::string stored = side["config_hash"].get<std::string>();
    if (config_hash(side["config"]) != stored)
      throw Error(ErrorKind::ConfigHashMismatch, "checkpoint sidecar was edited (embedded config no longer matches its hash)");
    if (config_hash(c.source) != stored)
      throw Error(ErrorKind::ConfigHashMismatch, "config hash " + config_hash(c.source) + " differs from checkpoint " + stored);
    Field u = read_snapshot((out / "checkpoint.snap").string());
    Grid g = build_grid(c);
    require_same_grid(u.grid, g, "checkpoint grid differs from the configured grid");
    WeightField w = build_weight(c, g);
    LinearSymbol sym = make_symbol(g, c.params.mu);
    IntegratorConfig ic = c.integrator;
    ic.dt = side.value("dt", ic.dt);
    ic.snapshot_stride = side.value("snapshot_stride", ic.snapshot_stride);
    ic.keep_fields = c.scatter;
    const double t0 = side["t"].get<double>();
    const long step0 = side["step"].get<long>();
    auto tr = evolve(u, ic, c.params, w, sym, {}, t0, step0);
    RunConfig cc = c;
    cc.scatter = false;  // a resumed segment is too short for a horizon verdict
    RunResult r = finish_evolve(cc, out, tr, ic, sym, w, "trajectory_resumed.csv", step0);
    write_manifest(out.string());
    return r;
  } catch (const Error& e) {
    write_manifest(out.string());
    return {exit_code_for(e.kind()), e.what(), json::object()};
  }
}

namespace {

// ---- classify ----

RunResult run_classify(const RunConfig& c, const fs::path& out) {
  Grid g = build_grid(c);
  WeightField w = build_weight(c, g);
  GroundState gs = solve_ground_state(c, c.params, w);
  std::optional<GroundState> q1;
  if (c.params.mu == 0) {
    if (c.params.omega == 1) {
      q1 = gs;
    } else {
      PhysParams p1 = c.params;
      p1.omega = 1;
      q1 = solve_ground_state(c, p1, w);
    }
  }
  Field f = build_initial(c, g, w);
  auto rep = threshold_report(f, c.params, gs, q1 ? &*q1 : nullptr, c.tolerances);
  json j = json::parse(to_json(rep));
  j["m_threshold"] = gs.m_threshold;
  write_json(out / "classify.json", j);
  if (!c.c_values.empty()) {
    Csv csv(out / "classify.csv", "classify", "c,S,G,a_verdict,b_verdict");
    for (double cv : c.c_values) {
      Field q = gs.field;
      q.values *= cv;
      auto fs = evaluate_functionals(q, c.params, w);
      std::string bv = q1 ? to_string(classify_B(q, c.params, *q1, c.tolerances)) : "";
      csv.row(cv, fs.action, fs.pohozaev, std::string(to_string(classify_A(q, c.params, gs, c.tolerances))), bv);
    }
  }
  return {0, std::string("verdict ") + to_string(rep.a_verdict), j};
}

// ---- audit ----

std::vector<Field> audit_samples(const RunConfig& c, const GroundState& q1) {
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> scale(0.2, 1.8), amp(0.2, 1.5);
  std::vector<Field> s;
  const double spread = q1.field.grid.half_width() / 8;
  for (int i = 0; i < c.audit_samples; ++i) {
    if (i % 2 == 0) {
      Field f = q1.field;
      f.values *= scale(rng);
      s.push_back(std::move(f));
    } else {
      double a = amp(rng);
      s.push_back(random_smooth(q1.field.grid, rng, a, spread));
    }
  }
  return s;
}

RunResult run_audit(const RunConfig& c, const fs::path& out) {
  if (c.params.mu != 0) throw Error(ErrorKind::WrongGauge, "the equivalence audit is defined for mu = 0");
  Grid g = build_grid(c);
  WeightField w = build_weight(c, g);
  PhysParams p1 = c.params;
  p1.omega = 1;
  GroundState q1 = solve_ground_state(c, p1, w);
  auto rep = equivalence_audit(audit_samples(c, q1), p1, q1, c.tolerances, c.audit_direct);
  write_audit_csv((out / "audit.csv").string(), rep);
  json j;
  j["samples"] = rep.rows.size();
  j["agreement_fraction"] = rep.agreement_fraction;
  j["disagreements_outside_band"] = rep.disagreements_outside_band;
  int in_band = 0;
  for (const auto& r : rep.rows) in_band += r.in_band;
  j["in_band"] = in_band;
  write_json(out / "audit.json", j);
  int code = rep.disagreements_outside_band == 0 ? 0 : 4;
  return {code, "agreement " + fmt17(rep.agreement_fraction), j};
}

// ---- virial-check ----

RunResult run_virial(const RunConfig& c, const fs::path& out) {
  Grid g = build_grid(c);
  WeightField w = build_weight(c, g);
  LinearSymbol sym = make_symbol(g, c.params.mu);
  Field u0 = build_initial(c, g, w);
  const double R = c.virial_R > 0 ? c.virial_R : g.half_width() / 2;
  auto prof = build_cutoff_profile(g, R);
  IntegratorConfig ic = c.integrator;
  ic.keep_fields = true;
  auto tr = evolve(u0, ic, c.params, w, sym);
  auto rep = virial_rate_check(tr, prof, c.params, w);
  auto iden = cutoff_identity_check(u0, make_smooth_cutoff(g, R));
  json j;
  j["R"] = R;
  j["precondition_ok"] = rep.precondition_ok;
  j["min_interior_mass"] = rep.min_interior_mass;
  j["max_rel_error"] = rep.max_rel_error;
  j["virial_factor"] = kVirialFactor;
  j["mean_ratio_to_G"] = rep.mean_ratio_to_G;
  j["cutoff_identity_err1"] = iden.err1;
  j["cutoff_identity_err2"] = iden.err2;
  j["cutoff_resolution_warning"] = iden.resolution_warning;
  write_json(out / "virial.json", j);
  Csv csv(out / "virial.csv", "virial", "t,dM_dt,G,ratio");
  for (size_t i = 0; i < rep.times.size(); ++i) csv.row(rep.times[i], rep.rate[i], rep.pohozaev[i], rep.rate[i] / rep.pohozaev[i]);
  bool ok = rep.precondition_ok && rep.max_rel_error <= 1e-3 && iden.err1 <= 1e-8 && iden.err2 <= 1e-8;
  return {ok ? 0 : 4, ok ? "virial identity holds" : "virial check failed or skipped", j};
}

// ---- lorentz-check ----

RunResult run_lorentz(const RunConfig& c, const fs::path& out) {
  const int d = c.params.d;
  const double b = c.params.b, r = d / b;
  const double ball = std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1);
  const double target = std::pow(ball, b / d);
  Csv csv(out / "lorentz.csv", "lorentz", "n,h,weak_norm,target,rel_error");
  json j;
  j["target"] = target;
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity(), last = 0;
  for (int n : c.lorentz_sizes) {
    Grid g = make_grid(d, n, c.grid.L);
    WeightField w = make_weight(g, b, c.lorentz_eps);
    Field f{g, w.values.cast<cplx>(), Space::Physical};
    double v = lorentz_norm(f, r, kInfinity);
    double err = std::abs(v - target) / target;
    csv.row(n, g.spacing(), v, target, err);
    monotone = monotone && err < prev;
    prev = last = err;
  }
  // L^{r,r} against L^r on the configured initial data
  Grid g = make_grid(d, c.grid.n, c.grid.L);
  Field f = build_initial(c, g, make_corrected_weight(g, b));
  double worst = 0;
  for (double rr : {1.5, 2.0, 3.0, 5.0}) {
    double lr = std::pow(g.cell_volume() * f.values.abs().pow(rr).sum(), 1 / rr);
    worst = std::max(worst, std::abs(lorentz_norm(f, rr, rr) - lr) / lr);
  }
  j["final_rel_error"] = last;
  j["monotone"] = monotone;
  j["lrr_vs_lr_max_rel"] = worst;
  write_json(out / "lorentz.json", j);
  bool ok = monotone && last <= 0.02 && worst <= 1e-10;
  return {ok ? 0 : 4, "weak-norm error " + fmt17(last), j};
}

// ---- sweep ----

RunResult run_single(const RunConfig& c, const fs::path& out);

RunResult run_sweep(const RunConfig& c, const fs::path& out) {
  size_t total = c.sweep_axes.empty() ? 0 : 1;
  for (const auto& [k, v] : c.sweep_axes) total *= v.size();
  if (total == 0) throw Error(ErrorKind::ConfigInvalid, "sweep grid is empty");
  struct Point {
    std::vector<double> values;
    RunResult result;
  };
  std::vector<Point> points(total);
  for (size_t i = 0; i < total; ++i) {
    size_t rem = i;
    points[i].values.resize(c.sweep_axes.size());
    for (size_t a = c.sweep_axes.size(); a-- > 0;) {
      const auto& vals = c.sweep_axes[a].second;
      points[i].values[a] = vals[rem % vals.size()];
      rem /= vals.size();
    }
  }
  auto run_point = [&](size_t i) {
    char name[16];
    std::snprintf(name, sizeof name, "%04zu", i);
    fs::path dir = out / "points" / name;
    RunResult& res = points[i].result;
    try {
      fs::create_directories(dir);
      json doc = c.source;
      doc.erase("sweep");
      doc["experiment"] = to_string(c.sweep_experiment);
      for (size_t a = 0; a < c.sweep_axes.size(); ++a) {
        std::string ptr = "/" + c.sweep_axes[a].first;
        std::replace(ptr.begin(), ptr.end(), '.', '/');
        const json::json_pointer jp(ptr);
        const double v = points[i].values[a];
        // integers stay integers so typed fields keep parsing
        if (doc.contains(jp) && doc[jp].is_number_integer()) doc[jp] = static_cast<long>(std::lround(v));
        else doc[jp] = v;
      }
      RunConfig pc = parse_config(doc);
      validate_params(pc.params, mode_for(pc.experiment));
      res = run_single(pc, dir);
    } catch (const Error& e) {
      res = {exit_code_for(e.kind()), e.what(), json::object()};
    } catch (const std::exception& e) {
      res = {3, e.what(), json::object()};
    }
    if (fs::exists(dir)) write_manifest(dir.string());
  };
  const int workers = std::max(1, std::min<int>(c.parallel, static_cast<int>(total)));
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (size_t i; (i = next.fetch_add(1)) < total;) run_point(i);
    });
  for (auto& th : pool) th.join();

  // metric columns: numeric top-level summary keys of successful points, sorted
  std::map<std::string, int> keys;
  for (const auto& p : points)
    for (auto& [k, v] : p.result.summary.items())
      if (v.is_number() || v.is_boolean()) keys[k] = 1;
  std::string header = "index";
  for (const auto& [k, v] : c.sweep_axes) header += "," + k;
  header += ",exit_code";
  for (const auto& [k, v] : keys) header += "," + k;
  header += ",message";
  std::ofstream os(out / "sweep.csv");
  if (!os) throw Error(ErrorKind::IoError, "cannot write sweep.csv");
  os << "# ibnls sweep v1\n" << header << '\n';
  int failed = 0, first_code = 0;
  for (size_t i = 0; i < total; ++i) {
    const auto& p = points[i];
    os << i;
    for (double v : p.values) os << ',' << fmt17(v);
    os << ',' << p.result.exit_code;
    for (const auto& [k, unused] : keys) {
      os << ',';
      if (p.result.summary.contains(k)) {
        const auto& v = p.result.summary[k];
        os << (v.is_boolean() ? std::string(v.get<bool>() ? "1" : "0") : fmt17(v.get<double>()));
      }
    }
    std::string msg = p.result.exit_code == 0 ? "" : p.result.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    os << ',' << msg << '\n';
    if (p.result.exit_code != 0) {
      ++failed;
      if (!first_code) first_code = p.result.exit_code;
    }
  }
  json j;
  j["points"] = total;
  j["failed"] = failed;
  return {first_code, std::to_string(total - failed) + " of " + std::to_string(total) + " points succeeded", j};
}

RunResult run_single(const RunConfig& c, const fs::path& out) {
  switch (c.experiment) {
    case Experiment::GroundState: return run_groundstate(c, out);
    case Experiment::Evolve: return run_evolve(c, out);
    case Experiment::Classify: return run_classify(c, out);
    case Experiment::Audit: return run_audit(c, out);
    case Experiment::VirialCheck: return run_virial(c, out);
    case Experiment::LorentzCheck: return run_lorentz(c, out);
    case Experiment::Sweep: return run_sweep(c, out);
  }
  return {2, "unknown experiment", json::object()};
}

}  // namespace

RunResult run(const RunConfig& c, const std::string& out_dir) {
  fs::path out(out_dir);
  RunResult r;
  try {
    fs::create_directories(out);
    if (c.experiment != Experiment::Sweep && c.experiment != Experiment::LorentzCheck)
      validate_params(c.params, mode_for(c.experiment));
    r = run_single(c, out);
  } catch (const Error& e) {
    r = {exit_code_for(e.kind()), e.what(), json::object()};
  } catch (const fs::filesystem_error& e) {
    r = {2, std::string("IoError: ") + e.what(), json::object()};
  }
  if (fs::exists(out)) write_manifest(out.string());
  return r;
}

void write_manifest(const std::string& dir) {
  fs::path root(dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path() != root / "manifest.json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  json list = json::array();
  for (const auto& f : files) {
    std::string bytes = read_file(f);
    list.push_back({{"path", fs::relative(f, root).generic_string()},
                    {"bytes", bytes.size()},
                    {"fnv1a64", hex64(fnv1a64(bytes))}});
  }
  write_json(root / "manifest.json", {{"files", list}, {"hash", "fnv1a64"}});
}

}  // namespace ibnls
