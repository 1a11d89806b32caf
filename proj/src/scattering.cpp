#include "ibnls/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "ibnls/error.hpp"
#include "ibnls/lorentz.hpp"

namespace ibnls {

const char* to_string(ScatterStatus s) {
  switch (s) {
    case ScatterStatus::ScatteringIndicated: return "scattering-indicated";
    case ScatterStatus::Undecided: return "undecided";
    case ScatterStatus::Growth: return "growth";
  }
  return "unknown";
}

std::vector<Field> duhamel_profile(const TrajectoryRecord& traj, const LinearSymbol& sym) {
  if (traj.fields.empty()) throw Error(ErrorKind::NoSnapshots, "trajectory carries no field snapshots");
  std::vector<Field> out;
  for (size_t j = 0; j < traj.fields.size(); ++j) out.push_back(linear_evolve(traj.fields[j], -traj.times[j], sym));
  return out;
}

namespace {

double h2_distance(const Field& a, const Field& b) {
  Field d = a;
  d.values -= b.values;
  return sobolev_norms(d).h2;
}

size_t nearest(const std::vector<double>& t, double x) {
  size_t best = 0;
  for (size_t j = 1; j < t.size(); ++j)
    if (std::abs(t[j] - x) < std::abs(t[best] - x)) best = j;
  return best;
}

}  // namespace

ScatterVerdict scatter_verdict(const TrajectoryRecord& traj, const PhysParams& p, const CriticalExponents& ce,
                               const LinearSymbol& sym, const WeightField& w) {
  if (traj.times.empty()) throw Error(ErrorKind::HorizonTooShort, "empty trajectory");
  ScatterVerdict v;
  // growth is decidable early: a run that lost resolution never reaches the horizon
  const double h0 = traj.h2_norm.front(), hmax = *std::max_element(traj.h2_norm.begin(), traj.h2_norm.end());
  if (traj.verdict == Verdict::ResolutionLost || hmax > 3 * h0) {
    v.status = ScatterStatus::Growth;
    for (const auto& f : traj.functionals) v.potential_series.push_back(f.potential);
    return v;
  }
  if (traj.times.back() < 20 || traj.fields.size() < 20)
    throw Error(ErrorKind::HorizonTooShort, "need t_end >= 20 and at least 20 field snapshots");
  (void)p;
  (void)w;
  auto prof = duhamel_profile(traj, sym);
  for (size_t j = 0; j + 1 < prof.size(); ++j) v.cauchy_series.push_back(h2_distance(prof[j + 1], prof[j]));
  for (const auto& f : traj.functionals) v.potential_series.push_back(f.potential);

  // left-endpoint accumulation; the final snapshot closes the last interval
  std::vector<std::pair<double, Field>> series;
  for (size_t j = 0; j + 1 < traj.fields.size(); ++j) series.emplace_back(traj.times[j], traj.fields[j]);
  v.lk_norm_series = lk_lr2_running(series, ce.k, ce.r, traj.times.back());

  const double T = traj.times.back();
  for (double t = T / 16; t <= T * (1 + 1e-12); t *= 2) v.window_bounds.push_back(t);
  std::vector<double> lk_pow;  // accumulated ∫‖u‖^k, aligned with snapshot j+1
  lk_pow.push_back(0.0);
  for (double x : v.lk_norm_series) lk_pow.push_back(std::pow(x, ce.k));
  for (size_t i = 0; i + 1 < v.window_bounds.size(); ++i) {
    size_t a = nearest(traj.times, v.window_bounds[i]), b = nearest(traj.times, v.window_bounds[i + 1]);
    v.window_cauchy.push_back(h2_distance(prof[b], prof[a]));
    v.window_lk.push_back(lk_pow[b] - lk_pow[a]);
  }
  v.cauchy_decreasing = true;
  v.lk_decaying = true;
  // increments at roundoff level (exactly linear flow) count as converged
  const double floor = 1e-12 * std::max(h0, 1e-300);
  for (size_t i = 1; i < v.window_cauchy.size(); ++i) {
    bool settled = v.window_cauchy[i] <= floor && v.window_cauchy[i - 1] <= floor;
    v.cauchy_decreasing = v.cauchy_decreasing && (settled || v.window_cauchy[i] < v.window_cauchy[i - 1]);
    v.lk_decaying = v.lk_decaying && v.window_lk[i] <= 0.5 * v.window_lk[i - 1];
  }
  v.potential_decayed = v.potential_series.front() > 0
                            ? v.potential_series.back() <= 0.01 * v.potential_series.front()
                            : true;

  if (v.cauchy_decreasing && v.potential_decayed && v.lk_decaying) {
    v.status = ScatterStatus::ScatteringIndicated;
    v.u_plus = prof.back();
    v.u_plus_error = v.cauchy_series.empty() ? 0.0 : v.cauchy_series.back();
  }
  return v;
}

DecayProbe decay_probe(const TrajectoryRecord& traj) {
  std::vector<double> lx, ly;
  for (size_t j = 0; j < traj.times.size(); ++j)
    if (traj.times[j] > 0 && traj.functionals[j].potential > 0) {
      lx.push_back(std::log(traj.times[j]));
      ly.push_back(std::log(traj.functionals[j].potential));
    }
  if (lx.size() < 3 || lx.back() - lx.front() < std::log(2.0))
    throw Error(ErrorKind::SpanTooShort, "decay probe needs at least 3 positive times spanning a factor 2");
  DecayProbe d;
  d.p_decay_exponent = loglog_fit(lx, ly).first;
  d.undecided = std::abs(d.p_decay_exponent) < 0.05;
  return d;
}

std::string to_json(const ScatterVerdict& v) {
  nlohmann::json j;
  j["status"] = to_string(v.status);
  j["cauchy_decreasing"] = v.cauchy_decreasing;
  j["potential_decayed"] = v.potential_decayed;
  j["lk_decaying"] = v.lk_decaying;
  j["window_bounds"] = v.window_bounds;
  j["window_cauchy"] = v.window_cauchy;
  j["window_lk"] = v.window_lk;
  j["potential_ratio"] =
      v.potential_series.empty() || v.potential_series.front() == 0 ? 0.0 : v.potential_series.back() / v.potential_series.front();
  j["u_plus_error"] = v.u_plus_error;
  j["note"] = "numerical indicator on a periodic box over a finite horizon, not a certificate";
  return j.dump(2);
}

}  // namespace ibnls
