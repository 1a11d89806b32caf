#pragma once
#include <functional>
#include <string>
#include <vector>

#include "ibnls/functionals.hpp"
#include "ibnls/propagator.hpp"

namespace ibnls {

enum class Adapt { None, HalveOnDrift };
enum class Verdict { Completed, ResolutionLost, EnergyDrift };
const char* to_string(Verdict v);

struct IntegratorConfig {
  double dt = 1e-4;
  double t_end = 1.0;
  int snapshot_stride = 100;
  bool dealias = false;  // 2/3-rule filter applied with the linear substep
  Adapt adapt = Adapt::None;
  double drift_threshold = 1e-5;
  int max_halvings = 4;
  bool nonlinear = true;     // false: pure linear flow
  bool keep_fields = false;  // store a Field per snapshot
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<FunctionalSnapshot> functionals;
  std::vector<Field> fields;
  std::vector<double> mass_drift;    // running max of |M(t)-M(0)|/M(0)
  std::vector<double> energy_drift;  // running max of |E(t)-E(0)|/|E(0)|
  std::vector<double> accumulated_potential;
  std::vector<double> h2_norm;
  std::vector<double> spectral_tail;
  Verdict verdict = Verdict::Completed;
  double dt_used = 0;
  long steps = 0;
  Field final_state;
};

// exact flow of i u_t = -κ w |u|^α u
Field nonlinear_substep(const Field& f, double dt, const PhysParams& p, const WeightField& w);
// N(dt/2) L(dt) N(dt/2)
Field strang_step(const Field& f, double dt, const PhysParams& p, const WeightField& w, const LinearSymbol& sym);

// max |û|² outside the inner 2/3 band over max |û|²
double spectral_tail(const Field& f);

using SnapshotHook = std::function<void(long step, double t, const Field& u)>;

// t0/step0 let a checkpointed run continue on the same step sequence
TrajectoryRecord evolve(const Field& u0, const IntegratorConfig& cfg, const PhysParams& p, const WeightField& w,
                        const LinearSymbol& sym, const SnapshotHook& hook = {}, double t0 = 0.0, long step0 = 0);

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& tr);

}  // namespace ibnls
