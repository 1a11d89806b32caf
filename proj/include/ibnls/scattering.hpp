#pragma once
#include <optional>
#include <string>
#include <vector>

#include "ibnls/integrator.hpp"
#include "ibnls/params.hpp"

namespace ibnls {

enum class ScatterStatus { ScatteringIndicated, Undecided, Growth };
const char* to_string(ScatterStatus s);

struct ScatterVerdict {
  ScatterStatus status = ScatterStatus::Undecided;
  std::vector<double> cauchy_series;     // ‖w(t_{j+1}) - w(t_j)‖_{H²}
  std::vector<double> potential_series;  // P(u(t_j))
  std::vector<double> lk_norm_series;    // running L^k_t L^{r,2}_x
  std::vector<double> window_bounds;     // T/16, T/8, T/4, T/2, T
  std::vector<double> window_cauchy;     // ‖w(end) - w(start)‖_{H²} per dyadic window
  std::vector<double> window_lk;         // ∫_W ‖u‖^k_{L^{r,2}} dt per dyadic window
  bool cauchy_decreasing = false, potential_decayed = false, lk_decaying = false;
  std::optional<Field> u_plus;
  double u_plus_error = 0;  // last Cauchy increment
};

// w(t_j) = U_μ(-t_j) u(t_j)
std::vector<Field> duhamel_profile(const TrajectoryRecord& traj, const LinearSymbol& sym);

ScatterVerdict scatter_verdict(const TrajectoryRecord& traj, const PhysParams& p, const CriticalExponents& ce,
                               const LinearSymbol& sym, const WeightField& w);

struct DecayProbe {
  double p_decay_exponent = 0;
  bool undecided = false;  // |exponent| < 0.05
};
DecayProbe decay_probe(const TrajectoryRecord& traj);

std::string to_json(const ScatterVerdict& v);

}  // namespace ibnls
