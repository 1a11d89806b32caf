#pragma once
#include <vector>

#include "ibnls/integrator.hpp"
#include "ibnls/params.hpp"

namespace ibnls {

// C^∞ step: 0 for t ≤ 0, 1 for t ≥ 1, built from e^{-1/t}
double smooth_step(double t);

// ζ = 2 on [0,1], 0 on [2,∞); ϑ(r) = ∫₀^r∫₀^s ζ
struct Vartheta {
  static double zeta(double r);
  static double d1(double r);  // ϑ'(r) = ∫₀^r ζ
  static double value(double r);
};

struct CutoffProfile {
  Grid grid;
  double R = 0;
  Eigen::ArrayXd phi;          // R²ϑ(|x|/R)
  Eigen::ArrayXd dphi;         // φ'_R(r)
  Eigen::ArrayXd d2phi;        // φ''_R(r)
  Eigen::ArrayXd lap_phi;      // Δφ_R = φ'' + (d-1)φ'/r
  std::vector<Eigen::ArrayXd> grad_phi;  // ∂_kφ_R = φ'_R x_k/r
};

CutoffProfile build_cutoff_profile(const Grid& g, double R);

struct SmoothCutoff {
  Grid grid;
  double R = 0;
  Eigen::ArrayXd chi;  // 1 on |x| ≤ R/2, 0 on |x| ≥ R
};
SmoothCutoff make_smooth_cutoff(const Grid& g, double R);
SmoothCutoff unit_cutoff(const Grid& g);

// 2 Im ∫ ∇φ_R·∇u ū
double virial_quantity(const Field& u, const CutoffProfile& prof);

// d/dt M_φ = 8 G_μ(u) while u stays where φ_R = |x|²
constexpr double kVirialFactor = 8.0;

struct VirialReport {
  bool precondition_ok = true;
  double min_interior_mass = 1;  // smallest mass fraction inside |x| < R
  std::vector<double> times, rate, pohozaev;
  double max_rel_error = 0;  // max_j |dM/dt - 8G|/|8G|
  double mean_ratio_to_G = 0;  // average of (dM/dt)/G
};
VirialReport virial_rate_check(const TrajectoryRecord& traj, const CutoffProfile& prof, const PhysParams& p,
                               const WeightField& w);

struct CutoffIdentityErrors {
  double err1, err2;
  bool resolution_warning;
};
CutoffIdentityErrors cutoff_identity_check(const Field& f, const SmoothCutoff& chi);

struct GrowthFit {
  double exponent = 0, r2 = 0;
  bool pass = false;
  std::vector<double> T, accumulated;
};
GrowthFit spacetime_growth_fit(const TrajectoryRecord& traj, const CriticalExponents& ce);
GrowthFit spacetime_growth_fit(const TrajectoryRecord& traj, double rho_growth);

}  // namespace ibnls
