#pragma once
#include "ibnls/functionals.hpp"

namespace ibnls {

struct GroundState {
  Field field;
  PhysParams params;
  WeightField weight;
  double omega = 1;
  double residual = 0;  // ‖Q - K(w|Q|^αQ)‖/‖Q‖, K = (Δ² - μΔ + ω)^{-1}
  double tolerance = 0;
  bool converged = false;
  FunctionalSnapshot snapshot;
  double m_threshold = 0;  // S_{μ,ω}(Q)
  double c_opt = 0;        // W(Q)
  int iterations = 0;
};

GroundState petviashvili_solve(const PhysParams& p, const WeightField& w, const Field& init, double tol = 1e-10,
                               int max_iter = 2000);

struct PohozaevRatios {
  double ratio1, ratio2;
};
// μ = 0: the two ratios of the Pohozaev identities (both 1 at a solution).
// μ > 0: ratio1 = (‖ΔQ‖² + μ‖∇Q‖² + ω‖Q‖²)/P(Q), ratio2 = 1 + G(Q)/(2‖ΔQ‖² + μ‖∇Q‖²)
PohozaevRatios pohozaev_check(const GroundState& gs, const PhysParams& p);

double sharp_constant(const GroundState& gs, const PhysParams& p);
// closed form (4(α+2)/(dα+2b))·(‖ΔQ₁‖‖Q₁‖^{σ_c})^{-(dα-8+2b)/4}
double sharp_constant_closed_form(const GroundState& gs, const PhysParams& p);

// Q_ω(x) = ω^{(4-b)/(4α)} Q₁(ω^{1/4}x)
GroundState rescale_ground_state(const GroundState& q1, double omega);
// preconditioned residual of the elliptic equation at frequency ω
double elliptic_residual(const Field& q, const PhysParams& p, const WeightField& w);

}  // namespace ibnls
