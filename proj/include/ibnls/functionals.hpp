#pragma once
#include "ibnls/grid.hpp"
#include "ibnls/params.hpp"

namespace ibnls {

struct FunctionalSnapshot {
  double mass = 0, energy = 0, action = 0, pohozaev = 0, potential = 0;
  double grad_l2 = 0, lap_l2 = 0;  // squared norms ‖∇f‖², ‖Δf‖²
};

// ∫ w |f|^{α+2}
double potential(const Field& f, double alpha, const WeightField& w);

FunctionalSnapshot evaluate_functionals(const Field& f, const PhysParams& p, const WeightField& w);
// functionals of f_λ(x) = λ^{d/2} f(λx) from the λ = 1 integrals
FunctionalSnapshot scale_snapshot(const FunctionalSnapshot& s, const PhysParams& p, double lambda);

double weinstein(const Field& f, const PhysParams& p, const WeightField& w);
double gn_defect(const Field& f, double c_opt, const PhysParams& p, const WeightField& w);

// λ^{d/2} f(λx) by separable trigonometric interpolation
Field mass_critical_rescale(const Field& f, double lambda);
// general dilation c·f(ζx), same interpolation and resolution checks
Field dilate(const Field& f, double zeta, double amplitude);

double find_lambda0(const Field& f, const PhysParams& p, const WeightField& w);
double find_lambda0(const FunctionalSnapshot& s, const PhysParams& p);

}  // namespace ibnls
