#pragma once
#include <string>

namespace ibnls {

// i u_t - Δ²u + μΔu = -κ|x|^{-b}|u|^α u
struct PhysParams {
  int d = 1;
  double mu = 0.0;
  double b = 0.25;
  double alpha = 8.0;
  int kappa = 1;  // +1 focusing, -1 defocusing
  double omega = 1.0;
};

enum class Mode { Variational, Evolution };

enum class RegimeTag { MassSubcritical, MassCritical, Intercritical, EnergyCritical, Supercritical };

struct Regime {
  RegimeTag tag;
  // true when the scattering result needs radial data (d ≤ 3, or d = 4 with b ≤ 1)
  bool radial_required;
};

struct CriticalExponents {
  double gamma_c, sigma_c;
  double q, r, k, m;
  double rho_growth;
};

const char* to_string(RegimeTag t);

double gamma_c(const PhysParams& p);
// (2-γ_c)/γ_c, written without the subtraction so it stays accurate near γ_c = 0
double sigma_c(const PhysParams& p);
// dα + 2b, and 8 - 2b - (d-4)α: the two combinations that appear everywhere
inline double pohozaev_weight(const PhysParams& p) { return p.d * p.alpha + 2.0 * p.b; }
inline double subcritical_gap(const PhysParams& p) { return 8.0 - 2.0 * p.b - (p.d - 4) * p.alpha; }

Regime validate_params(const PhysParams& p, Mode mode);
CriticalExponents critical_exponents(const PhysParams& p, bool radial);
bool is_biharmonic_admissible(double q, double r, int d);

}  // namespace ibnls
