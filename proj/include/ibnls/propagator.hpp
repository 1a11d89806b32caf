#pragma once
#include <vector>

#include "ibnls/grid.hpp"

namespace ibnls {

// phase rates |ξ|⁴ + μ|ξ|² of U_μ(t) = e^{-it(Δ² - μΔ)}
struct LinearSymbol {
  Grid grid;
  double mu = 0;
  Eigen::ArrayXd table;
};

LinearSymbol make_symbol(const Grid& g, double mu);

// true when |t|·max ω exceeds 2π·1e12 and the per-mode phase loses digits
bool phase_accuracy_lost(double t, const LinearSymbol& sym);

// result stays in the input's space
Field linear_evolve(const Field& f, double t, const LinearSymbol& sym);
double group_property_check(const Field& f, double t1, double t2, const LinearSymbol& sym);

// fraction of mass with some |x_k| above frac·L
double boundary_mass(const Field& f, double frac = 0.9);

struct DecayFit {
  double slope = 0, r2 = 0;
  double max_boundary_mass = 0;
};
DecayFit dispersive_decay_fit(const Field& f, const std::vector<double>& t_grid, const LinearSymbol& sym);

// least squares y = a + s x; returns {s, r²}
std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ibnls
