#include "ibnls/propagator.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include "ibnls/error.hpp"

namespace ibnls {

LinearSymbol make_symbol(const Grid& g, double mu) {
  if (!(mu >= 0)) throw Error(ErrorKind::ParameterOutOfRange, "mu must be >= 0");
  const auto& k2 = g.xi2();
  return LinearSymbol{g, mu, k2 * k2 + mu * k2};
}

bool phase_accuracy_lost(double t, const LinearSymbol& sym) {
  return std::abs(t) * sym.table.maxCoeff() > 2 * std::numbers::pi * 1e12;
}

Field linear_evolve(const Field& f, double t, const LinearSymbol& sym) {
  require_same_grid(f.grid, sym.grid, "symbol and field grids differ");
  if (t == 0) return f;
  if (phase_accuracy_lost(t, sym))
    std::clog << "warning: linear phase t*omega(xi) beyond 2pi*1e12, high modes lose phase accuracy\n";
  Eigen::ArrayXcd m(sym.table.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) m[i] = std::polar(1.0, -t * sym.table[i]);
  return apply_multiplier(f, m);
}

double group_property_check(const Field& f, double t1, double t2, const LinearSymbol& sym) {
  Field a = linear_evolve(f, t1 + t2, sym);
  Field b = linear_evolve(linear_evolve(f, t2, sym), t1, sym);
  a.values -= b.values;
  return l2_norm(a);
}

double boundary_mass(const Field& f, double frac) {
  Field u = to_physical(f);
  const Grid& g = u.grid;
  const double cut = frac * g.half_width();
  Eigen::ArrayXd p = u.values.abs2();
  double tot = p.sum(), edge = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    auto ix = g.unravel(i);
    for (int a = 0; a < g.dim(); ++a)
      if (std::abs(g.axis_coord(ix[a])) > cut) {
        edge += p[i];
        break;
      }
  }
  return tot > 0 ? edge / tot : 0.0;
}

std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i], sy += y[i], sxx += x[i] * x[i], sxy += x[i] * y[i], syy += y[i] * y[i];
  }
  double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  double slope = cxy / vx;
  double r2 = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
  return {slope, r2};
}

DecayFit dispersive_decay_fit(const Field& f, const std::vector<double>& t_grid, const LinearSymbol& sym) {
  if (t_grid.size() < 2) throw Error(ErrorKind::ConfigInvalid, "decay fit needs at least two times");
  if (boundary_mass(f) > 1e-10)
    throw Error(ErrorKind::ConfigInvalid, "initial data is not localized (boundary mass above 1e-10)");
  Field s = to_spectral(f);
  DecayFit fit;
  std::vector<double> lx, ly;
  for (double t : t_grid) {
    if (!(t > 0)) throw Error(ErrorKind::ConfigInvalid, "decay times must be positive");
    Field u = inverse_transform(linear_evolve(s, t, sym));
    double bm = boundary_mass(u);
    fit.max_boundary_mass = std::max(fit.max_boundary_mass, bm);
    if (bm > 1e-6)
      throw Error(ErrorKind::WraparoundDetected,
                  "boundary mass " + std::to_string(bm) + " at t = " + std::to_string(t));
    lx.push_back(std::log(t));
    ly.push_back(std::log(u.values.abs().maxCoeff()));
  }
  std::tie(fit.slope, fit.r2) = loglog_fit(lx, ly);
  return fit;
}

}  // namespace ibnls
