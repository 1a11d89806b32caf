#include "ibnls/functionals.hpp"

#include <cmath>
#include <numbers>

#include "ibnls/error.hpp"

namespace ibnls {

double potential(const Field& f, double alpha, const WeightField& w) {
  require_same_grid(f.grid, w.grid, "weight and field grids differ");
  Field u = to_physical(f);
  return f.grid.cell_volume() * (w.values * u.values.abs2().pow(0.5 * (alpha + 2))).sum();
}

FunctionalSnapshot evaluate_functionals(const Field& f, const PhysParams& p, const WeightField& w) {
  require_same_grid(f.grid, w.grid, "weight and field grids differ");
  if (std::abs(w.b - p.b) > 1e-14 * p.b)
    throw Error(ErrorKind::ParameterOutOfRange, "weight exponent differs from params.b");
  Field s = to_spectral(f);
  const double dv = f.grid.cell_volume();
  const auto& k2 = f.grid.xi2();
  Eigen::ArrayXd pw = s.values.abs2();
  FunctionalSnapshot out;
  out.mass = dv * pw.sum();
  out.grad_l2 = dv * (k2 * pw).sum();
  out.lap_l2 = dv * (k2 * k2 * pw).sum();
  out.potential = potential(f.space == Space::Physical ? f : inverse_transform(s), p.alpha, w);
  const double a2 = p.alpha + 2;
  out.energy = 0.5 * out.lap_l2 + 0.5 * p.mu * out.grad_l2 - p.kappa * out.potential / a2;
  out.action = out.energy + 0.5 * p.omega * out.mass;
  out.pohozaev = 2 * out.lap_l2 + p.mu * out.grad_l2 - p.kappa * pohozaev_weight(p) / (2 * a2) * out.potential;
  return out;
}

FunctionalSnapshot scale_snapshot(const FunctionalSnapshot& s, const PhysParams& p, double lambda) {
  FunctionalSnapshot o;
  const double l2 = lambda * lambda;
  o.mass = s.mass;
  o.grad_l2 = l2 * s.grad_l2;
  o.lap_l2 = l2 * l2 * s.lap_l2;
  o.potential = std::pow(lambda, 0.5 * pohozaev_weight(p)) * s.potential;
  const double a2 = p.alpha + 2;
  o.energy = 0.5 * o.lap_l2 + 0.5 * p.mu * o.grad_l2 - p.kappa * o.potential / a2;
  o.action = o.energy + 0.5 * p.omega * o.mass;
  o.pohozaev = 2 * o.lap_l2 + p.mu * o.grad_l2 - p.kappa * pohozaev_weight(p) / (2 * a2) * o.potential;
  return o;
}

double weinstein(const Field& f, const PhysParams& p, const WeightField& w) {
  auto n = sobolev_norms(f);
  if (n.l2 == 0 || n.h2dot == 0) throw Error(ErrorKind::ZeroField, "Weinstein functional of a zero (or constant) field");
  double P = potential(f, p.alpha, w);
  return P / (std::pow(n.h2dot, pohozaev_weight(p) / 4) * std::pow(n.l2, subcritical_gap(p) / 4));
}

double gn_defect(const Field& f, double c_opt, const PhysParams& p, const WeightField& w) {
  auto n = sobolev_norms(f);
  if (n.l2 == 0) return 0.0;
  double P = potential(f, p.alpha, w);
  return c_opt * std::pow(n.h2dot, pohozaev_weight(p) / 4) * std::pow(n.l2, subcritical_gap(p) / 4) - P;
}

namespace {

using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// E[j,k] = e^{iξ_k(ζx_j - x_0)}/√n evaluates a unitary 1D spectrum at the dilated
// nodes; the Nyquist mode enters as a cosine so real data stays real
CMat evaluation_matrix(const Grid& g, double zeta) {
  const int n = g.n();
  const double x0 = g.axis_coord(0), norm = 1.0 / std::sqrt(static_cast<double>(n));
  const double dk = std::numbers::pi / g.half_width();
  CMat E(n, n);
  for (int j = 0; j < n; ++j) {
    const double y = zeta * g.axis_coord(j) - x0;
    // nodes mapped outside the box see zero, not the periodic image
    if (std::abs(zeta * g.axis_coord(j)) > g.half_width()) {
      E.row(j).setZero();
      continue;
    }
    const cplx step = std::polar(1.0, dk * y);
    // phasor recurrence, reseeded every 64 modes to bound rounding growth
    cplx up = 1.0, down = 1.0;
    for (int k = 0; k < n / 2; ++k) {
      if (k % 64 == 0) up = std::polar(1.0, k * dk * y), down = std::conj(up);
      E(j, k) = up * norm;
      if (k > 0) E(j, n - k) = down * norm;
      up *= step;
      down *= std::conj(step);
    }
    E(j, n / 2) = std::cos(0.5 * n * dk * y) * norm;
  }
  return E;
}

double tail_fraction_spectral(const Field& f, double cutoff) {
  Field s = to_spectral(f);
  Eigen::ArrayXd p = s.values.abs2();
  double tot = p.sum(), tail = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    auto ix = f.grid.unravel(i);
    for (int a = 0; a < f.grid.dim(); ++a)
      if (std::abs(f.grid.axis_wavenumber(ix[a])) > cutoff) {
        tail += p[i];
        break;
      }
  }
  return tot > 0 ? tail / tot : 0.0;
}

double tail_fraction_physical(const Field& f, double radius) {
  Field u = to_physical(f);
  Eigen::ArrayXd p = u.values.abs2();
  double tot = p.sum(), tail = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    auto ix = f.grid.unravel(i);
    for (int a = 0; a < f.grid.dim(); ++a)
      if (std::abs(f.grid.axis_coord(ix[a])) > radius) {
        tail += p[i];
        break;
      }
  }
  return tot > 0 ? tail / tot : 0.0;
}

}  // namespace

Field dilate(const Field& f, double zeta, double amplitude) {
  if (!(zeta > 0)) throw Error(ErrorKind::ParameterOutOfRange, "dilation factor must be positive");
  Field u = to_physical(f);
  const Grid& g = u.grid;
  if (zeta == 1.0) {
    u.values *= amplitude;
    return u;
  }
  constexpr double kTail = 1e-10;
  const double kmax = std::numbers::pi / g.spacing();
  if (zeta > 1 && tail_fraction_spectral(u, kmax / zeta) > kTail)
    throw Error(ErrorKind::ResolutionLoss, "compression pushes spectral content past the grid cutoff");
  if (zeta < 1 && tail_fraction_physical(u, zeta * g.half_width()) > kTail)
    throw Error(ErrorKind::ResolutionLoss, "dilation pushes the support beyond the box");
  const CMat A = evaluation_matrix(g, zeta);
  const int n = g.n();
  Eigen::ArrayXcd v = transform(u).values;
  if (g.dim() == 1) {
    v = (A * v.matrix()).array();
  } else if (g.dim() == 2) {
    Eigen::Map<RowMat> M(v.data(), n, n);
    RowMat t = A * M;
    M = t * A.transpose();
  } else {
    Eigen::Map<RowMat> M0(v.data(), n, n * n);  // axis 0
    RowMat t0 = A * M0;
    M0 = t0;
    Eigen::Map<RowMat> M2(v.data(), n * n, n);  // axis 2
    RowMat t2 = M2 * A.transpose();
    M2 = t2;
    for (int i = 0; i < n; ++i) {  // axis 1, slice by slice
      Eigen::Map<RowMat> S(v.data() + static_cast<Eigen::Index>(i) * n * n, n, n);
      RowMat ts = A * S;
      S = ts;
    }
  }
  Field out{g, amplitude * v, Space::Physical};
  double m0 = std::pow(amplitude, 2) * std::pow(zeta, -g.dim()) * std::pow(l2_norm(u), 2);
  double m1 = std::pow(l2_norm(out), 2);
  if (m0 > 0 && std::abs(m1 - m0) > 1e-6 * m0)
    throw Error(ErrorKind::ResolutionLoss, "rescaled field lost mass beyond interpolation tolerance");
  return out;
}

Field mass_critical_rescale(const Field& f, double lambda) {
  if (!(lambda > 0)) throw Error(ErrorKind::ParameterOutOfRange, "lambda must be positive");
  return dilate(f, lambda, std::pow(lambda, 0.5 * f.grid.dim()));
}

double find_lambda0(const FunctionalSnapshot& s, const PhysParams& p) {
  if (s.mass == 0) throw Error(ErrorKind::ZeroField, "lambda0 of a zero field");
  const double C = p.kappa * pohozaev_weight(p) / (2 * (p.alpha + 2)) * s.potential;
  if (!(C > 0)) throw Error(ErrorKind::NoBracket, "G(f_lambda) never changes sign (weighted potential term is not focusing)");
  const double delta = 0.5 * (pohozaev_weight(p) - 8);
  const double a = 2 * s.lap_l2, B = p.mu * s.grad_l2;
  auto phi = [&](double l) { return a + B / (l * l) - C * std::pow(l, delta); };
  double lo = 1, hi = 1;
  int guard = 0;
  while (phi(lo) <= 0 && guard++ < 200) lo *= 0.5;
  guard = 0;
  while (phi(hi) >= 0 && guard++ < 200) hi *= 2;
  if (phi(lo) <= 0 || phi(hi) >= 0) throw Error(ErrorKind::NoBracket, "no sign change of G(f_lambda) found");
  for (int it = 0; it < 200 && hi - lo > 1e-10 * std::max(1.0, lo); ++it) {
    double mid = 0.5 * (lo + hi);
    (phi(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double find_lambda0(const Field& f, const PhysParams& p, const WeightField& w) {
  return find_lambda0(evaluate_functionals(f, p, w), p);
}

}  // namespace ibnls
