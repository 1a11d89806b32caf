#include "ibnls/groundstate.hpp"

#include <cmath>

#include "ibnls/error.hpp"

namespace ibnls {

namespace {

Eigen::ArrayXd inverse_symbol(const Grid& g, double mu, double omega) {
  const auto& k2 = g.xi2();
  return 1.0 / (k2 * k2 + mu * k2 + omega);
}

Eigen::ArrayXcd nonlinearity(const Eigen::ArrayXcd& q, double alpha, const WeightField& w) {
  return w.values * q.abs2().pow(0.5 * alpha) * q;
}

}  // namespace

double elliptic_residual(const Field& q, const PhysParams& p, const WeightField& w) {
  Field u = to_physical(q);
  Field nl{u.grid, nonlinearity(u.values, p.alpha, w), Space::Physical};
  Field kn = apply_multiplier(nl, inverse_symbol(u.grid, p.mu, p.omega));
  kn.values -= u.values;
  double nq = l2_norm(u);
  return nq > 0 ? l2_norm(kn) / nq : 0.0;
}

GroundState petviashvili_solve(const PhysParams& p, const WeightField& w, const Field& init, double tol,
                               int max_iter) {
  validate_params(p, Mode::Variational);
  if (!(p.alpha > (8.0 - 2.0 * p.b) / p.d))
    throw Error(ErrorKind::ParameterOutOfRange, "ground-state solver needs alpha > (8-2b)/d");
  require_same_grid(init.grid, w.grid, "initial guess and weight grids differ");
  const Grid& g = init.grid;
  const Eigen::ArrayXd K = inverse_symbol(g, p.mu, p.omega);
  const Eigen::ArrayXd Kinv = 1.0 / K;
  const double s_exp = (p.alpha + 1) / p.alpha;

  Field q = to_physical(init);
  q.values = q.values.real().cast<cplx>();
  if (l2_norm(q) == 0) throw Error(ErrorKind::DivergedToZero, "initial guess is zero");

  GroundState gs;
  gs.params = p;
  gs.weight = w;
  gs.omega = p.omega;
  gs.tolerance = tol;
  for (int it = 1; it <= max_iter; ++it) {
    Field qs = transform(q);
    Field nl = transform(Field{g, nonlinearity(q.values, p.alpha, w), Space::Physical});
    double num = (Kinv * qs.values.abs2()).sum();
    double den = (qs.values.conjugate() * nl.values).real().sum();
    if (!(den > 0) || !std::isfinite(num / den) || num / den < 1e-300)
      throw Error(ErrorKind::DivergedToZero, "stabilizing ratio collapsed at iteration " + std::to_string(it));
    double gamma = num / den;
    Field next = inverse_transform(Field{g, std::pow(gamma, s_exp) * K * nl.values, Space::Spectral});
    next.values = next.values.real().cast<cplx>();
    double nq = l2_norm(next);
    if (!(nq > 1e-150) || !std::isfinite(nq))
      throw Error(ErrorKind::DivergedToZero, "iterate vanished at iteration " + std::to_string(it));
    Field diff = next;
    diff.values -= q.values;
    double change = l2_norm(diff) / nq;
    q = std::move(next);
    gs.iterations = it;
    if (change <= tol) {
      gs.residual = elliptic_residual(q, p, w);
      if (gs.residual <= tol) {
        gs.converged = true;
        break;
      }
    }
  }
  if (!gs.converged) {
    gs.residual = elliptic_residual(q, p, w);
    throw Error(ErrorKind::NoConvergence, "Petviashvili did not converge in " + std::to_string(max_iter) +
                                              " iterations (residual " + std::to_string(gs.residual) + ")");
  }
  // gauge: real and nonnegative at the peak
  Eigen::Index imax;
  q.values.abs().maxCoeff(&imax);
  if (q.values[imax].real() < 0) q.values = -q.values;
  gs.field = q;
  gs.snapshot = evaluate_functionals(q, p, w);
  gs.m_threshold = gs.snapshot.action;
  gs.c_opt = weinstein(q, p, w);
  return gs;
}

PohozaevRatios pohozaev_check(const GroundState& gs, const PhysParams& p) {
  if (!gs.converged) throw Error(ErrorKind::NotConverged, "Pohozaev check on an unconverged state");
  const auto& s = gs.snapshot;
  const double dab = pohozaev_weight(p);
  if (p.mu == 0) {
    return {s.lap_l2 / (dab / (4 * (p.alpha + 2)) * s.potential),
            s.lap_l2 / (dab / subcritical_gap(p) * s.mass)};
  }
  return {(s.lap_l2 + p.mu * s.grad_l2 + p.omega * s.mass) / s.potential,
          1.0 + s.pohozaev / (2 * s.lap_l2 + p.mu * s.grad_l2)};
}

double sharp_constant(const GroundState& gs, const PhysParams& p) {
  if (p.mu != 0 || gs.params.mu != 0 || gs.omega != 1.0)
    throw Error(ErrorKind::WrongGauge, "sharp constant needs the mu = 0, omega = 1 ground state");
  return weinstein(gs.field, p, gs.weight);
}

double sharp_constant_closed_form(const GroundState& gs, const PhysParams& p) {
  if (p.mu != 0 || gs.omega != 1.0) throw Error(ErrorKind::WrongGauge, "closed form needs mu = 0, omega = 1");
  const double dab = pohozaev_weight(p);
  double lap = std::sqrt(gs.snapshot.lap_l2), l2 = std::sqrt(gs.snapshot.mass);
  double log_lambda0 = std::log(lap) + sigma_c(p) * std::log(l2);
  return 4 * (p.alpha + 2) / dab * std::exp(-(dab - 8) / 4 * log_lambda0);
}

GroundState rescale_ground_state(const GroundState& q1, double omega) {
  const PhysParams& p1 = q1.params;
  if (p1.mu != 0 || q1.omega != 1.0) throw Error(ErrorKind::WrongGauge, "rescaling needs the mu = 0, omega = 1 state");
  if (!(omega > 0)) throw Error(ErrorKind::ParameterOutOfRange, "omega must be positive");
  GroundState out = q1;
  out.params.omega = omega;
  out.omega = omega;
  if (omega == 1.0) return out;
  double zeta = std::pow(omega, 0.25);
  out.field = dilate(q1.field, zeta, std::pow(omega, (4 - p1.b) / (4 * p1.alpha)));
  out.residual = elliptic_residual(out.field, out.params, out.weight);
  // a rescaled profile that no longer solves the equation has outrun the grid
  if (!(out.residual <= 1e-5))
    throw Error(ErrorKind::ResolutionLoss, "rescaled ground state residual " + std::to_string(out.residual) +
                                               " above 1e-5 at omega = " + std::to_string(omega));
  out.snapshot = evaluate_functionals(out.field, out.params, out.weight);
  out.m_threshold = out.snapshot.action;
  out.c_opt = weinstein(out.field, out.params, out.weight);
  out.iterations = 0;
  out.converged = true;
  return out;
}

}  // namespace ibnls
