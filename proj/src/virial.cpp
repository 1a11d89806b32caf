#include "ibnls/virial.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <iostream>

#include "ibnls/error.hpp"

namespace ibnls {

namespace {

double psi(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }

using Gauss = boost::math::quadrature::gauss<double, 20>;

// cumulative tables of ∫₁^r ζ and ∫₁^r τζ on a uniform mesh of [1,2]
struct ZetaTables {
  static constexpr int M = 512;
  std::vector<double> I0, I1;
  ZetaTables() : I0(M + 1, 0.0), I1(M + 1, 0.0) {
    for (int i = 0; i < M; ++i) {
      double a = 1.0 + static_cast<double>(i) / M, b = 1.0 + static_cast<double>(i + 1) / M;
      I0[i + 1] = I0[i] + Gauss::integrate(Vartheta::zeta, a, b);
      I1[i + 1] = I1[i] + Gauss::integrate([](double t) { return t * Vartheta::zeta(t); }, a, b);
    }
  }
  // {∫₁^r ζ, ∫₁^r τζ} for r in [1,2]
  std::pair<double, double> at(double r) const {
    int i = std::min(M - 1, static_cast<int>((r - 1.0) * M));
    double a = 1.0 + static_cast<double>(i) / M;
    return {I0[i] + Gauss::integrate(Vartheta::zeta, a, r),
            I1[i] + Gauss::integrate([](double t) { return t * Vartheta::zeta(t); }, a, r)};
  }
};

const ZetaTables& tables() {
  static const ZetaTables t;
  return t;
}

}  // namespace

double smooth_step(double t) {
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  double a = psi(t), b = psi(1 - t);
  return a / (a + b);
}

double Vartheta::zeta(double r) { return 2.0 * smooth_step(2.0 - r); }

double Vartheta::d1(double r) {
  if (r <= 1) return 2 * r;
  return 2.0 + tables().at(std::min(r, 2.0)).first;
}

double Vartheta::value(double r) {
  // ϑ(r) = r∫₀^r ζ - ∫₀^r τζ, with ∫₀^1 ζ = 2 and ∫₀^1 τζ = 1
  if (r <= 1) return r * r;
  auto [i0, i1] = tables().at(std::min(r, 2.0));
  double z0 = 2.0 + i0, z1 = 1.0 + i1;
  if (r <= 2) return r * z0 - z1;
  return 2.0 * z0 - z1 + z0 * (r - 2.0);
}

CutoffProfile build_cutoff_profile(const Grid& g, double R) {
  if (!(R >= 4 * g.spacing()) || !(R <= 0.5 * g.half_width()))
    throw Error(ErrorKind::RadiusOutOfRange, "need 4h <= R <= L/2");
  CutoffProfile pr;
  pr.grid = g;
  pr.R = R;
  const auto& rad = g.radius();
  const Eigen::Index N = g.size();
  pr.phi.resize(N);
  pr.dphi.resize(N);
  pr.d2phi.resize(N);
  pr.lap_phi.resize(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    double r = rad[i], s = r / R;
    pr.phi[i] = R * R * Vartheta::value(s);
    pr.dphi[i] = R * Vartheta::d1(s);
    pr.d2phi[i] = Vartheta::zeta(s);
    double over_r = r > 0 ? pr.dphi[i] / r : 2.0;
    pr.lap_phi[i] = pr.d2phi[i] + (g.dim() - 1) * over_r;
  }
  for (int k = 0; k < g.dim(); ++k) {
    Eigen::ArrayXd x = g.coordinate(k);
    Eigen::ArrayXd gk(N);
    for (Eigen::Index i = 0; i < N; ++i) gk[i] = rad[i] > 0 ? pr.dphi[i] * x[i] / rad[i] : 0.0;
    pr.grad_phi.push_back(gk);
  }
  // the profile properties the estimates rely on
  constexpr double tol = 1e-8;
  for (Eigen::Index i = 0; i < N; ++i) {
    double r = rad[i];
    double over_r = r > 0 ? pr.dphi[i] / r : 2.0;
    bool ok = pr.d2phi[i] >= -tol && pr.d2phi[i] <= 2 + tol && over_r >= -tol && over_r <= 2 + tol &&
              2 * g.dim() - pr.lap_phi[i] >= -tol && (r > R || std::abs(pr.phi[i] - r * r) <= 1e-12 * std::max(1.0, r * r));
    if (!ok) throw Error(ErrorKind::ConfigInvalid, "cutoff profile invariant violated");
  }
  return pr;
}

SmoothCutoff make_smooth_cutoff(const Grid& g, double R) {
  if (!(R > 0)) throw Error(ErrorKind::RadiusOutOfRange, "cutoff radius must be positive");
  SmoothCutoff c{g, R, Eigen::ArrayXd(g.size())};
  const auto& rad = g.radius();
  for (Eigen::Index i = 0; i < g.size(); ++i) c.chi[i] = smooth_step(2.0 * (1.0 - rad[i] / R));
  return c;
}

SmoothCutoff unit_cutoff(const Grid& g) {
  return SmoothCutoff{g, std::numeric_limits<double>::infinity(), Eigen::ArrayXd::Ones(g.size())};
}

double virial_quantity(const Field& u, const CutoffProfile& prof) {
  require_same_grid(u.grid, prof.grid, "field and cutoff grids differ");
  Field v = to_physical(u);
  double acc = 0;
  for (int k = 0; k < v.grid.dim(); ++k) {
    Field dk = derivative(v, k);
    acc += (prof.grad_phi[k] * (dk.values * v.values.conjugate()).imag()).sum();
  }
  return 2.0 * v.grid.cell_volume() * acc;
}

VirialReport virial_rate_check(const TrajectoryRecord& traj, const CutoffProfile& prof, const PhysParams& p,
                               const WeightField& w) {
  if (traj.fields.size() < 3 || traj.fields.size() != traj.times.size())
    throw Error(ErrorKind::InsufficientSnapshots, "need at least 3 snapshots with stored fields");
  VirialReport rep;
  const auto inside = (prof.grid.radius() < prof.R).cast<double>();
  for (const auto& u : traj.fields) {
    Eigen::ArrayXd m = u.values.abs2();
    rep.min_interior_mass = std::min(rep.min_interior_mass, (inside * m).sum() / m.sum());
  }
  if (rep.min_interior_mass < 1 - 1e-8) {
    rep.precondition_ok = false;
    std::clog << "virial check skipped: mass leaks past R (interior fraction " << rep.min_interior_mass << ")\n";
    return rep;
  }
  std::vector<double> M;
  for (const auto& u : traj.fields) M.push_back(virial_quantity(u, prof));
  double ratio_sum = 0;
  for (size_t j = 1; j + 1 < M.size(); ++j) {
    double rate = (M[j + 1] - M[j - 1]) / (traj.times[j + 1] - traj.times[j - 1]);
    double G = evaluate_functionals(traj.fields[j], p, w).pohozaev;
    rep.times.push_back(traj.times[j]);
    rep.rate.push_back(rate);
    rep.pohozaev.push_back(G);
    rep.max_rel_error = std::max(rep.max_rel_error, std::abs(rate - kVirialFactor * G) / std::abs(kVirialFactor * G));
    ratio_sum += rate / G;
  }
  rep.mean_ratio_to_G = ratio_sum / rep.rate.size();
  return rep;
}

CutoffIdentityErrors cutoff_identity_check(const Field& f, const SmoothCutoff& c) {
  require_same_grid(f.grid, c.grid, "field and cutoff grids differ");
  const Grid& g = f.grid;
  const int d = g.dim();
  const double dv = g.cell_volume();
  Field u = to_physical(f);
  Field chi{g, c.chi.cast<cplx>(), Space::Physical};
  Field cu{g, c.chi.cast<cplx>() * u.values, Space::Physical};

  std::vector<Eigen::ArrayXcd> du, dchi;
  for (int k = 0; k < d; ++k) {
    du.push_back(derivative(u, k).values);
    dchi.push_back(derivative(chi, k).values);
  }
  Eigen::ArrayXd lapchi = laplacian(chi).values.real();
  Eigen::ArrayXcd lapu = laplacian(u).values;
  Eigen::ArrayXd x = c.chi;
  Eigen::ArrayXd grad_u2 = Eigen::ArrayXd::Zero(g.size()), grad_chi2 = grad_u2;
  for (int k = 0; k < d; ++k) {
    grad_u2 += du[k].abs2();
    grad_chi2 += dchi[k].real().square();
  }
  Eigen::ArrayXd u2 = u.values.abs2();

  // (iden-1)
  double lhs1 = 0;
  for (int k = 0; k < d; ++k) lhs1 += derivative(cu, k).values.abs2().sum();
  lhs1 *= dv;
  double rhs1 = dv * ((x * x * grad_u2).sum() - (x * lapchi * u2).sum());

  // (iden-2)
  double lhs2 = dv * laplacian(cu).values.abs2().sum();
  double cross = 0;  // Σ_{k,l} Re ∫ χ ∂_k f ∂²_{kl}χ ∂_l f̄
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      Eigen::ArrayXd dkl = derivative(Field{g, dchi[k], Space::Physical}, l).values.real();
      cross += (x * dkl * (du[k] * du[l].conjugate()).real()).sum();
    }
  Eigen::ArrayXcd gchi_gu = Eigen::ArrayXcd::Zero(g.size());
  for (int k = 0; k < d; ++k) gchi_gu += dchi[k].real() * du[k];
  double rhs2 = dv * ((x * x * lapu.abs2()).sum() + (lapchi.square() * u2).sum() - 4 * cross +
                      2 * (grad_chi2 * grad_u2).sum() + 2 * (x * lapchi * grad_u2).sum() +
                      2 * (x * lapchi * (lapu * u.values.conjugate()).real()).sum() +
                      4 * (lapchi * (gchi_gu * u.values.conjugate()).real()).sum());

  CutoffIdentityErrors e;
  auto rel = [](double a, double b) {
    double s = std::max(std::abs(a), std::abs(b));
    return s > 0 ? std::abs(a - b) / s : 0.0;
  };
  e.err1 = rel(lhs1, rhs1);
  e.err2 = rel(lhs2, rhs2);
  e.resolution_warning = false;
  if (std::isfinite(c.R)) {
    Field cs = transform(chi);
    const double cut = (2.0 / 3.0) * std::numbers::pi / g.spacing();
    double peak = cs.values.abs().maxCoeff(), tail = 0;
    for (Eigen::Index i = 0; i < cs.values.size(); ++i) {
      auto ix = g.unravel(i);
      for (int a = 0; a < d; ++a)
        if (std::abs(g.axis_wavenumber(ix[a])) > cut) tail = std::max(tail, std::abs(cs.values[i]));
    }
    e.resolution_warning = tail > 1e-10 * peak;
    if (e.resolution_warning) std::clog << "warning: cutoff under-resolved (spectral tail " << tail / peak << ")\n";
  }
  return e;
}

GrowthFit spacetime_growth_fit(const TrajectoryRecord& traj, double rho) {
  if (traj.times.size() < 2 || traj.times.back() - traj.times.front() < 10)
    throw Error(ErrorKind::SpanTooShort, "growth fit needs a span of at least 10 time units");
  GrowthFit fit;
  const double Tend = traj.times.back();
  auto interp = [&](double T) {
    auto it = std::lower_bound(traj.times.begin(), traj.times.end(), T);
    size_t j = static_cast<size_t>(it - traj.times.begin());
    if (j == 0) return traj.accumulated_potential[0];
    double t0 = traj.times[j - 1], t1 = traj.times[j];
    double a0 = traj.accumulated_potential[j - 1], a1 = traj.accumulated_potential[j];
    return a0 + (a1 - a0) * (T - t0) / (t1 - t0);
  };
  for (double T = Tend; T >= Tend / 8 * (1 - 1e-12) && T > traj.times.front(); T *= 0.5) {
    fit.T.insert(fit.T.begin(), T);
    fit.accumulated.insert(fit.accumulated.begin(), interp(T));
  }
  std::vector<double> lx, ly;
  for (size_t i = 0; i < fit.T.size(); ++i) {
    lx.push_back(std::log(fit.T[i]));
    ly.push_back(std::log(fit.accumulated[i]));
  }
  std::tie(fit.exponent, fit.r2) = loglog_fit(lx, ly);
  fit.pass = fit.exponent <= rho + 0.1;
  return fit;
}

GrowthFit spacetime_growth_fit(const TrajectoryRecord& traj, const CriticalExponents& ce) {
  return spacetime_growth_fit(traj, ce.rho_growth);
}

}  // namespace ibnls
