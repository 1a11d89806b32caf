#include "ibnls/classifier.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "ibnls/error.hpp"

namespace ibnls {

const char* to_string(AVerdict v) {
  switch (v) {
    case AVerdict::APlus: return "A_plus";
    case AVerdict::AMinus: return "A_minus";
    case AVerdict::AboveThreshold: return "above_threshold";
    case AVerdict::Boundary: return "boundary";
  }
  return "unknown";
}

const char* to_string(BVerdict v) {
  switch (v) {
    case BVerdict::BPlus: return "B_plus";
    case BVerdict::Outside: return "outside";
    case BVerdict::Boundary: return "boundary";
  }
  return "unknown";
}

double pohozaev_scale(const FunctionalSnapshot& s, const PhysParams& p) {
  return 2 * s.lap_l2 + p.mu * s.grad_l2 + pohozaev_weight(p) / (2 * (p.alpha + 2)) * s.potential;
}

AVerdict classify_A(const FunctionalSnapshot& s, double m, const PhysParams& p, const Tolerances& tol) {
  const double scale = pohozaev_scale(s, p);
  if (scale == 0 && s.mass == 0) return AVerdict::APlus;  // f = 0
  if (std::abs(s.action - m) <= tol.tol_S * m) return AVerdict::Boundary;
  if (s.action > m) return AVerdict::AboveThreshold;
  if (std::abs(s.pohozaev) <= tol.tol_G * scale) return AVerdict::Boundary;
  return s.pohozaev > 0 ? AVerdict::APlus : AVerdict::AMinus;
}

AVerdict classify_A(const Field& f, const PhysParams& p, const GroundState& gs, const Tolerances& tol) {
  require_same_grid(f.grid, gs.field.grid, "field and ground state grids differ");
  if (p.mu != gs.params.mu || p.omega != gs.omega)
    throw Error(ErrorKind::ParameterOutOfRange, "ground state solved at a different (mu, omega)");
  return classify_A(evaluate_functionals(f, p, gs.weight), gs.m_threshold, p, tol);
}

namespace {

// sign(x)·|x|·M^σ without overflowing for large σ
double times_mass_power(double x, double mass, double sigma) {
  if (x == 0 || mass == 0) return 0.0;
  return std::copysign(std::exp(std::log(std::abs(x)) + sigma * std::log(mass)), x);
}

PhysParams zero_mu(const PhysParams& p) {
  PhysParams q = p;
  q.mu = 0;
  return q;
}

}  // namespace

BMargins b_margins(const FunctionalSnapshot& f, const FunctionalSnapshot& q1, const PhysParams& p) {
  const double s = sigma_c(p);
  BMargins m;
  m.energy_lhs = times_mass_power(f.energy, f.mass, s);
  m.energy_rhs = times_mass_power(q1.energy, q1.mass, s);
  m.grad_lhs = times_mass_power(std::sqrt(f.lap_l2), std::sqrt(f.mass), s);
  m.grad_rhs = times_mass_power(std::sqrt(q1.lap_l2), std::sqrt(q1.mass), s);
  return m;
}

namespace {

BVerdict b_verdict(const BMargins& m, const Tolerances& tol) {
  bool band = std::abs(m.energy_lhs - m.energy_rhs) <= tol.tol_S * std::abs(m.energy_rhs) ||
              std::abs(m.grad_lhs - m.grad_rhs) <= tol.tol_G * m.grad_rhs;
  if (m.grad_lhs == 0 && m.energy_lhs == 0) return BVerdict::BPlus;
  if (band) return BVerdict::Boundary;
  return (m.energy_lhs < m.energy_rhs && m.grad_lhs < m.grad_rhs) ? BVerdict::BPlus : BVerdict::Outside;
}

void require_q1(const PhysParams& p, const GroundState& gs) {
  if (p.mu != 0 || gs.params.mu != 0) throw Error(ErrorKind::WrongGauge, "B+ is defined for mu = 0 only");
  if (gs.omega != 1.0) throw Error(ErrorKind::WrongGauge, "B+ needs the omega = 1 ground state");
}

}  // namespace

BVerdict classify_B(const Field& f, const PhysParams& p, const GroundState& gs_q1, const Tolerances& tol) {
  require_q1(p, gs_q1);
  require_same_grid(f.grid, gs_q1.field.grid, "field and ground state grids differ");
  auto fs = evaluate_functionals(f, zero_mu(p), gs_q1.weight);
  return b_verdict(b_margins(fs, gs_q1.snapshot, p), tol);
}

double threshold_gap(double omega, const FunctionalSnapshot& f, double m01, const PhysParams& p) {
  return std::pow(omega, subcritical_gap(p) / (4 * p.alpha)) * m01 - 0.5 * omega * f.mass - f.energy;
}

OmegaStar omega_star(const FunctionalSnapshot& f, double m01, const PhysParams& p) {
  if (f.mass == 0) throw Error(ErrorKind::ZeroField, "omega0 undefined for the zero field");
  const double gap = subcritical_gap(p);
  double w0 = std::pow(gap / (2 * p.alpha) * m01 / f.mass, 4 * p.alpha / (pohozaev_weight(p) - 8));
  return {w0, threshold_gap(w0, f, m01, p)};
}

OmegaStar omega_star(const Field& f, const PhysParams& p, const GroundState& gs_q1) {
  require_q1(p, gs_q1);
  return omega_star(evaluate_functionals(f, zero_mu(p), gs_q1.weight), gs_q1.m_threshold, p);
}

ThresholdReport threshold_report(const Field& f, const PhysParams& p, const GroundState& gs, const GroundState* gs_q1,
                                 const Tolerances& tol) {
  ThresholdReport r;
  auto fs = evaluate_functionals(f, p, gs.weight);
  r.S_val = fs.action;
  r.G_val = fs.pohozaev;
  r.m_val = gs.m_threshold;
  r.a_verdict = classify_A(f, p, gs, tol);
  if (gs_q1 && p.mu == 0) {
    r.b_verdict = classify_B(f, p, *gs_q1, tol);
    if (fs.mass > 0) {
      auto os = omega_star(fs, gs_q1->m_threshold, p);
      r.omega0 = os.omega0;
      r.F_omega0 = os.F_omega0;
      bool union_in = os.F_omega0 > 0 && fs.pohozaev >= 0;
      r.agreement = *r.b_verdict == BVerdict::Boundary || union_in == (*r.b_verdict == BVerdict::BPlus);
    }
  }
  return r;
}

std::string to_json(const ThresholdReport& r) {
  nlohmann::json j;
  j["S"] = r.S_val;
  j["G"] = r.G_val;
  j["m"] = r.m_val;
  j["a_verdict"] = to_string(r.a_verdict);
  j["b_verdict"] = r.b_verdict ? nlohmann::json(to_string(*r.b_verdict)) : nlohmann::json(nullptr);
  j["omega0"] = r.omega0;
  j["F_omega0"] = r.F_omega0;
  j["agreement"] = r.agreement;
  return j.dump(2);
}

AuditReport equivalence_audit(const std::vector<Field>& samples, const PhysParams& p, const GroundState& gs_q1,
                              const Tolerances& tol, bool direct) {
  require_q1(p, gs_q1);
  const PhysParams p0 = zero_mu(p);
  AuditReport rep;
  int agree = 0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const Field& f = samples[i];
    require_same_grid(f.grid, gs_q1.field.grid, "sample and ground state grids differ");
    AuditRow row;
    row.index = static_cast<int>(i);
    auto fs = evaluate_functionals(f, p0, gs_q1.weight);
    auto bm = b_margins(fs, gs_q1.snapshot, p);
    row.b = b_verdict(bm, tol);
    row.margin_E = (bm.energy_rhs - bm.energy_lhs) / std::abs(bm.energy_rhs);
    row.margin_D = (bm.grad_rhs - bm.grad_lhs) / bm.grad_rhs;

    auto os = omega_star(fs, gs_q1.m_threshold, p);
    row.omega0 = os.omega0;
    row.F_omega0 = os.F_omega0;
    PhysParams pw = p0;
    pw.omega = os.omega0;
    double m_w = std::pow(os.omega0, subcritical_gap(p) / (4 * p.alpha)) * gs_q1.m_threshold;
    FunctionalSnapshot fw = fs;
    fw.action = fs.energy + 0.5 * os.omega0 * fs.mass;
    if (direct) {
      try {
        GroundState gw = rescale_ground_state(gs_q1, os.omega0);
        m_w = gw.m_threshold;
        row.direct = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ResolutionLoss) throw;
      }
    }
    row.union_a = classify_A(fw, m_w, pw, tol);
    row.margin_S = (m_w - fw.action) / m_w;
    double sc = pohozaev_scale(fs, p0);
    row.margin_G = sc > 0 ? fs.pohozaev / sc : 0.0;

    bool union_in = row.union_a == AVerdict::APlus;
    bool b_in = row.b == BVerdict::BPlus;
    row.in_band = row.union_a == AVerdict::Boundary || row.b == BVerdict::Boundary;
    row.agree = union_in == b_in;
    if (row.agree) ++agree;
    if (!row.agree && !row.in_band) ++rep.disagreements_outside_band;
    rep.rows.push_back(row);
  }
  rep.agreement_fraction = samples.empty() ? 1.0 : static_cast<double>(agree) / samples.size();
  return rep;
}

void write_audit_csv(const std::string& path, const AuditReport& r) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path);
  os << "# ibnls audit v1\n";
  os << "index,b_verdict,union_a_verdict,omega0,F_omega0,margin_S,margin_G,margin_E,margin_D,direct,agree,in_band\n";
  char buf[512];
  for (const auto& w : r.rows) {
    std::snprintf(buf, sizeof buf, "%d,%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%d\n", w.index,
                  to_string(w.b), to_string(w.union_a), w.omega0, w.F_omega0, w.margin_S, w.margin_G, w.margin_E,
                  w.margin_D, w.direct, w.agree, w.in_band);
    os << buf;
  }
}

}  // namespace ibnls
