#pragma once
#include <optional>
#include <string>
#include <vector>

#include "ibnls/groundstate.hpp"

namespace ibnls {

enum class AVerdict { APlus, AMinus, AboveThreshold, Boundary };
enum class BVerdict { BPlus, Outside, Boundary };
const char* to_string(AVerdict v);
const char* to_string(BVerdict v);

struct Tolerances {
  double tol_S = 1e-6;
  double tol_G = 1e-6;
};

// 2‖Δf‖² + μ‖∇f‖² + (dα+2b)/(2(α+2))·P: the size G is compared against
double pohozaev_scale(const FunctionalSnapshot& s, const PhysParams& p);

AVerdict classify_A(const FunctionalSnapshot& s, double m, const PhysParams& p, const Tolerances& tol = {});
AVerdict classify_A(const Field& f, const PhysParams& p, const GroundState& gs, const Tolerances& tol = {});

struct BMargins {
  double energy_lhs, energy_rhs;  // E₀(f)M(f)^σ vs E₀(Q₁)M(Q₁)^σ
  double grad_lhs, grad_rhs;      // ‖Δf‖‖f‖^σ vs ‖ΔQ₁‖‖Q₁‖^σ
};
BMargins b_margins(const FunctionalSnapshot& f, const FunctionalSnapshot& q1, const PhysParams& p);
BVerdict classify_B(const Field& f, const PhysParams& p, const GroundState& gs_q1, const Tolerances& tol = {});

struct OmegaStar {
  double omega0, F_omega0;
};
// F(ω) = ω^{(8-2b-(d-4)α)/(4α)}·S_{0,1}(Q₁) - (ω/2)M(f) - E₀(f)
double threshold_gap(double omega, const FunctionalSnapshot& f, double m01, const PhysParams& p);
OmegaStar omega_star(const FunctionalSnapshot& f, double m01, const PhysParams& p);
OmegaStar omega_star(const Field& f, const PhysParams& p, const GroundState& gs_q1);

struct ThresholdReport {
  double S_val = 0, G_val = 0, m_val = 0;
  AVerdict a_verdict = AVerdict::Boundary;
  std::optional<BVerdict> b_verdict;
  double omega0 = 0, F_omega0 = 0;
  bool agreement = true;
};
ThresholdReport threshold_report(const Field& f, const PhysParams& p, const GroundState& gs,
                                 const GroundState* gs_q1 = nullptr, const Tolerances& tol = {});
std::string to_json(const ThresholdReport& r);

struct AuditRow {
  int index = 0;
  BVerdict b = BVerdict::Boundary;
  AVerdict union_a = AVerdict::Boundary;  // verdict in 𝒜_{0,ω₀}
  double omega0 = 0, F_omega0 = 0;
  double margin_S = 0, margin_G = 0;  // relative distances to the 𝒜 boundaries
  double margin_E = 0, margin_D = 0;  // relative distances to the ℬ⁺ boundaries
  bool direct = false;                // ground state actually regridded to ω₀
  bool agree = true, in_band = false;
};
struct AuditReport {
  std::vector<AuditRow> rows;
  double agreement_fraction = 1;
  int disagreements_outside_band = 0;
};

// ⋃_ω 𝒜⁺_{0,ω} vs ℬ⁺. With direct = true the ground state is regridded to each
// ω₀ when resolvable; otherwise m_{0,ω₀} comes from the scaling law.
AuditReport equivalence_audit(const std::vector<Field>& samples, const PhysParams& p, const GroundState& gs_q1,
                              const Tolerances& tol = {}, bool direct = false);
void write_audit_csv(const std::string& path, const AuditReport& r);

}  // namespace ibnls
