#pragma once
#include <limits>
#include <utility>
#include <vector>

#include "ibnls/grid.hpp"

namespace ibnls {

// f* is piecewise constant: value levels[i] on [i·cell, (i+1)·cell)
struct RearrangementProfile {
  Eigen::ArrayXd levels;  // |f| sorted descending
  double cell = 0;        // measure carried by each sample (h^d)
  // distinct levels λ ascending with d_f(λ) = |{|f| > λ}|
  std::vector<std::pair<double, double>> measures;
  // f*(s) on a log-spaced s-grid between cell and the total measure
  std::vector<std::pair<double, double>> samples;

  double operator()(double s) const;  // f*(s)
  double total_measure() const { return cell * static_cast<double>(levels.size()); }
};

RearrangementProfile decreasing_rearrangement(const Field& f);

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ‖f‖_{L^{r,ρ}} = ((ρ/r)∫(s^{1/r}f*(s))^ρ ds/s)^{1/ρ}, ρ = ∞ as sup_s s^{1/r}f*(s)
double lorentz_norm(const Field& f, double r, double rho);
double lorentz_norm(const RearrangementProfile& prof, double r, double rho);

// running (Σ_{i≤j} Δt_i ‖u(t_i)‖^k_{L^{r,2}})^{1/k}, left endpoints; the last
// interval closes at t_end
std::vector<double> lk_lr2_running(const std::vector<std::pair<double, Field>>& series, double k, double r,
                                   double t_end);
double lk_lr2_accumulate(const std::vector<std::pair<double, Field>>& series, double k, double r, double t_end);

}  // namespace ibnls
