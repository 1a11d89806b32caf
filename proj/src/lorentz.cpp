#include "ibnls/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ibnls/error.hpp"

namespace ibnls {

double RearrangementProfile::operator()(double s) const {
  if (s < 0) return levels.size() ? levels[0] : 0.0;
  auto i = static_cast<Eigen::Index>(std::floor(s / cell));
  return i < levels.size() ? levels[i] : 0.0;
}

RearrangementProfile decreasing_rearrangement(const Field& f) {
  if (f.space != Space::Physical) throw Error(ErrorKind::SpaceMismatch, "rearrangement needs a physical field");
  RearrangementProfile p;
  p.cell = f.grid.cell_volume();
  p.levels = f.values.abs();
  std::sort(p.levels.data(), p.levels.data() + p.levels.size(), std::greater<>());
  const Eigen::Index N = p.levels.size();
  // walk from the smallest level up; d_f(λ) counts samples strictly above λ
  for (Eigen::Index i = N - 1; i >= 0; --i) {
    if (!p.measures.empty() && p.measures.back().first == p.levels[i]) continue;
    Eigen::Index above = i;
    while (above > 0 && p.levels[above - 1] == p.levels[i]) --above;
    p.measures.emplace_back(p.levels[i], p.cell * static_cast<double>(above));
  }
  const int K = 64;
  for (int k = 0; k < K && N > 0; ++k) {
    double s = p.cell * std::pow(static_cast<double>(N), static_cast<double>(k) / K);
    p.samples.emplace_back(s, p(s));
  }
  return p;
}

double lorentz_norm(const RearrangementProfile& prof, double r, double rho) {
  if (!(r > 1)) throw Error(ErrorKind::InvalidExponent, "Lorentz exponent r must exceed 1");
  if (!(rho >= 1)) throw Error(ErrorKind::InvalidExponent, "Lorentz exponent rho must be >= 1");
  const Eigen::Index N = prof.levels.size();
  if (N == 0 || prof.levels[0] == 0) return 0.0;
  const double vmax = prof.levels[0];
  const double S = prof.total_measure();
  if (std::isinf(rho)) {
    double best = 0;
    for (Eigen::Index i = 0; i < N; ++i)
      best = std::max(best, std::pow(prof.cell * (i + 1), 1.0 / r) * prof.levels[i]);
    return best;
  }
  // Σ v_i^ρ (s_i^{ρ/r} - s_{i-1}^{ρ/r}), scaled by vmax and the total measure
  const double p = rho / r;
  double acc = 0;
  for (Eigen::Index i = 0; i < N; ++i) {
    double v = prof.levels[i] / vmax;
    if (v == 0) break;
    double hi = static_cast<double>(i + 1) / N;
    double dt = i == 0 ? std::pow(hi, p)
                       : -std::pow(hi, p) * std::expm1(p * std::log(static_cast<double>(i) / (i + 1)));
    acc += std::pow(v, rho) * dt;
  }
  return vmax * std::pow(S, 1.0 / r) * std::pow(acc, 1.0 / rho);
}

double lorentz_norm(const Field& f, double r, double rho) {
  if (!(r > 1)) throw Error(ErrorKind::InvalidExponent, "Lorentz exponent r must exceed 1");
  return lorentz_norm(decreasing_rearrangement(f), r, rho);
}

std::vector<double> lk_lr2_running(const std::vector<std::pair<double, Field>>& series, double k, double r,
                                   double t_end) {
  if (series.empty()) throw Error(ErrorKind::EmptySeries, "no snapshots to accumulate");
  for (size_t j = 1; j < series.size(); ++j)
    if (!(series[j].first > series[j - 1].first))
      throw Error(ErrorKind::ConfigInvalid, "snapshot times must increase strictly");
  if (!(t_end > series.back().first)) throw Error(ErrorKind::ConfigInvalid, "t_end must follow the last snapshot");
  std::vector<double> out;
  double acc = 0;
  for (size_t j = 0; j < series.size(); ++j) {
    double dt = (j + 1 < series.size() ? series[j + 1].first : t_end) - series[j].first;
    acc += dt * std::pow(lorentz_norm(series[j].second, r, 2.0), k);
    out.push_back(std::pow(acc, 1.0 / k));
  }
  return out;
}

double lk_lr2_accumulate(const std::vector<std::pair<double, Field>>& series, double k, double r, double t_end) {
  return lk_lr2_running(series, k, r, t_end).back();
}

}  // namespace ibnls
