#include "ibnls/initial_data.hpp"

#include <cmath>
#include <numbers>

namespace ibnls {

Field gaussian(const Grid& g, double amplitude, double width, std::array<double, 3> center) {
  const double s2 = 2 * width * width;
  return sample(g, [&](const std::array<double, 3>& x) {
    double r2 = 0;
    for (int a = 0; a < g.dim(); ++a) r2 += (x[a] - center[a]) * (x[a] - center[a]);
    return cplx(amplitude * std::exp(-r2 / s2), 0.0);
  });
}

Field ring(const Grid& g, double amplitude, double radius, double width) {
  const double s2 = 2 * width * width;
  return sample(g, [&](const std::array<double, 3>& x) {
    double r = 0;
    for (int a = 0; a < g.dim(); ++a) r += x[a] * x[a];
    r = std::sqrt(r) - radius;
    return cplx(amplitude * std::exp(-r * r / s2), 0.0);
  });
}

Field bandlimited_bump(const Grid& g, double amplitude, double xi_c) {
  Field s{g, Eigen::ArrayXcd::Zero(g.size()), Space::Spectral};
  const auto& k2 = g.xi2();
  // centre the profile at the origin: x_0 = -L (or -L + h/2) shifts the phase
  const double x0 = g.axis_coord(0);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    double q = k2[i] / (xi_c * xi_c);
    if (q >= 1) continue;
    double ph = 0;
    auto ix = g.unravel(i);
    for (int a = 0; a < g.dim(); ++a) ph += g.axis_wavenumber(ix[a]) * x0;
    s.values[i] = std::exp(1.0 - 1.0 / (1.0 - q)) * std::polar(1.0, ph);
  }
  Field f = inverse_transform(s);
  f.values *= amplitude / f.values.abs().maxCoeff();
  return f;
}

Field random_smooth(const Grid& g, std::mt19937_64& rng, double amplitude, double spread) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int J = 1 + static_cast<int>(U(rng) * 3);
  Field f = zeros(g);
  for (int j = 0; j < J; ++j) {
    std::array<double, 3> c{0, 0, 0}, k{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) {
      c[a] = spread * (2 * U(rng) - 1);
      k[a] = 1.0 * (2 * U(rng) - 1);
    }
    double width = 0.7 + 1.3 * U(rng);
    cplx coef = std::polar(amplitude * (0.3 + 0.7 * U(rng)), 2 * std::numbers::pi * U(rng));
    Field bump = sample(g, [&](const std::array<double, 3>& x) {
      double r2 = 0, ph = 0;
      for (int a = 0; a < g.dim(); ++a) {
        r2 += (x[a] - c[a]) * (x[a] - c[a]);
        ph += k[a] * x[a];
      }
      return coef * std::exp(-r2 / (2 * width * width)) * std::polar(1.0, ph);
    });
    f.values += bump.values;
  }
  return f;
}

Field random_field(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Field f = zeros(g);
  for (Eigen::Index i = 0; i < g.size(); ++i) f.values[i] = cplx(N(rng), N(rng));
  return f;
}

}  // namespace ibnls
