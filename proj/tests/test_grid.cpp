#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "ibnls/error.hpp"
#include "ibnls/grid.hpp"
#include "ibnls/initial_data.hpp"
#include "ibnls/snapshot.hpp"

using namespace ibnls;

TEST_CASE("grid arithmetic") {
  Grid g = make_grid(1, 8, 4);
  CHECK(g.spacing() == 1.0);
  for (int i = 0; i < 8; ++i) CHECK(g.axis_coord(i) == -4.0 + i);
  Grid g2 = make_grid(2, 256, 16);
  CHECK(g2.size() == 65536);
  CHECK(g2.spacing() == 0.125);
  CHECK(g2.spacing() * g2.n() == 2 * g2.half_width());
  CHECK_THROWS_AS(make_grid(3, 4, 1), Error);
  CHECK_THROWS_AS(make_grid(1, 12, 1), Error);
  // wavenumbers symmetric apart from Nyquist
  for (int i = 1; i < 4; ++i) CHECK(g.axis_wavenumber(i) == -g.axis_wavenumber(8 - i));
  CHECK(g.axis_wavenumber(4) == doctest::Approx(-std::numbers::pi));
}

TEST_CASE("transform of constant and single mode") {
  Grid g = make_grid(1, 64, 5);
  Field one{g, Eigen::ArrayXcd::Ones(64), Space::Physical};
  Field s = transform(one);
  CHECK(std::abs(s.values[0]) == doctest::Approx(8.0));
  CHECK(s.values.tail(63).abs().maxCoeff() < 1e-13);
  CHECK_THROWS_AS(transform(s), Error);
  const int j = 5;
  Field mode = sample(g, [&](auto& x) { return std::polar(1.0, g.axis_wavenumber(j) * x[0]); });
  Field ms = transform(mode);
  int nonzero = 0;
  for (int i = 0; i < 64; ++i) nonzero += std::abs(ms.values[i]) > 1e-10;
  CHECK(nonzero == 1);
  CHECK(std::abs(ms.values[j]) > 1);
}

TEST_CASE("round trip and Parseval in 1-3 dimensions") {
  std::mt19937_64 rng(11);
  for (int d = 1; d <= 3; ++d) {
    Grid g = make_grid(d, d == 3 ? 16 : 64, 3.0, d == 2);
    Field f = random_field(g, rng);
    Field s = transform(f);
    CHECK(std::abs(l2_norm(s) - l2_norm(f)) <= 1e-12 * l2_norm(f));
    Field back = inverse_transform(s);
    double err = (back.values - f.values).abs().maxCoeff() / f.values.abs().maxCoeff();
    CHECK(err < 1e-12);
  }
}

TEST_CASE("Gaussian L2 norm and plane-wave Laplacian") {
  Grid g = make_grid(1, 512, 16);
  auto n = sobolev_norms(gaussian(g, 1, 1));
  CHECK(n.l2 * n.l2 == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-8));
  // independent oracle: ‖f''‖² of e^{-x²/2} is (3/4)√π
  CHECK(n.h2dot * n.h2dot == doctest::Approx(0.75 * std::sqrt(std::numbers::pi)).epsilon(1e-8));
  double xi0 = g.axis_wavenumber(7);
  Field w = sample(g, [&](auto& x) { return std::polar(1.0, xi0 * x[0]); });
  auto nw = sobolev_norms(w);
  CHECK(nw.h2dot == doctest::Approx(xi0 * xi0 * nw.l2).epsilon(1e-12));
  auto nz = sobolev_norms(zeros(g));
  CHECK(nz.l2 == 0);
  CHECK(nz.h2 == 0);
}

TEST_CASE("spectral Laplacian is symmetric") {
  std::mt19937_64 rng(3);
  Grid g = make_grid(2, 32, 4);
  Field f = random_field(g, rng), h = random_field(g, rng);
  cplx a = inner(laplacian(f), h), b = inner(f, laplacian(h));
  CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
}

TEST_CASE("weight construction") {
  Grid off = make_grid(1, 64, 8, true);
  WeightField w = make_weight(off, 1.0, 0.0);
  for (Eigen::Index i = 0; i < w.values.size(); ++i)
    CHECK(w.values[i] == doctest::Approx(1.0 / std::abs(off.axis_coord(static_cast<int>(i)))));
  Grid on = make_grid(1, 64, 8);
  CHECK_THROWS_AS(make_weight(on, 1.0, 0.0), Error);
  WeightField r = make_weight(on, 1.0, on.spacing() / 2);
  CHECK(r.values.minCoeff() > 0);
  CHECK(std::isfinite(r.values.maxCoeff()));
  // monotone along the axis away from the origin
  WeightField c = make_corrected_weight(on, 0.25);
  for (int i = 33; i < 64; ++i) CHECK(c.values[i] <= c.values[i - 1]);
  for (int i = 1; i <= 32; ++i) CHECK(c.values[i] >= c.values[i - 1]);
}

TEST_CASE("lattice zeta against independent values") {
  // d = 1 reduces to 2ζ(s)
  for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) CHECK(lattice_zeta(1, s) == doctest::Approx(2 * std::riemann_zeta(s)).epsilon(1e-12));
  // d = 2: Σ' |n|^{-2s'} = 4 ζ(s') β(s') (Lorenz); at s = 1 this is 4 ζ(1/2) β(1/2)
  CHECK(lattice_zeta(2, 1.0) == doctest::Approx(4 * -1.4603545088095868 * 0.66769145718960917).epsilon(1e-10));
  // d = 3, s = 1: the cubic-lattice constant -2.8372974794806...
  CHECK(lattice_zeta(3, 1.0) == doctest::Approx(-2.8372974794806).epsilon(1e-11));
}

// ∫|x|^{-b} e^{-(α+2)x²/2} dx = Γ((1-b)/2)·(2/(α+2))^{(1-b)/2} in d = 1.
// eps = h/2 converges like h^{1-b}; the lattice-corrected origin like h^{3-b}.
TEST_CASE("weighted potential converges under refinement") {
  const double b = 0.25, a = 8;
  const double exact = std::tgamma((1 - b) / 2) * std::pow(2 / (a + 2), (1 - b) / 2);
  std::vector<double> reg, corr, reg_raw;
  for (int n : {256, 512, 1024, 2048, 4096}) {
    Grid g = make_grid(1, n, 16);
    Field f = gaussian(g, 1, 1);
    auto integral = [&](const WeightField& w) {
      return g.cell_volume() * (w.values * f.values.abs().pow(a + 2)).sum();
    };
    double v = integral(make_weight(g, b, g.spacing() / 2));
    reg_raw.push_back(v);
    reg.push_back(std::abs(v - exact));
    corr.push_back(std::abs(integral(make_corrected_weight(g, b)) - exact));
  }
  for (size_t i = 1; i < reg.size(); ++i) {
    double order_reg = std::log2(reg[i - 1] / reg[i]), order_corr = std::log2(corr[i - 1] / corr[i]);
    CHECK(order_reg == doctest::Approx(1 - b).epsilon(0.1));
    CHECK(order_corr == doctest::Approx(3 - b).epsilon(0.1));
    CHECK(corr[i] < reg[i]);
  }
  CHECK(corr.back() / exact < 1e-6);
  // one Richardson step with the h^{1-b} rate removes the leading error
  const double r = std::pow(2.0, 1 - b);
  double extrap = (r * reg_raw[4] - reg_raw[3]) / (r - 1);
  CHECK(std::abs(extrap - exact) < 0.05 * reg.back());
}

TEST_CASE("snapshot round trip and corruption") {
  std::mt19937_64 rng(5);
  Grid g = make_grid(2, 16, 2.5, true);
  Field f = random_field(g, rng);
  const std::string path = "snapshot_test.bin";
  write_snapshot(path, f);
  Field r = read_snapshot(path);
  CHECK(r.grid == g);
  CHECK((r.values - f.values).abs().maxCoeff() == 0);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 8);
  try {
    read_snapshot(path);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CorruptSnapshot);
  }
  std::filesystem::remove(path);
}
