#include <doctest.h>

#include <boost/rational.hpp>
#include <random>

#include "ibnls/error.hpp"
#include "ibnls/params.hpp"

using namespace ibnls;
using Q = boost::rational<long long>;

namespace {

PhysParams make(int d, double b, double alpha, double mu = 0, double omega = 1) {
  PhysParams p;
  p.d = d, p.b = b, p.alpha = alpha, p.mu = mu, p.omega = omega;
  return p;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("regime of the d=3 example") {
  auto p = make(3, 1, 4);
  Regime r = validate_params(p, Mode::Evolution);
  CHECK(r.tag == RegimeTag::Intercritical);
  CHECK(r.radial_required);
  CHECK(gamma_c(p) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("mass-critical tie goes to the critical label") {
  auto p = make(4, 1, 1.5);
  CHECK(validate_params(p, Mode::Variational).tag == RegimeTag::MassCritical);
  CHECK(gamma_c(p) == doctest::Approx(0.0));
}

TEST_CASE("evolution hypothesis b < d/2") {
  auto p = make(2, 1.5, 3);
  CHECK(kind_of([&] { validate_params(p, Mode::Evolution); }) == ErrorKind::ParameterOutOfRange);
  // the same point is fine for variational work (b < min{d,4})
  CHECK_NOTHROW(validate_params(p, Mode::Variational));
  auto bad = make(1, 0.25, 8, 0, 0.0);
  CHECK(kind_of([&] { validate_params(bad, Mode::Variational); }) == ErrorKind::ParameterOutOfRange);
  auto high = make(6, 1, 4);
  CHECK(kind_of([&] { validate_params(high, Mode::Variational); }) == ErrorKind::ParameterOutOfRange);
}

TEST_CASE("exponent quadruple for d=4, b=1, alpha=2") {
  auto ce = critical_exponents(make(4, 1, 2), false);
  CHECK(ce.q == doctest::Approx(16.0 / 5));
  CHECK(ce.r == doctest::Approx(16.0 / 3));
  CHECK(ce.k == doctest::Approx(16.0 / 3));
  CHECK(ce.m == doctest::Approx(16.0 / 7));
  CHECK(ce.gamma_c == doctest::Approx(0.5));
  CHECK(ce.sigma_c == doctest::Approx(3.0));
  CHECK(1 / ce.k + 1 / ce.m == doctest::Approx(5.0 / 8).epsilon(1e-14));
  CHECK(is_biharmonic_admissible(ce.q, ce.r, 4));
}

TEST_CASE("radial growth exponent") {
  CHECK(critical_exponents(make(3, 1, 4), true).rho_growth == doctest::Approx(1.0 / 3));
  CHECK(critical_exponents(make(3, 1, 4), false).rho_growth == doctest::Approx(0.5));
  CHECK(critical_exponents(make(1, 0.25, 8), false).rho_growth == doctest::Approx(0.8));
}

TEST_CASE("exponents refuse mass-subcritical input") {
  CHECK(kind_of([] { critical_exponents(make(3, 1, 1), false); }) == ErrorKind::ParameterOutOfRange);
}

TEST_CASE("admissibility examples") {
  CHECK(is_biharmonic_admissible(std::numeric_limits<double>::infinity(), 2, 3));
  CHECK_FALSE(is_biharmonic_admissible(2, 2, 3));
  CHECK_FALSE(is_biharmonic_admissible(8, std::numeric_limits<double>::infinity(), 4));
}

// 1/k + 1/m = 2/q as an identity in Q(d, b, α): check it exactly on rational points
TEST_CASE("exponent identity in exact arithmetic") {
  for (long long d = 1; d <= 4; ++d)
    for (long long bn = 1; bn <= 7; ++bn)
      for (long long an = 1; an <= 40; ++an) {
        Q b(bn, 4), a(an, 2);
        if (!(b < Q(d, 2))) continue;
        Q gc = Q(d, 2) - (Q(4) - b) / a;
        if (!(gc > 0) || !(gc < 2)) continue;
        Q q = Q(8) * (a + 2) / (Q(d) * a + 2 * b);
        Q k = Q(4) * a * (a + 2) / (Q(8) - 2 * b - Q(d - 4) * a);
        Q m = Q(4) * a * (a + 2) / (Q(d) * a * a + (Q(d - 4) + 2 * b) * a - 8 + 2 * b);
        Q r = Q(d) * (a + 2) / (Q(d) - b);
        CHECK(Q(1) / k + Q(1) / m == Q(2) / q);
        CHECK(Q(4) / q + Q(d) / r == Q(d, 2));
        auto ce = critical_exponents(make(static_cast<int>(d), boost::rational_cast<double>(b),
                                          boost::rational_cast<double>(a)),
                                     false);
        CHECK(std::abs(1 / ce.k + 1 / ce.m - 2 / ce.q) <= 1e-12);
        CHECK(is_biharmonic_admissible(ce.q, ce.r, static_cast<int>(d)));
        CHECK(ce.sigma_c * ce.gamma_c == doctest::Approx(2 - ce.gamma_c).epsilon(1e-12));
      }
}

TEST_CASE("gamma_c increases with alpha") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.1, 20);
  for (int i = 0; i < 200; ++i) {
    double a1 = U(rng), a2 = U(rng);
    if (a1 > a2) std::swap(a1, a2);
    if (a1 == a2) continue;
    CHECK(gamma_c(make(2, 0.5, a1)) < gamma_c(make(2, 0.5, a2)));
  }
}
