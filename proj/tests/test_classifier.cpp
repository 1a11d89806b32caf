#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>

#include "ibnls/classifier.hpp"
#include "ibnls/error.hpp"
#include "ibnls/initial_data.hpp"

using namespace ibnls;

namespace {

PhysParams base() {
  PhysParams p;
  p.d = 1, p.b = 0.25, p.alpha = 8, p.kappa = 1, p.mu = 0, p.omega = 1;
  return p;
}

const GroundState& q1() {
  static const GroundState gs = [] {
    Grid g = make_grid(1, 2048, 32);
    return petviashvili_solve(base(), make_corrected_weight(g, 0.25), gaussian(g, 1, 1));
  }();
  return gs;
}

Field scaled(double c) {
  Field f = q1().field;
  f.values *= c;
  return f;
}

}  // namespace

TEST_CASE("A verdicts on scaled ground states") {
  const auto& gs = q1();
  auto p = base();
  CHECK(classify_A(zeros(gs.field.grid), p, gs) == AVerdict::APlus);
  CHECK(classify_A(gs.field, p, gs) == AVerdict::Boundary);
  // c-power expansion: S(cQ) = c²(½‖ΔQ‖² + ½M) - c^{α+2}P/(α+2), G(cQ) = 2c²‖ΔQ‖² - c^{α+2}(dα+2b)P/(2(α+2))
  const auto& s = gs.snapshot;
  const double a2 = p.alpha + 2, dab = p.d * p.alpha + 2 * p.b;
  for (double c : {0.5, 0.9, 0.99, 1.01, 1.1}) {
    double S = c * c * (0.5 * s.lap_l2 + 0.5 * s.mass) - std::pow(c, a2) * s.potential / a2;
    double G = 2 * c * c * s.lap_l2 - std::pow(c, a2) * dab / (2 * a2) * s.potential;
    auto fs = evaluate_functionals(scaled(c), p, gs.weight);
    CHECK(fs.action == doctest::Approx(S).epsilon(1e-12));
    CHECK(fs.pohozaev == doctest::Approx(G).epsilon(1e-9));
    CHECK(S < gs.m_threshold);
    AVerdict expect = G > 0 ? AVerdict::APlus : AVerdict::AMinus;
    CHECK(classify_A(scaled(c), p, gs) == expect);
  }
  CHECK(classify_A(scaled(0.9), p, gs) == AVerdict::APlus);
  CHECK(classify_A(scaled(1.1), p, gs) == AVerdict::AMinus);
  // lots of mass: above the threshold
  CHECK(classify_A(gaussian(gs.field.grid, 1.0, 5.0), p, gs) == AVerdict::AboveThreshold);
  // wider tolerance band swallows nearby points
  CHECK(classify_A(scaled(0.999), p, gs, {1e-2, 1e-2}) == AVerdict::Boundary);
}

TEST_CASE("A classification preconditions") {
  const auto& gs = q1();
  auto p = base();
  Grid other = make_grid(1, 1024, 32);
  CHECK_THROWS_WITH_AS(classify_A(zeros(other), p, gs), doctest::Contains("GridMismatch"), Error);
  PhysParams q = p;
  q.omega = 2;
  CHECK_THROWS_AS(classify_A(gs.field, q, gs), Error);
}

TEST_CASE("B verdicts") {
  const auto& gs = q1();
  auto p = base();
  CHECK(classify_B(zeros(gs.field.grid), p, gs) == BVerdict::BPlus);
  CHECK(classify_B(gs.field, p, gs) == BVerdict::Boundary);
  CHECK(classify_B(scaled(0.5), p, gs) == BVerdict::BPlus);
  CHECK(classify_B(scaled(1.5), p, gs) == BVerdict::Outside);
  // transition at c = 1
  for (double c : {0.95, 0.99, 0.999}) CHECK(classify_B(scaled(c), p, gs) == BVerdict::BPlus);
  for (double c : {1.001, 1.01, 1.05}) CHECK(classify_B(scaled(c), p, gs) == BVerdict::Outside);
  PhysParams q = p;
  q.mu = 1;
  CHECK_THROWS_WITH_AS(classify_B(gs.field, q, gs), doctest::Contains("WrongGauge"), Error);
  // margins against an independent evaluation
  auto m = b_margins(evaluate_functionals(scaled(0.5), p, gs.weight), gs.snapshot, p);
  const double sc = sigma_c(p);
  CHECK(m.grad_rhs == doctest::Approx(std::sqrt(gs.snapshot.lap_l2) * std::pow(gs.snapshot.mass, sc / 2)).epsilon(1e-12));
  CHECK(m.grad_lhs == doctest::Approx(std::pow(0.5, 1 + sc) * m.grad_rhs).epsilon(1e-10));
}

TEST_CASE("optimal frequency") {
  const auto& gs = q1();
  auto p = base();
  auto check_stationary = [&](const Field& f) {
    auto fs = evaluate_functionals(f, p, gs.weight);
    auto os = omega_star(fs, gs.m_threshold, p);
    const double h = 1e-5 * os.omega0;
    double dF = (threshold_gap(os.omega0 + h, fs, gs.m_threshold, p) - threshold_gap(os.omega0 - h, fs, gs.m_threshold, p)) / (2 * h);
    CHECK(std::abs(dF) <= 1e-6 * std::abs(os.F_omega0) + 1e-9);
    // coarse sweep never beats the closed-form maximizer
    for (double lw = -6; lw <= 6; lw += 0.25)
      CHECK(threshold_gap(std::exp(lw) * os.omega0, fs, gs.m_threshold, p) <= os.F_omega0 + 1e-12);
    return os;
  };
  CHECK(check_stationary(scaled(0.5)).F_omega0 > 0);
  CHECK(classify_B(scaled(0.5), p, gs) == BVerdict::BPlus);
  // large E₀·M^σ: a wide, massive, oscillating bump
  Field wave = gaussian(gs.field.grid, 1.0, 5.0);
  for (Eigen::Index i = 0; i < wave.values.size(); ++i) wave.values[i] *= std::polar(1.0, 2 * gs.field.grid.axis_coord(i));
  CHECK(check_stationary(wave).F_omega0 < 0);
  std::mt19937_64 rng(12);
  check_stationary(random_smooth(gs.field.grid, rng, 1.0, 3.0));
  CHECK_THROWS_WITH_AS(omega_star(zeros(gs.field.grid), p, gs), doctest::Contains("ZeroField"), Error);
  // Q₁ sits on the boundary: ω₀ = 1 and F(ω₀) = 0. The exponent 4α/(dα+2b-8) = 64
  // amplifies the discrete Pohozaev defect, hence the looser ω₀ tolerance
  auto os = omega_star(gs.field, p, gs);
  CHECK(os.omega0 == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(os.F_omega0) < 1e-5 * gs.m_threshold);
}

TEST_CASE("equivalence audit") {
  const auto& gs = q1();
  auto p = base();
  SUBCASE("inside") {
    auto rep = equivalence_audit({scaled(0.3), scaled(0.6), scaled(0.9)}, p, gs);
    CHECK(rep.agreement_fraction == 1.0);
    for (const auto& r : rep.rows) {
      CHECK(r.b == BVerdict::BPlus);
      CHECK(r.union_a == AVerdict::APlus);
      CHECK_FALSE(r.in_band);
    }
  }
  SUBCASE("outside") {
    auto rep = equivalence_audit({scaled(1.1), scaled(1.5)}, p, gs);
    CHECK(rep.agreement_fraction == 1.0);
    for (const auto& r : rep.rows) {
      CHECK(r.b == BVerdict::Outside);
      CHECK(r.union_a != AVerdict::APlus);
    }
  }
  SUBCASE("random fields, scaling law and regridded ground states") {
    std::mt19937_64 rng(99);
    std::vector<Field> s;
    for (int i = 0; i < 20; ++i) s.push_back(random_smooth(gs.field.grid, rng, std::uniform_real_distribution(0.3, 1.2)(rng), 3.0));
    auto rep = equivalence_audit(s, p, gs);
    CHECK(rep.disagreements_outside_band == 0);
    auto direct = equivalence_audit(s, p, gs, {}, true);
    CHECK(direct.disagreements_outside_band == 0);
    for (size_t i = 0; i < s.size(); ++i)
      if (direct.rows[i].direct) CHECK(direct.rows[i].union_a == rep.rows[i].union_a);
  }
}

TEST_CASE("report serialization") {
  const auto& gs = q1();
  auto p = base();
  auto r = threshold_report(scaled(0.7), p, gs, &gs);
  CHECK(r.a_verdict == AVerdict::APlus);
  CHECK(r.b_verdict == BVerdict::BPlus);
  CHECK(r.agreement);
  auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["a_verdict"] == "A_plus");
  CHECK(j["b_verdict"] == "B_plus");
  CHECK(j["S"].get<double>() == r.S_val);
  auto path = std::filesystem::temp_directory_path() / "ibnls_audit_test.csv";
  write_audit_csv(path.string(), equivalence_audit({scaled(0.5)}, p, gs));
  std::ifstream is(path);
  std::string head;
  std::getline(is, head);
  CHECK(head == "# ibnls audit v1");
  std::filesystem::remove(path);
}
