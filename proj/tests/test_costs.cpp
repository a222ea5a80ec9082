#include <doctest.h>

#include <cmath>

#include "otlab/costs.hpp"
#include "otlab/errors.hpp"
#include "otlab/numerics.hpp"

using namespace otlab;

namespace {

std::vector<double> sample(const Fn& f, const std::vector<double>& xs) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
  return out;
}

}  // namespace

TEST_SUITE("costs") {
  TEST_CASE("quadratic profile is self-conjugate") {
    const RadialProfile h = quadratic_profile();
    CHECK(h.kappa(1.3) == doctest::Approx(0.845).epsilon(1e-14));
    CHECK(h.conj(1.3) == doctest::Approx(0.845).epsilon(1e-14));
    CHECK(h.dkappa(0.7) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(h.dconj(0.7) == doctest::Approx(0.7).epsilon(1e-14));
  }

  TEST_CASE("power profiles and their Young conjugates") {
    const RadialProfile c3 = power_profile(3.0);  // r^3/3
    CHECK(c3.kappa(2.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
    CHECK(c3.conj(2.0) == doctest::Approx(1.8856180831641267).epsilon(1e-14));
    CHECK(c3.dconj(4.0) == doctest::Approx(2.0).epsilon(1e-13));

    const RadialProfile c4 = power_profile(4.0, 0.25);  // r^4/4
    CHECK(c4.conj(8.0) == doctest::Approx(12.0).epsilon(1e-13));

    const RadialProfile c15 = power_profile(1.5, 2.0 / 3.0);  // r^{3/2}/(3/2)
    CHECK(c15.conj(2.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
    CHECK(c15.dkappa(4.0) == doctest::Approx(2.0).epsilon(1e-13));

    CHECK_THROWS_AS(power_profile(1.0), DomainError);
    CHECK_THROWS_AS(power_profile(2.0, -1.0), DomainError);
  }

  TEST_CASE("Young inequality with equality at matched slopes, analytic case") {
    const RadialProfile c = power_profile(3.0);
    for (double r : {0.1, 0.5, 1.0, 2.5}) {
      const double s = c.dkappa(r);
      CHECK(std::abs(c.kappa(r) + c.conj(s) - r * s) < 1e-12);
      CHECK(c.kappa(r) + c.conj(s + 0.3) - r * (s + 0.3) > -1e-12);
    }
  }

  TEST_CASE("scaled profile: values, conjugate scaling, derivative identity") {
    const RadialProfile h = scaled_profile(0.1, quadratic_profile());
    CHECK(h.kappa(2.0) == doctest::Approx(20.0).epsilon(1e-13));     // r^2/(2 tau)
    CHECK(h.conj(3.0) == doctest::Approx(0.45).epsilon(1e-13));      // tau s^2/2
    CHECK(h.dconj(3.0) == doctest::Approx(0.3).epsilon(1e-13));      // tau s
    CHECK(h.dkappa(0.5) == doctest::Approx(5.0).epsilon(1e-13));     // r/tau
    CHECK_THROWS_AS(scaled_profile(0.0, quadratic_profile()), DomainError);

    const RadialProfile hp = scaled_profile(1.5, power_profile(3.0));
    // tau (r/tau)^p/p = r^3/(3 tau^2)
    CHECK(hp.kappa(1.2) == doctest::Approx(1.2 * 1.2 * 1.2 / (3.0 * 2.25)).epsilon(1e-13));
    // conjugate tau s^q/q with q = 3/2
    CHECK(hp.conj(2.0) == doctest::Approx(1.5 * 1.8856180831641267).epsilon(1e-13));
  }

  TEST_CASE("conjugate() swaps the pair and linear profiles have none") {
    const RadialProfile h = scaled_profile(0.5, quadratic_profile());
    const RadialProfile hc = conjugate(h);
    CHECK(hc.kappa(2.0) == doctest::Approx(h.conj(2.0)));
    CHECK(hc.conj(2.0) == doctest::Approx(h.kappa(2.0)));
    CHECK_THROWS_AS(conjugate(linear_profile(1.0)), DomainError);
  }

  TEST_CASE("table profile interpolates nodes and extends linearly") {
    const auto r = linspace(0.0, 2.0, 33);
    std::vector<double> k(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) k[i] = r[i] * r[i];
    const RadialProfile t = table_profile(r, k);
    CHECK(t.kappa(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(t.kappa(0.0) == 0.0);
    const double slope_end = (k[32] - k[31]) / (r[32] - r[31]);
    CHECK(t.kappa(3.0) == doctest::Approx(4.0 + slope_end).epsilon(1e-13));
    CHECK_THROWS_AS(table_profile({0.0, 1.0}, {0.0, 1.0}), DomainError);  // too few nodes
    const auto r_off = linspace(0.5, 2.0, 16);
    std::vector<double> k_off(r_off.size());
    for (std::size_t i = 0; i < r_off.size(); ++i) k_off[i] = r_off[i] * r_off[i];
    CHECK_THROWS_AS(table_profile(r_off, k_off), DomainError);  // r[0] != 0
  }

  TEST_CASE("table biconjugate reproduces the nodes") {
    const auto r = linspace(0.0, 2.0, 33);
    std::vector<double> k(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) k[i] = 0.25 * std::pow(r[i], 4.0);
    const RadialProfile t = table_profile(r, k);
    REQUIRE(t.has_conjugate());
    const RadialProfile tcc = conjugate(conjugate(t));
    for (std::size_t i = 0; i < r.size(); ++i)
      CHECK(std::abs(tcc.kappa(r[i]) - k[i]) < 1e-6 * (1.0 + std::abs(k[i])));
  }

  TEST_CASE("table Young equality at nodal subgradients") {
    const auto r = linspace(0.0, 2.0, 33);
    std::vector<double> k(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) k[i] = 0.25 * std::pow(r[i], 4.0);
    const RadialProfile t = table_profile(r, k);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double s = t.dkappa(r[i]);
      CHECK(std::abs(t.kappa(r[i]) + t.conj(s) - r[i] * s) < 1e-8);
    }
  }

  TEST_CASE("table conjugate tracks the closed form for exp(r) - 1 - r") {
    const auto r = linspace(0.0, 5.0, 8193);
    std::vector<double> k(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) k[i] = std::exp(r[i]) - 1.0 - r[i];
    const RadialProfile t = table_profile(r, k);
    REQUIRE(t.has_conjugate());
    for (double s : {0.5, 1.0, 10.0, 100.0}) {
      const double exact = (1.0 + s) * std::log(1.0 + s) - s;
      CHECK(std::abs(t.conj(s) - exact) < 1e-5);
    }
  }

  TEST_CASE("non-convex table: conjugate throws with the witness triple") {
    const auto r = linspace(0.0, 2.0, 17);
    std::vector<double> k(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) k[i] = r[i] * r[i];
    k[8] += 0.5;  // makes the slope drop after node 8
    const RadialProfile t = table_profile(r, k);
    CHECK(!t.has_conjugate());
    CHECK_THROWS_AS(conjugate(t), ConvexityViolation);
    try {
      conjugate(t);
    } catch (const ConvexityViolation& e) {
      CHECK(e.r_lo < e.r_hi);
      CHECK(e.r_mid > 0.0);
    }
  }

  TEST_CASE("alpha ratio: quadratic closed form, power identity, zero at zero") {
    CostSystem quad{quadratic_profile(), power_profile(2.0, 0.75), quadratic_profile()};
    CHECK(alpha(0.0, quad) == 0.0);
    for (double z : {0.2, 1.0, 4.0})  // H = A r^2, h = r^2/2 -> alpha = 2A
      CHECK(alpha(z, quad) == doctest::Approx(1.5).epsilon(1e-13));

    CostSystem pw{power_profile(3.0), power_profile(1.5, 2.0 / 3.0), power_profile(3.0)};
    for (double z : {0.3, 1.0, 2.0})  // H = r^q/q, h = r^p/p -> alpha = 1
      CHECK(alpha(z, pw) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("cost axiom verification") {
    const CostAxiomReport ok = verify_cost_axioms(quadratic_profile(), 4.0);
    CHECK(ok.zero_at_zero);
    CHECK(ok.strictly_convex);
    CHECK(ok.superlinear);
    CHECK(ok.all_ok());

    const CostAxiomReport lin = verify_cost_axioms(linear_profile(1.0), 4.0);
    CHECK(lin.zero_at_zero);
    CHECK(!lin.strictly_convex);
    CHECK(!lin.superlinear);

    Fn f = [](double r) { return r * std::log1p(r); };
    RadialProfile rlog;
    rlog.kappa = f;
    rlog.dkappa = [](double r) { return std::log1p(r) + r / (1.0 + r); };
    const CostAxiomReport rl = verify_cost_axioms(rlog, 6.0);
    CHECK(rl.all_ok());
  }

  TEST_CASE("fast power paths agree with std::pow") {
    const std::vector<double> xs{0.0, 0.3, 1.0, 2.7};
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
      const RadialProfile c = power_profile(p);
      for (double x : xs)
        CHECK(c.kappa(x) == doctest::Approx(std::pow(x, p) / p).epsilon(1e-14));
    }
    (void)sample;
  }
}
