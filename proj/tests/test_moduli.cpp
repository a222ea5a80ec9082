#include <doctest.h>

#include <cmath>

#include "otlab/errors.hpp"
#include "otlab/grid.hpp"
#include "otlab/moduli.hpp"

using namespace otlab;

namespace {

Potential potential_on(const Grid& g, const Fn& v, const Fn& dv) {
  std::vector<double> vals(g.n), grad(g.n);
  for (int i = 0; i < g.n; ++i) {
    vals[i] = v(g.x[i]);
    grad[i] = dv(g.x[i]);
  }
  return make_gibbs(g, vals, grad).V;
}

}  // namespace

TEST_SUITE("moduli") {
  TEST_CASE("power and table modulus evaluation") {
    const Modulus m = power_modulus(3.0, 0.5, ModulusKind::monotonicity);
    CHECK(m(2.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(m(0.0) == 0.0);
    CHECK(m.kind == ModulusKind::monotonicity);

    const Modulus t = table_modulus({0.0, 1.0, 2.0}, {0.0, 0.5, 2.0}, ModulusKind::convexity);
    CHECK(t(0.5) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(t(1.5) == doctest::Approx(1.25).epsilon(1e-14));

    CHECK_THROWS_AS(power_modulus(0.0, 1.0, ModulusKind::convexity), DomainError);
    CHECK_THROWS_AS(power_modulus(2.0, -0.1, ModulusKind::convexity), DomainError);
    CHECK_THROWS_AS(table_modulus({0.0, 1.0}, {0.1, 0.5}, ModulusKind::convexity), DomainError);
    CHECK_THROWS_AS(table_modulus({0.5, 1.0}, {0.0, 0.5}, ModulusKind::convexity), DomainError);
  }

  TEST_CASE("sharp quadratic moduli verify with vanishing margin") {
    const Grid g = Grid::uniform(-2.0, 2.0, 257);
    const double lam = 1.7;
    const Potential V = potential_on(
        g, [lam](double x) { return 0.5 * lam * x * x; }, [lam](double x) { return lam * x; });

    const ModulusReport conv =
        verify_modulus(V, power_modulus(2.0, 0.5 * lam, ModulusKind::convexity));
    CHECK(conv.valid);
    CHECK(std::abs(conv.min_margin) < 1e-10);
    CHECK(conv.pairs_checked > 1000);

    const ModulusReport mono =
        verify_modulus(V, power_modulus(2.0, lam, ModulusKind::monotonicity));
    CHECK(mono.valid);
    CHECK(std::abs(mono.min_margin) < 1e-10);
  }

  TEST_CASE("too-strong moduli are rejected with a witness pair") {
    const Grid g = Grid::uniform(-2.0, 2.0, 257);
    const Potential V = potential_on(
        g, [](double x) { return 0.5 * x * x; }, [](double x) { return x; });

    const ModulusReport conv =
        verify_modulus(V, power_modulus(2.0, 0.6, ModulusKind::convexity));
    CHECK(!conv.valid);
    CHECK(conv.min_margin < -1e-3);
    CHECK(std::abs(conv.witness_x - conv.witness_y) > 0.0);

    const ModulusReport mono =
        verify_modulus(V, power_modulus(2.0, 1.5, ModulusKind::monotonicity));
    CHECK(!mono.valid);
    CHECK(mono.min_margin < -1e-3);
  }

  TEST_CASE("cubic potential admits the sharp p-power moduli") {
    const Grid g = Grid::uniform(-2.0, 2.0, 257);
    const Potential V = potential_on(
        g, [](double x) { return std::abs(x * x * x) / 3.0; },
        [](double x) { return x * std::abs(x); });

    const double c3 = ppower_C(3.0);
    const ModulusReport conv =
        verify_modulus(V, power_modulus(3.0, c3, ModulusKind::convexity));
    CHECK(conv.valid);

    const ModulusReport mono =
        verify_modulus(V, power_modulus(3.0, 0.5, ModulusKind::monotonicity));
    CHECK(mono.valid);
    CHECK(std::abs(mono.min_margin) < 1e-9);

    const ModulusReport too_strong =
        verify_modulus(V, power_modulus(3.0, 0.25, ModulusKind::convexity));
    CHECK(!too_strong.valid);
  }

  TEST_CASE("verify_modulus input guards") {
    const Grid g = Grid::uniform(-1.0, 1.0, 65);
    const Potential V = potential_on(
        g, [](double x) { return 0.5 * x * x; }, [](double x) { return x; });
    CHECK_THROWS_AS(verify_modulus(V, power_modulus(2.0, 0.5, ModulusKind::convexity), 500),
                    DomainError);
  }

  TEST_CASE("p-power constants: p = 2 conventions and frozen p = 3 values") {
    CHECK(ppower_C(2.0) == 0.5);
    CHECK(ppower_tp(2.0) == -0.5);
    CHECK(ppower_C(3.0) == doctest::Approx(0.19526214587563498).epsilon(1e-12));
    CHECK(ppower_tp(3.0) == doctest::Approx(-0.29289321881345248).epsilon(1e-10));
    CHECK(ppower_C(4.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    CHECK_THROWS_AS(ppower_C(1.5), DomainError);
    CHECK_THROWS_AS(ppower_tp(1.9), DomainError);
  }

  TEST_CASE("p-power constants respect the two-point lower bound") {
    for (double p : {2.0, 2.5, 3.0, 4.0, 6.0, 8.0}) {
      const double c = ppower_C(p);
      const double bound = std::pow(2.0, 2.0 - p) / p;
      CHECK(c >= bound - 1e-12);
      CHECK(c <= 1.0 / p + 1e-12);
      const double tp = ppower_tp(p);
      CHECK(tp >= -1.0);
      CHECK(tp <= 0.0);
      // the minimizer is a genuine stationary point of the objective
      const double obj = (std::pow(std::abs(tp + 1.0), p) - std::pow(std::abs(tp), p)) / p +
                         std::pow(std::abs(tp), p - 1.0);
      CHECK(obj == doctest::Approx(c).epsilon(1e-9));
    }
  }
}
