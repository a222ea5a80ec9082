#include <doctest.h>

#include <cmath>
#include <vector>

#include "otlab/diagnostics.hpp"
#include "otlab/errors.hpp"
#include "otlab/jko.hpp"

using namespace otlab;

namespace {

GibbsPair quad_gibbs(const Grid& g, double lam = 1.0) {
  std::vector<double> v(g.n), dv(g.n);
  for (int i = 0; i < g.n; ++i) {
    v[i] = 0.5 * lam * g.x[i] * g.x[i];
    dv[i] = lam * g.x[i];
  }
  return make_gibbs(g, v, dv);
}

GridMeasure gauss(const Grid& g, double center, double stddev) {
  std::vector<double> v(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double z = (g.x[i] - center) / stddev;
    v[i] = std::exp(-0.5 * z * z);
  }
  return GridMeasure::from_values(g, std::move(v));
}

GridMeasure tilt(const GridMeasure& eta, double t) {
  std::vector<double> v(eta.grid.n);
  for (int i = 0; i < eta.grid.n; ++i) v[i] = eta.density[i] * std::exp(t * eta.grid.x[i]);
  return GridMeasure::from_values(eta.grid, std::move(v));
}

}  // namespace

TEST_SUITE("jko") {
  TEST_CASE("the Gibbs measure is a fixed point") {
    const Grid g = Grid::uniform(-3.0, 3.0, 161);
    const GibbsPair gp = quad_gibbs(g);
    const RadialProfile h = scaled_profile(0.1, quadratic_profile());
    const JkoStepResult r = jko_step(gp.eta, gp.V, h);
    CHECK(r.residual <= 1e-8);
    CHECK(r.rho_next.sup_distance(gp.eta) < 1e-6);
    CHECK(r.step_cost < 1e-8);
    CHECK(r.restarts == 0);
  }

  TEST_CASE("the step never loses against staying put") {
    const Grid g = Grid::uniform(-3.0, 3.0, 193);
    const GibbsPair gp = quad_gibbs(g);
    const GridMeasure mu = gauss(g, 0.9, 0.5);
    const RadialProfile h = scaled_profile(0.2, quadratic_profile());
    const JkoStepResult r = jko_step(mu, gp.V, h);
    CHECK(r.objective <= free_energy(mu, gp.V) + 1e-8);
    const double recomposed = free_energy(r.rho_next, gp.V) + r.step_cost;
    CHECK(std::abs(r.objective - recomposed) < 1e-10);
    CHECK(std::abs(r.duality_gap) <= default_gap_tol(g.dx, r.step_cost));
  }

  TEST_CASE("fixed point iterate matches the projected-gradient oracle") {
    JkoConfig cfg;
    cfg.oracle_check = true;

    const Grid g1 = Grid::uniform(-3.0, 3.0, 129);
    const GibbsPair gp1 = quad_gibbs(g1);
    const JkoStepResult r1 =
        jko_step(gauss(g1, 0.8, 0.5), gp1.V, scaled_profile(0.2, quadratic_profile()), cfg);
    CHECK(r1.oracle_distance >= 0.0);
    CHECK(r1.oracle_distance <= 1e-3);

    const Grid g2 = Grid::uniform(-2.0, 2.0, 257);
    const GibbsPair gp2 = quad_gibbs(g2, 2.0);
    const JkoStepResult r2 =
        jko_step(tilt(gp2.eta, 0.6), gp2.V, scaled_profile(1.5, power_profile(3.0)), cfg);
    CHECK(r2.oracle_distance >= 0.0);
    CHECK(r2.oracle_distance <= 1e-3);
  }

  TEST_CASE("starved inner iteration surfaces as a divergence failure") {
    const Grid g = Grid::uniform(-3.0, 3.0, 129);
    const GibbsPair gp = quad_gibbs(g);
    JkoConfig cfg;
    cfg.max_inner_iters = 1;
    bool thrown = false;
    try {
      jko_step(gauss(g, 1.2, 0.4), gp.V, scaled_profile(0.1, quadratic_profile()), cfg);
    } catch (const SolverFailure& e) {
      thrown = true;
      CHECK(e.kind == SolverFailure::Kind::divergence);
      CHECK(e.residual > cfg.opt_tol);
      CHECK(std::string(e.what()).size() > 0);
    }
    CHECK(thrown);
  }

  TEST_CASE("tilted measures have exact generalized Fisher information") {
    const Grid g = Grid::uniform(-2.0, 2.0, 257);
    const GibbsPair gp = quad_gibbs(g);
    const GridMeasure rho = tilt(gp.eta, 0.4);
    const double exact = 0.5 * 0.4 * 0.4;
    CHECK(fisher_information(rho, gp.V, quadratic_profile()) ==
          doctest::Approx(exact).epsilon(1e-11));

    const std::vector<double> du(g.n, 0.4);
    CHECK(fisher_information_from_gradient(rho, du, quadratic_profile()) ==
          doctest::Approx(exact).epsilon(1e-13));

    const double cubic = fisher_information_from_gradient(rho, du, power_profile(3.0));
    CHECK(cubic == doctest::Approx(0.4 * 0.4 * 0.4 / 3.0).epsilon(1e-13));
  }
}
