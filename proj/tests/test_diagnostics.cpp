#include <doctest.h>

#include <cmath>
#include <vector>

#include "otlab/diagnostics.hpp"
#include "otlab/errors.hpp"

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

GibbsPair cubic_gibbs(const Grid& g) {
  std::vector<double> v(g.n), dv(g.n);
  for (int i = 0; i < g.n; ++i) {
    v[i] = std::abs(g.x[i] * g.x[i] * g.x[i]) / 3.0;
    dv[i] = g.x[i] * std::abs(g.x[i]);
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

CostSystem quad_system(double tau) {
  CostSystem sys;
  sys.h = scaled_profile(tau, quadratic_profile());
  sys.H = quadratic_profile();
  sys.L = conjugate(sys.h);
  return sys;
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("quadratic flow dissipates free energy and converges") {
    const Grid g = Grid::uniform(-4.0, 4.0, 129);
    const GibbsPair gp = quad_gibbs(g);
    const CostSystem sys = quad_system(0.1);
    const Modulus sigma = power_modulus(2.0, 0.5, ModulusKind::convexity);
    const Modulus omega = power_modulus(2.0, 1.0, ModulusKind::monotonicity);
    FlowConfig cfg;
    cfg.n_steps = 40;

    const FlowTrace t = run_flow(gauss(g, 1.0, 0.6), gp.V, sys, sigma, omega, cfg);
    REQUIRE(t.rows.size() >= 2);
    const double slack = 1e-13 * (1.0 + std::abs(t.rows[0].F));
    for (std::size_t k = 1; k < t.rows.size(); ++k) {
      CHECK(t.rows[k].F <= t.rows[k - 1].F + slack);
      CHECK(t.rows[k].step_cost > 0.0);
      CHECK(entropy_dissipation_residual(t, int(k)) >= -100.0 * g.dx);
      CHECK(fisher_dissipation_residual(t, int(k)) >= -100.0 * g.dx);
      CHECK(t.rows[k].resid_ent == entropy_dissipation_residual(t, int(k)));
      CHECK(t.rows[k].resid_fisher == fisher_dissipation_residual(t, int(k)));
    }
    CHECK(t.rows[0].step_cost == 0.0);
    for (const FlowRow& r : t.rows) {
      CHECK(r.I_G == r.I_H + r.I_L);
      CHECK(r.delta == r.R_ent - r.R_inf);
      CHECK(r.delta >= -100.0 * g.dx);
    }
    CHECK(t.rows.back().sup_dist < 0.1 * t.rows.front().sup_dist);
    CHECK(t.rows.back().F < t.rows.front().F);

    const CertificateReport cert = lsi_certificate(t);
    CHECK(cert.telescope_ok);

    CHECK_THROWS_AS(entropy_dissipation_residual(t, 0), DomainError);
    CHECK_THROWS_AS(fisher_dissipation_residual(t, int(t.rows.size())), DomainError);
  }

  TEST_CASE("starting at equilibrium aborts immediately") {
    const Grid g = Grid::uniform(-4.0, 4.0, 129);
    const GibbsPair gp = quad_gibbs(g);
    const CostSystem sys = quad_system(0.1);
    const Modulus sigma = power_modulus(2.0, 0.5, ModulusKind::convexity);
    const Modulus omega = power_modulus(2.0, 1.0, ModulusKind::monotonicity);
    FlowConfig cfg;
    cfg.n_steps = 30;

    const FlowTrace t = run_flow(gp.eta, gp.V, sys, sigma, omega, cfg);
    CHECK(t.aborted_at_equilibrium);
    CHECK(t.rows.size() == 1);
    CHECK(t.rows[0].sup_dist < cfg.equilibrium_tol);
  }

  TEST_CASE("certificate is certified on a converged flow, inconclusive on a stub") {
    const Grid g = Grid::uniform(-4.0, 4.0, 129);
    const GibbsPair gp = quad_gibbs(g);
    const CostSystem sys = quad_system(0.1);
    const Modulus sigma = power_modulus(2.0, 0.5, ModulusKind::convexity);
    const Modulus omega = power_modulus(2.0, 1.0, ModulusKind::monotonicity);

    FlowConfig long_cfg;
    long_cfg.n_steps = 200;
    const FlowTrace done = run_flow(gauss(g, 1.0, 0.6), gp.V, sys, sigma, omega, long_cfg);
    const CertificateReport cert = lsi_certificate(done);
    CHECK(cert.status == CertStatus::certified);
    CHECK(cert.certified);
    CHECK(cert.telescope_ok);
    CHECK(cert.F0 <= cert.IG0 + cert.tol);

    FlowConfig stub_cfg;
    stub_cfg.n_steps = 5;
    const FlowTrace stub = run_flow(gauss(g, 1.0, 0.6), gp.V, sys, sigma, omega, stub_cfg);
    const CertificateReport open = lsi_certificate(stub);
    CHECK(open.status == CertStatus::inconclusive);
    CHECK(!open.certified);
  }

  TEST_CASE("p-power flow constants for the cubic system") {
    const Grid g = Grid::uniform(-2.0, 2.0, 129);
    const GibbsPair gp = cubic_gibbs(g);
    const double p = 3.0, tau = 1.5;
    const double alpha_coef = 2.0 - std::sqrt(2.0);
    const double beta_coef = 0.75;

    CostSystem sys;
    sys.h = scaled_profile(tau, power_profile(p));
    sys.H = power_profile(1.5, 2.0 / 3.0);
    sys.L = conjugate(sys.h);
    const Modulus sigma = power_modulus(p, alpha_coef / p, ModulusKind::convexity);
    const Modulus omega = power_modulus(p, beta_coef / 1.5, ModulusKind::monotonicity);

    FlowConfig cfg;
    cfg.n_steps = 40;
    const FlowTrace t = run_flow(tilt(gp.eta, 0.5), gp.V, sys, sigma, omega, cfg);

    const PpowerFlowReport rep = ppower_flow_constants(t, p, tau, alpha_coef, beta_coef);
    CHECK(rep.theta == doctest::Approx(1.6875).epsilon(1e-14));
    CHECK(rep.summed_constant == doctest::Approx(1.3872149997452887).epsilon(1e-12));
    CHECK(rep.I_q.size() == t.rows.size());
    CHECK(rep.I_q[0] == doctest::Approx(1.5 * t.rows[0].I_H).epsilon(1e-13));
    CHECK(rep.per_step_ok);
    CHECK(rep.geometric_ok);
    CHECK(rep.summed_ok);
    CHECK(rep.summed_lhs <= rep.summed_rhs + rep.tol);
  }

  TEST_CASE("p-power report rejects bad parameters") {
    const Grid g = Grid::uniform(-2.0, 2.0, 65);
    const GibbsPair gp = quad_gibbs(g);
    const CostSystem sys = quad_system(1.0);
    const Modulus sigma = power_modulus(2.0, 0.5, ModulusKind::convexity);
    const Modulus omega = power_modulus(2.0, 1.0, ModulusKind::monotonicity);
    FlowConfig cfg;
    cfg.n_steps = 2;
    const FlowTrace t = run_flow(tilt(gp.eta, 0.4), gp.V, sys, sigma, omega, cfg);
    CHECK_THROWS_AS(ppower_flow_constants(t, 1.5, 1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(ppower_flow_constants(t, 2.0, -1.0, 1.0, 1.0), DomainError);
  }
}
