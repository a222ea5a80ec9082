#include "otlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otlab/errors.hpp"

namespace otlab {

namespace {

// Integrals of row k against rho with the gradient field du.
FlowRow make_row(int k, const GridMeasure& rho, const std::vector<double>& du,
                 const Potential& V, const CostSystem& sys, const Modulus& sigma,
                 const Modulus& omega, const GridMeasure& eta) {
  const Grid& g = rho.grid;
  FlowRow row;
  row.k = k;
  row.F = free_energy(rho, V);
  double ih = 0.0, il = 0.0, rent = 0.0, rinf = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double w = g.weight(i) * rho.density[i];
    const double z = std::abs(du[i]);
    const double v = sys.h.dconj(z);
    const double lz = sys.L.kappa(z);
    ih += w * sys.H.kappa(z);
    il += w * lz;
    rent += w * (lz + sys.L.conj(v) - sigma.value(v));
    rinf += w * alpha(z, sys) * omega.value(v);
  }
  row.I_H = ih;
  row.I_L = il;
  row.I_G = ih + il;
  row.R_ent = rent;
  row.R_inf = rinf;
  row.delta = rent - rinf;
  row.sup_dist = rho.sup_distance(eta);
  return row;
}

}  // namespace

double fisher_information_from_gradient(const GridMeasure& rho, const std::vector<double>& du,
                                        const RadialProfile& H) {
  const Grid& g = rho.grid;
  if (int(du.size()) != g.n) throw GridMismatch("fisher_information: gradient size mismatch");
  std::vector<double> f(g.n);
  for (int i = 0; i < g.n; ++i) f[i] = rho.density[i] * H.kappa(std::abs(du[i]));
  return trapz(g, f);
}

double fisher_information(const GridMeasure& rho, const Potential& V, const RadialProfile& H) {
  return fisher_information_from_gradient(rho, pressure(rho, V).du, H);
}

FlowTrace run_flow(const GridMeasure& rho0, const Potential& V, const CostSystem& sys,
                   const Modulus& sigma, const Modulus& omega, const FlowConfig& cfg) {
  if (cfg.n_steps < 1) throw ConfigError("run_flow: n_steps must be positive");
  if (sigma.kind != ModulusKind::convexity)
    throw ConfigError("run_flow: sigma must be a convexity modulus");
  if (omega.kind != ModulusKind::monotonicity)
    throw ConfigError("run_flow: omega must be a monotonicity modulus");
  if (!sys.h.has_conjugate() || !sys.L.has_conjugate())
    throw ConfigError("run_flow: cost and Young partner must both be superlinear");
  if (!rho0.grid.same_as(V.grid)) throw GridMismatch("run_flow: measure and potential grids differ");

  const Grid& g = rho0.grid;
  std::vector<double> eta_vals(g.n);
  for (int i = 0; i < g.n; ++i) eta_vals[i] = std::exp(-V.values[i]);
  const GridMeasure eta = GridMeasure::from_values(g, std::move(eta_vals));

  FlowTrace trace;
  trace.grid = g;
  trace.rho_initial = rho0;
  trace.rows.reserve(cfg.n_steps + 1);
  trace.rows.push_back(make_row(0, rho0, pressure(rho0, V).du, V, sys, sigma, omega, eta));

  GridMeasure rho = rho0;
  JkoConfig step_cfg = cfg.solver;
  if (trace.rows[0].sup_dist < cfg.equilibrium_tol) {
    trace.aborted_at_equilibrium = true;
    trace.rho_final = rho;
    return trace;
  }

  for (int k = 1; k <= cfg.n_steps; ++k) {
    JkoStepResult step;
    try {
      step = jko_step(rho, V, sys.h, step_cfg);
    } catch (const SolverFailure& e) {
      throw SolverFailure(std::string(e.what()) + " at flow step " + std::to_string(k),
                          e.residual, k, e.kind);
    }
    step_cfg.relaxation = step.relaxation_used;  // carry the working damping forward

    std::vector<double> du(g.n);
    for (int i = 0; i < g.n; ++i) du[i] = -step.psi_prime[i];
    FlowRow row = make_row(k, step.rho_next, du, V, sys, sigma, omega, eta);
    const FlowRow& prev = trace.rows.back();
    row.step_cost = step.step_cost;
    row.residual = step.residual;
    row.resid_ent = row.F - prev.F + prev.I_L - row.I_L + row.R_ent;
    row.resid_fisher = prev.I_H - row.I_H - row.R_inf;
    trace.rows.push_back(row);

    rho = step.rho_next;
    if (row.sup_dist < cfg.equilibrium_tol) {
      trace.aborted_at_equilibrium = true;
      break;
    }
  }
  trace.rho_final = rho;
  return trace;
}

double entropy_dissipation_residual(const FlowTrace& t, int k) {
  if (k < 1 || k >= int(t.rows.size()))
    throw DomainError("entropy_dissipation_residual: step index out of range");
  return t.rows[k].resid_ent;
}

double fisher_dissipation_residual(const FlowTrace& t, int k) {
  if (k < 1 || k >= int(t.rows.size()))
    throw DomainError("fisher_dissipation_residual: step index out of range");
  return t.rows[k].resid_fisher;
}

CertificateReport lsi_certificate(const FlowTrace& t, double tol_scale, double converged_tol) {
  if (t.rows.empty()) throw DomainError("lsi_certificate: empty trace");
  CertificateReport rep;
  rep.F0 = t.rows.front().F;
  rep.IG0 = t.rows.front().I_G;
  rep.Fn = t.rows.back().F;
  rep.IGn = t.rows.back().I_G;

  const double scale = std::max(std::abs(rep.F0), std::abs(rep.IG0));
  rep.tol = 100.0 * t.dx() * (1.0 + scale) * tol_scale;

  double sum_delta = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    sum_delta += t.rows[k].delta;
    const double lhs = rep.F0 - t.rows[k].F;
    const double rhs = rep.IG0 - t.rows[k].I_G + sum_delta;
    worst = std::max(worst, lhs - rhs);
  }
  rep.sum_delta = sum_delta;
  rep.telescope_worst = t.rows.size() > 1 ? worst : 0.0;
  rep.telescope_ok = rep.telescope_worst <= rep.tol;

  const bool converged = t.rows.back().sup_dist < converged_tol;
  const bool bound_ok = rep.F0 <= rep.IG0 + rep.tol;
  rep.certified = converged && bound_ok && rep.telescope_ok;
  if (!converged) {
    rep.status = CertStatus::inconclusive;
  } else {
    rep.status = rep.certified ? CertStatus::certified : CertStatus::failed;
  }
  return rep;
}

PpowerFlowReport ppower_flow_constants(const FlowTrace& t, double p, double tau,
                                       double alpha_coef, double beta_coef, double tol_scale) {
  if (!(p >= 2.0)) throw DomainError("ppower_flow_constants: requires p >= 2");
  if (!(tau > 0.0)) throw DomainError("ppower_flow_constants: requires tau > 0");
  if (!(alpha_coef > 0.0) || !(beta_coef > 0.0))
    throw DomainError("ppower_flow_constants: alpha and beta must be positive");
  if (t.rows.size() < 2) throw DomainError("ppower_flow_constants: trace has no steps");

  PpowerFlowReport rep;
  rep.p = p;
  rep.q = p / (p - 1.0);
  rep.tau = tau;
  rep.alpha_coef = alpha_coef;
  rep.beta_coef = beta_coef;
  rep.theta = beta_coef * std::pow(tau, p - 1.0);

  const double c = 1.0 / (rep.q * std::pow(alpha_coef, rep.q - 1.0));
  rep.I_q.resize(t.rows.size());
  for (std::size_t k = 0; k < t.rows.size(); ++k) rep.I_q[k] = rep.q * t.rows[k].I_H;

  const double scale = std::max(std::abs(t.rows.front().F), rep.I_q[0]);
  rep.tol = 100.0 * t.dx() * (1.0 + scale) * tol_scale;

  double ent_worst = std::numeric_limits<double>::infinity();
  double geo_worst = std::numeric_limits<double>::infinity();
  double decay_worst = std::numeric_limits<double>::infinity();
  double decay_bound = rep.I_q[0];
  for (std::size_t k = 0; k + 1 < t.rows.size(); ++k) {
    ent_worst = std::min(ent_worst, t.rows[k + 1].F + c * rep.I_q[k] - t.rows[k].F);
    geo_worst = std::min(geo_worst, rep.I_q[k] / (1.0 + rep.theta) - rep.I_q[k + 1]);
    decay_bound /= 1.0 + rep.theta;
    decay_worst = std::min(decay_worst, decay_bound - rep.I_q[k + 1]);
  }
  rep.ent_worst = ent_worst;
  rep.geo_worst = geo_worst;
  rep.decay_worst = decay_worst;
  rep.per_step_ok = ent_worst >= -rep.tol;
  rep.geometric_ok = geo_worst >= -rep.tol;

  rep.summed_lhs = t.rows.front().F;
  rep.summed_constant = c * (1.0 + 1.0 / rep.theta);
  rep.summed_rhs = rep.summed_constant * rep.I_q[0];
  rep.summed_ok = rep.summed_lhs <= rep.summed_rhs + rep.tol;
  return rep;
}

}  // namespace otlab
