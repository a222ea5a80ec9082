#pragma once

#include "otlab/jko.hpp"
#include "otlab/moduli.hpp"

namespace otlab {

// One row per JKO iterate. The gradient u' entering the integrals is the
// optimality derivative -psi' of the arriving step for k >= 1 and the
// finite-difference pressure gradient at k = 0.
struct FlowRow {
  int k = 0;
  double F = 0.0;             // free energy
  double I_H = 0.0;           // ∫ H(|u'|) drho
  double I_L = 0.0;           // ∫ L(|u'|) drho
  double I_G = 0.0;           // I_H + I_L
  double R_ent = 0.0;         // ∫ [L(|u'|) + L*(v) - sigma(v)] drho, v = (h*)'(|u'|)
  double R_inf = 0.0;         // ∫ alpha(u') omega(v) drho
  double delta = 0.0;         // R_ent - R_inf
  double sup_dist = 0.0;      // sup |rho_k - eta|
  double step_cost = 0.0;     // T_h(rho_k, rho_{k-1}), 0 at k = 0
  double resid_ent = 0.0;     // entropy-dissipation residual of the arriving step
  double resid_fisher = 0.0;  // Fisher-dissipation residual of the arriving step
  double residual = 0.0;      // solver optimality residual of the arriving step
};

struct FlowTrace {
  Grid grid;
  std::vector<FlowRow> rows;
  GridMeasure rho_initial;
  GridMeasure rho_final;
  bool aborted_at_equilibrium = false;
  double dx() const { return grid.dx; }
};

struct FlowConfig {
  int n_steps = 100;
  JkoConfig solver;
  double equilibrium_tol = 1e-9;  // early abort on sup |rho_k - eta|
};

// Runs n_steps of the JKO scheme for F(rho) = ∫ rho log rho + ∫ V rho with
// cost sys.h, recording the dissipation functionals built from sys.H, sys.L
// and the moduli. sigma must be a convexity modulus and omega a monotonicity
// modulus; solver failures propagate with the step index attached.
FlowTrace run_flow(const GridMeasure& rho0, const Potential& V, const CostSystem& sys,
                   const Modulus& sigma, const Modulus& omega, const FlowConfig& cfg);

// ∫ H(|u'|) drho with u = log rho + V by finite differences.
double fisher_information(const GridMeasure& rho, const Potential& V, const RadialProfile& H);

// Same integral from an explicit gradient field.
double fisher_information_from_gradient(const GridMeasure& rho, const std::vector<double>& du,
                                        const RadialProfile& H);

// Residuals of the one-step dissipation inequalities for the step arriving at
// row k (k >= 1); nonnegative up to discretization when the moduli are valid.
double entropy_dissipation_residual(const FlowTrace& t, int k);
double fisher_dissipation_residual(const FlowTrace& t, int k);

enum class CertStatus { certified, failed, inconclusive };

struct CertificateReport {
  double F0 = 0.0, IG0 = 0.0, Fn = 0.0, IGn = 0.0, sum_delta = 0.0, tol = 0.0;
  bool certified = false;
  bool telescope_ok = false;
  double telescope_worst = 0.0;  // max over prefixes of lhs - rhs
  CertStatus status = CertStatus::inconclusive;
};

// Checks the telescoped bound F_0 - F_n <= I_G(rho_0) - I_G(rho_n) + sum Delta_k
// for every prefix and the headline bound F_0 <= I_G(rho_0) + tol, with
// tol = 100 dx (1 + scale) * tol_scale. Inconclusive unless the trace reached
// sup_dist < converged_tol.
CertificateReport lsi_certificate(const FlowTrace& t, double tol_scale = 1.0,
                                  double converged_tol = 1e-6);

struct PpowerFlowReport {
  double p = 0.0, q = 0.0, tau = 0.0;
  double alpha_coef = 0.0, beta_coef = 0.0, theta = 0.0;
  std::vector<double> I_q;   // q I_H along the trace
  double ent_worst = 0.0;    // min over k of F_{k+1} + c I_q(rho_k) - F_k
  double geo_worst = 0.0;    // min over k of I_q(rho_k)/(1+theta) - I_q(rho_{k+1})
  double decay_worst = 0.0;  // min over k of (1+theta)^{-k} I_q(rho_0) - I_q(rho_k)
  double summed_lhs = 0.0;   // F_0
  double summed_rhs = 0.0;   // c (1 + 1/theta) I_q(rho_0)
  double summed_constant = 0.0;  // c (1 + 1/theta), c = 1/(q alpha^{q-1})
  bool per_step_ok = false, geometric_ok = false, summed_ok = false;
  double tol = 0.0;
};

// Requires a trace run with H = h_q (so I_q = q I_H) and cost
// h(r) = tau (r/tau)^p / p; alpha_coef and beta_coef are the constants in
// sigma = (alpha/p) t^p and omega = (beta/q) t^p, and theta = beta tau^{p-1}.
PpowerFlowReport ppower_flow_constants(const FlowTrace& t, double p, double tau,
                                       double alpha_coef, double beta_coef,
                                       double tol_scale = 1.0);

}  // namespace otlab
