#pragma once

#include "otlab/transport.hpp"

namespace otlab {

struct JkoConfig {
  double relaxation = 0.5;    // damping of the log-density update, in (0, 1]
  int max_inner_iters = 500;  // per relaxation attempt
  double opt_tol = 1e-8;      // sup-norm optimality residual
  double gap_tol = 0.0;       // duality-gap certificate tolerance, 0 = automatic
  bool oracle_check = false;  // cross-check against the projected-gradient oracle
};

struct JkoStepResult {
  GridMeasure rho_next;
  std::vector<double> psi;        // potential from rho_next to mu
  std::vector<double> psi_prime;  // optimality derivative of psi at the nodes
  double residual = 0.0;          // sup |log rho + V + psi - mean|
  double objective = 0.0;         // F(rho_next) + T_h(rho_next, mu)
  int inner_iters = 0;
  int restarts = 0;
  double relaxation_used = 0.0;
  double duality_gap = 0.0;
  double step_cost = 0.0;         // T_h(rho_next, mu)
  double oracle_distance = -1.0;  // sup distance to the oracle, -1 when off
};

// One JKO step: minimize F(rho) + T_h(rho, mu) via the damped fixed point
// log rho <- (1 - lambda) log rho + lambda (-V - psi_rho), renormalized each
// pass. Divergent relaxations are halved and retried up to 3 times; after
// that a SolverFailure carries the last residual. The returned pair
// (rho_next, psi) is the converged iterate with its own potential.
JkoStepResult jko_step(const GridMeasure& mu, const Potential& V, const RadialProfile& h,
                       const JkoConfig& cfg = {});

}  // namespace otlab
