#pragma once

#include "otlab/jko.hpp"

namespace otlab {

struct OracleResult {
  GridMeasure rho;
  double objective = 0.0;
  int iterations = 0;
  double stationarity = 0.0;  // sup_i max(rho_i, eps) |grad_i - mean| at exit
};

// Brute-force minimizer of the same discrete JKO objective: projected gradient
// on {rho >= floor, trapz(rho) = 1} with a diagonal max(rho, eps)
// preconditioner and backtracking line search, started from the uniform
// density. Used to cross-check jko_step; shares only the transport primitives
// with it.
OracleResult jko_oracle(const GridMeasure& mu, const Potential& V, const RadialProfile& h,
                        int max_iters = 4000, double tol = 1e-9);

}  // namespace otlab
