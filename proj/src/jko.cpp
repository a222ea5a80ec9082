#include "otlab/jko.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otlab/errors.hpp"
#include "otlab/jko_oracle.hpp"

namespace otlab {

namespace {

void validate(const JkoConfig& cfg) {
  if (!(cfg.relaxation > 0.0 && cfg.relaxation <= 1.0))
    throw ConfigError("jko: relaxation must lie in (0, 1]");
  if (cfg.max_inner_iters < 1) throw ConfigError("jko: max_inner_iters must be positive");
  if (!(cfg.opt_tol > 0.0)) throw ConfigError("jko: opt_tol must be positive");
  if (cfg.gap_tol < 0.0) throw ConfigError("jko: gap_tol must be nonnegative");
}

// Normalizes a log-density in place so that trapz(exp(log_rho)) = 1 and
// returns the corresponding density values.
std::vector<double> normalize_log(const Grid& g, std::vector<double>& log_rho) {
  const double lm = *std::max_element(log_rho.begin(), log_rho.end());
  std::vector<double> dens(g.n);
  for (int i = 0; i < g.n; ++i) dens[i] = std::exp(log_rho[i] - lm);
  const double shift = lm + std::log(trapz(g, dens));
  for (int i = 0; i < g.n; ++i) {
    log_rho[i] -= shift;
    dens[i] = std::exp(log_rho[i]);
  }
  return dens;
}

struct Attempt {
  bool converged = false;
  double residual = 0.0;
  int iters = 0;
  std::vector<double> log_rho, dens, psi, dpsi;
};

Attempt run_attempt(const GridMeasure& mu, const Potential& V, const RadialProfile& h,
                    const JkoConfig& cfg, double lambda) {
  const Grid& g = mu.grid;
  const int n = g.n;

  Attempt a;
  a.log_rho.resize(n);
  for (int i = 0; i < n; ++i) a.log_rho[i] = std::log(mu.density[i]);

  GridMeasure rho = mu;
  double best_res = std::numeric_limits<double>::infinity();
  int worse_streak = 0;

  for (int m = 0; m < cfg.max_inner_iters; ++m) {
    a.dens = normalize_log(g, a.log_rho);
    rho.density = a.dens;

    const std::vector<double> T = optimal_map(rho, mu);
    a.dpsi = potential_derivative(g, T, h);
    a.psi = cumtrapz(g, a.dpsi);

    double cbar = 0.0;
    for (int i = 0; i < n; ++i)
      cbar += g.weight(i) * a.dens[i] * (a.log_rho[i] + V.values[i] + a.psi[i]);
    double res = 0.0;
    for (int i = 0; i < n; ++i)
      res = std::max(res, std::abs(a.log_rho[i] + V.values[i] + a.psi[i] - cbar));

    a.residual = res;
    a.iters = m + 1;
    if (res <= cfg.opt_tol) {
      a.converged = true;
      return a;
    }

    if (res < best_res) {
      best_res = res;
      worse_streak = 0;
    } else {
      ++worse_streak;
    }
    // A persistently growing residual means this relaxation diverges; bail
    // out early instead of burning the full inner budget.
    if ((worse_streak >= 8 && res > 10.0 * cfg.opt_tol) || res > 1e3 * (best_res + 1.0)) return a;

    for (int i = 0; i < n; ++i)
      a.log_rho[i] = (1.0 - lambda) * a.log_rho[i] + lambda * (-V.values[i] - a.psi[i]);
  }
  return a;
}

}  // namespace

JkoStepResult jko_step(const GridMeasure& mu, const Potential& V, const RadialProfile& h,
                       const JkoConfig& cfg) {
  validate(cfg);
  if (!mu.grid.same_as(V.grid)) throw GridMismatch("jko_step: measure and potential grids differ");
  if (!h.has_conjugate()) throw ConfigError("jko_step: cost must be superlinear (no conjugate)");

  const Grid& g = mu.grid;
  double lambda = cfg.relaxation;
  Attempt last;
  int restarts = 0;
  for (int attempt = 0; attempt <= 3; ++attempt, lambda *= 0.5) {
    last = run_attempt(mu, V, h, cfg, lambda);
    restarts = attempt;
    if (last.converged) break;
  }
  if (!last.converged)
    throw SolverFailure("jko_step: inner iteration did not converge (residual " +
                            std::to_string(last.residual) + ")",
                        last.residual);

  JkoStepResult out;
  out.rho_next = mu;
  out.rho_next.density = last.dens;
  out.psi = std::move(last.psi);
  out.psi_prime = std::move(last.dpsi);
  out.residual = last.residual;
  out.inner_iters = last.iters;
  out.restarts = restarts;
  out.relaxation_used = lambda;
  out.step_cost = transport_cost(out.rho_next, mu, h);
  out.objective = free_energy(out.rho_next, V) + out.step_cost;

  const double f_mu = free_energy(mu, V);
  if (out.objective > f_mu + 1e-8)
    throw SolverFailure("jko_step: objective " + std::to_string(out.objective) +
                            " exceeds F(mu) = " + std::to_string(f_mu),
                        out.residual, -1, SolverFailure::Kind::objective);

  const PotentialPair pair = kantorovich_potentials(out.rho_next, mu, h, cfg.gap_tol);
  out.duality_gap = pair.duality_gap;

  if (cfg.oracle_check) {
    const OracleResult oracle = jko_oracle(mu, V, h);
    double dist = 0.0;
    for (int i = 0; i < g.n; ++i)
      dist = std::max(dist, std::abs(out.rho_next.density[i] - oracle.rho.density[i]));
    out.oracle_distance = dist;
    const double tol = std::max(1e-3, 10.0 * cfg.opt_tol);
    if (dist > tol)
      throw SolverFailure("jko_step: oracle disagrees (sup distance " + std::to_string(dist) + ")",
                          out.residual, -1, SolverFailure::Kind::oracle);
  }
  return out;
}

}  // namespace otlab
