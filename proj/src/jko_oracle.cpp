#include "otlab/jko_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otlab/errors.hpp"

namespace otlab {

namespace {

constexpr double kFloor = 1e-12;

// Euclidean projection (in the quadrature metric) onto
// {rho >= kFloor, trapz(rho) = 1}: rho_i = max(kFloor, y_i - shift).
std::vector<double> project_simplex(const Grid& g, const std::vector<double>& y) {
  double ymin = y[0], ymax = y[0];
  for (int i = 0; i < g.n; ++i) {
    ymin = std::min(ymin, y[i]);
    ymax = std::max(ymax, y[i]);
  }
  auto mass_at = [&](double shift) {
    double s = 0.0;
    for (int i = 0; i < g.n; ++i) s += g.weight(i) * std::max(kFloor, y[i] - shift);
    return s;
  };
  double hi = ymax;  // mass ~ kFloor * |domain| < 1 here
  double lo = ymin - 2.0 / g.length();
  for (int k = 0; k < 64 && mass_at(lo) < 1.0; ++k) lo -= std::pow(2.0, k) / g.length();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mass_at(mid) >= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-16 * (1.0 + std::abs(hi))) break;
  }
  const double shift = 0.5 * (lo + hi);
  std::vector<double> out(g.n);
  for (int i = 0; i < g.n; ++i) out[i] = std::max(kFloor, y[i] - shift);
  return out;
}

double objective_at(const Grid& g, const std::vector<double>& rho, const GridMeasure& mu,
                    const Potential& V, const RadialProfile& h) {
  GridMeasure m = mu;
  m.density = rho;
  double f = 0.0;
  for (int i = 0; i < g.n; ++i)
    f += g.weight(i) * rho[i] * (std::log(rho[i]) + V.values[i]);
  return f + transport_cost(m, mu, h);
}

}  // namespace

OracleResult jko_oracle(const GridMeasure& mu, const Potential& V, const RadialProfile& h,
                        int max_iters, double tol) {
  if (!mu.grid.same_as(V.grid)) throw GridMismatch("jko_oracle: measure and potential grids differ");
  const Grid& g = mu.grid;
  const int n = g.n;

  // The entropy term makes the plain Euclidean gradient stiff wherever the
  // iterate is many orders of magnitude below the minimizer, so the descent
  // direction is preconditioned by max(rho, eps) and centered to be
  // mass-neutral to first order. Directional derivative along -d is
  // -sum w_i p_i (grad_i - cbar)^2 <= 0, so the line search always admits
  // descent away from the minimizer.
  const double eps_pre = 1e-6 / g.length();
  std::vector<double> rho(n, 1.0 / g.length());
  GridMeasure work = mu;
  double obj = objective_at(g, rho, mu, V, h);
  double step = 1.0;
  double stat = std::numeric_limits<double>::infinity();
  int it = 0;

  for (; it < max_iters; ++it) {
    work.density = rho;
    const std::vector<double> T = optimal_map(work, mu);
    const std::vector<double> dpsi = potential_derivative(g, T, h);
    const std::vector<double> psi = cumtrapz(g, dpsi);

    std::vector<double> grad(n), pre(n);
    for (int i = 0; i < n; ++i) {
      grad[i] = std::log(rho[i]) + V.values[i] + psi[i];
      pre[i] = std::max(rho[i], eps_pre);
    }
    double cbar_num = 0.0, cbar_den = 0.0;
    for (int i = 0; i < n; ++i) {
      cbar_num += g.weight(i) * pre[i] * grad[i];
      cbar_den += g.weight(i) * pre[i];
    }
    const double cbar = cbar_num / cbar_den;
    std::vector<double> dir(n);
    double dir_sup = 0.0;
    for (int i = 0; i < n; ++i) {
      dir[i] = pre[i] * (grad[i] - cbar);
      dir_sup = std::max(dir_sup, std::abs(dir[i]));
    }
    stat = dir_sup;
    if (dir_sup < tol) break;

    bool accepted = false;
    for (int bt = 0; bt < 40 && !accepted; ++bt) {
      std::vector<double> y(n);
      for (int i = 0; i < n; ++i) y[i] = rho[i] - step * dir[i];
      std::vector<double> cand = project_simplex(g, y);
      const double cand_obj = objective_at(g, cand, mu, V, h);
      if (cand_obj <= obj + 1e-15 * (1.0 + std::abs(obj))) {
        rho = std::move(cand);
        obj = cand_obj;
        accepted = true;
        step = std::min(step * 1.3, 1e3);
      } else {
        step *= 0.5;
      }
    }
    if (!accepted) {
      ++it;
      break;
    }
  }

  OracleResult out;
  out.rho = mu;
  out.rho.density = std::move(rho);
  out.objective = obj;
  out.iterations = it;
  out.stationarity = stat;
  return out;
}

}  // namespace otlab
