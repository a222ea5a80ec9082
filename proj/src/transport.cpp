#include "otlab/transport.hpp"

#include <algorithm>
#include <cmath>

#include "otlab/errors.hpp"
#include "otlab/parallel.hpp"

namespace otlab {

namespace {

void check_same_grid(const GridMeasure& mu, const GridMeasure& nu, const char* where) {
  if (!mu.grid.same_as(nu.grid)) throw GridMismatch(std::string(where) + ": measures on different grids");
}

// Quantile of a piecewise-linear CDF at sorted query points; two-pointer walk.
void quantile_sorted(const Grid& g, const std::vector<double>& P,
                     const std::vector<double>& queries, std::vector<double>& out) {
  const int n = g.n;
  out.resize(queries.size());
  int j = 0;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const double p = queries[q];
    if (p <= 0.0) {
      out[q] = g.a;
      continue;
    }
    if (p >= 1.0) {
      out[q] = g.b;
      continue;
    }
    while (j + 2 < n && P[j + 1] <= p) ++j;
    const double run = P[j + 1] - P[j];
    const double t = run > 0.0 ? (p - P[j]) / run : 0.0;
    out[q] = g.x[j] + t * g.dx;
  }
}

}  // namespace

std::vector<double> optimal_map(const GridMeasure& mu, const GridMeasure& nu) {
  check_same_grid(mu, nu, "optimal_map");
  const std::vector<double> Pmu = mu.cdf();
  const std::vector<double> Pnu = nu.cdf();
  std::vector<double> T;
  quantile_sorted(mu.grid, Pnu, Pmu, T);
  return T;
}

double transport_cost(const GridMeasure& mu, const GridMeasure& nu, const RadialProfile& h) {
  check_same_grid(mu, nu, "transport_cost");
  const Grid& g = mu.grid;
  const std::vector<double> Pmu = mu.cdf();
  const std::vector<double> Pnu = nu.cdf();

  // Union of both CDF images, walked in order; both quantiles are linear
  // between consecutive union points.
  std::vector<double> ps;
  ps.reserve(2 * g.n);
  std::merge(Pmu.begin(), Pmu.end(), Pnu.begin(), Pnu.end(), std::back_inserter(ps));
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

  std::vector<double> qmu, qnu;
  quantile_sorted(g, Pmu, ps, qmu);
  quantile_sorted(g, Pnu, ps, qnu);

  double cost = 0.0;
  double prev = h.kappa(std::abs(qmu[0] - qnu[0]));
  for (std::size_t k = 1; k < ps.size(); ++k) {
    const double cur = h.kappa(std::abs(qmu[k] - qnu[k]));
    cost += 0.5 * (ps[k] - ps[k - 1]) * (prev + cur);
    prev = cur;
  }
  return cost;
}

std::vector<double> potential_derivative(const Grid& g, const std::vector<double>& T,
                                         const RadialProfile& h) {
  if (int(T.size()) != g.n) throw GridMismatch("potential_derivative: map size mismatch");
  std::vector<double> dpsi(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double d = g.x[i] - T[i];
    dpsi[i] = d >= 0.0 ? h.dkappa(d) : -h.dkappa(-d);
  }
  return dpsi;
}

std::vector<double> c_transform(const Grid& g, const std::vector<double>& psi,
                                const RadialProfile& h) {
  if (int(psi.size()) != g.n) throw GridMismatch("c_transform: potential size mismatch");
  const int n = g.n;
  std::vector<double> out(n);
  const double* x = g.x.data();
  const double* ps = psi.data();
  const Fn& kappa = h.kappa;
  par::for_each_index(std::size_t(n), [&](std::size_t j) {
    const double y = x[j];
    double best = kappa(std::abs(x[0] - y)) - ps[0];
    for (int i = 1; i < n; ++i) {
      const double v = kappa(std::abs(x[i] - y)) - ps[i];
      if (v < best) best = v;
    }
    out[j] = best;
  });
  return out;
}

double default_gap_tol(double dx, double cost) {
  return std::max(1e-4, 10.0 * dx * dx) * (1.0 + std::abs(cost));
}

PotentialPair kantorovich_potentials(const GridMeasure& mu, const GridMeasure& nu,
                                     const RadialProfile& h, double gap_tol) {
  check_same_grid(mu, nu, "kantorovich_potentials");
  const Grid& g = mu.grid;

  const std::vector<double> T = optimal_map(mu, nu);
  const std::vector<double> dpsi = potential_derivative(g, T, h);
  const std::vector<double> psi_raw = cumtrapz(g, dpsi);

  PotentialPair pair;
  pair.phi = c_transform(g, psi_raw, h);
  pair.psi = c_transform(g, pair.phi, h);
  pair.cost = transport_cost(mu, nu, h);

  double dual = 0.0;
  for (int i = 0; i < g.n; ++i)
    dual += g.weight(i) * (pair.psi[i] * mu.density[i] + pair.phi[i] * nu.density[i]);
  pair.duality_gap = pair.cost - dual;
  pair.gap_tol = gap_tol > 0.0 ? gap_tol : default_gap_tol(g.dx, pair.cost);
  if (std::abs(pair.duality_gap) > pair.gap_tol)
    throw DualityGapError(pair.duality_gap, pair.gap_tol);
  return pair;
}

double five_gradients_value(const GridMeasure& mu, const GridMeasure& nu,
                            const RadialProfile& H, const RadialProfile& h) {
  check_same_grid(mu, nu, "five_gradients_value");
  const Grid& g = mu.grid;

  const std::vector<double> T = optimal_map(mu, nu);
  const std::vector<double> S = optimal_map(nu, mu);
  const std::vector<double> dpsi = potential_derivative(g, T, h);
  const std::vector<double> dphi = potential_derivative(g, S, h);
  const std::vector<double> dmu = fd_gradient(g, mu.density);
  const std::vector<double> dnu = fd_gradient(g, nu.density);

  std::vector<double> f(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double a = dpsi[i] >= 0.0 ? H.dkappa(dpsi[i]) : -H.dkappa(-dpsi[i]);
    const double b = dphi[i] >= 0.0 ? H.dkappa(dphi[i]) : -H.dkappa(-dphi[i]);
    f[i] = a * dmu[i] + b * dnu[i];
  }
  return trapz(g, f);
}

TransportSolution solve_transport(const GridMeasure& mu, const GridMeasure& nu,
                                  const RadialProfile& h, double gap_tol) {
  TransportSolution sol;
  sol.map = optimal_map(mu, nu);
  sol.potentials = kantorovich_potentials(mu, nu, h, gap_tol);
  sol.cost = sol.potentials.cost;
  return sol;
}

}  // namespace otlab
