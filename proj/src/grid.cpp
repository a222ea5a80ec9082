#include "otlab/grid.hpp"

#include <cmath>

#include "otlab/errors.hpp"

namespace otlab {

Grid Grid::uniform(double a, double b, int n) {
  if (!(a < b)) throw DomainError("grid requires a < b");
  if (n < 16) throw DomainError("grid requires n >= 16");
  Grid g;
  g.a = a;
  g.b = b;
  g.n = n;
  g.dx = (b - a) / double(n - 1);
  g.x.resize(n);
  for (int i = 0; i < n; ++i) g.x[i] = a + g.dx * double(i);
  g.x.back() = b;
  return g;
}

bool Grid::same_as(const Grid& o) const { return a == o.a && b == o.b && n == o.n; }

double trapz(const Grid& g, const std::vector<double>& f) {
  if (int(f.size()) != g.n) throw GridMismatch("trapz: value count does not match grid");
  double s = 0.5 * (f.front() + f.back());
  for (int i = 1; i + 1 < g.n; ++i) s += f[i];
  return s * g.dx;
}

std::vector<double> cumtrapz(const Grid& g, const std::vector<double>& f) {
  if (int(f.size()) != g.n) throw GridMismatch("cumtrapz: value count does not match grid");
  std::vector<double> out(g.n);
  out[0] = 0.0;
  for (int i = 1; i < g.n; ++i) out[i] = out[i - 1] + 0.5 * g.dx * (f[i - 1] + f[i]);
  return out;
}

std::vector<double> fd_gradient(const Grid& g, const std::vector<double>& f) {
  if (int(f.size()) != g.n) throw GridMismatch("fd_gradient: value count does not match grid");
  const int n = g.n;
  std::vector<double> out(n);
  const double inv2 = 1.0 / (2.0 * g.dx);
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2;
  for (int i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2;
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2;
  return out;
}

GridMeasure GridMeasure::from_values(const Grid& g, std::vector<double> values) {
  if (int(values.size()) != g.n) throw GridMismatch("measure: value count does not match grid");
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("measure: densities must be finite and nonnegative");
  }
  for (double& v : values) v = std::max(v, 1e-300);
  GridMeasure m;
  m.grid = g;
  m.density = std::move(values);
  const double z = trapz(g, m.density);
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("measure: zero or non-finite mass");
  for (double& v : m.density) v /= z;
  return m;
}

double GridMeasure::mass() const { return trapz(grid, density); }

double GridMeasure::sup_distance(const GridMeasure& o) const {
  if (!grid.same_as(o.grid)) throw GridMismatch("sup_distance: measures on different grids");
  double d = 0.0;
  for (int i = 0; i < grid.n; ++i) d = std::max(d, std::abs(density[i] - o.density[i]));
  return d;
}

std::vector<double> GridMeasure::cdf() const {
  std::vector<double> P = cumtrapz(grid, density);
  const double total = P.back();
  for (double& p : P) p /= total;
  P.back() = 1.0;
  return P;
}

double Potential::lip() const {
  double m = 0.0;
  for (double g : gradient) m = std::max(m, std::abs(g));
  return m;
}

GibbsPair make_gibbs(const Grid& g, const std::vector<double>& raw_values,
                     const std::vector<double>& raw_grad) {
  if (int(raw_values.size()) != g.n) throw GridMismatch("make_gibbs: value count does not match grid");
  for (double v : raw_values) {
    if (!std::isfinite(v)) throw DomainError("make_gibbs: potential values must be finite");
  }
  std::vector<double> w(g.n);
  for (int i = 0; i < g.n; ++i) w[i] = std::exp(-raw_values[i]);
  const double z = trapz(g, w);
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("make_gibbs: e^{-V} has zero or non-finite mass");
  const double shift = std::log(z);

  GibbsPair out;
  out.V.grid = g;
  out.V.normalization_shift = shift;
  out.V.values.resize(g.n);
  for (int i = 0; i < g.n; ++i) out.V.values[i] = raw_values[i] + shift;
  if (raw_grad.empty()) {
    out.V.gradient = fd_gradient(g, raw_values);
  } else {
    if (int(raw_grad.size()) != g.n) throw GridMismatch("make_gibbs: gradient count does not match grid");
    out.V.gradient = raw_grad;
  }
  std::vector<double> eta(g.n);
  for (int i = 0; i < g.n; ++i) eta[i] = std::exp(-out.V.values[i]);
  out.eta = GridMeasure::from_values(g, std::move(eta));
  return out;
}

double entropy(const GridMeasure& rho) {
  std::vector<double> f(rho.grid.n);
  for (int i = 0; i < rho.grid.n; ++i) f[i] = rho.density[i] * std::log(rho.density[i]);
  return trapz(rho.grid, f);
}

double free_energy(const GridMeasure& rho, const Potential& V) {
  if (!rho.grid.same_as(V.grid)) throw GridMismatch("free_energy: measure and potential grids differ");
  std::vector<double> f(rho.grid.n);
  for (int i = 0; i < rho.grid.n; ++i)
    f[i] = rho.density[i] * (std::log(rho.density[i]) + V.values[i]);
  return trapz(rho.grid, f);
}

PressureField pressure(const GridMeasure& rho, const Potential& V) {
  if (!rho.grid.same_as(V.grid)) throw GridMismatch("pressure: measure and potential grids differ");
  PressureField p;
  p.u.resize(rho.grid.n);
  for (int i = 0; i < rho.grid.n; ++i) p.u[i] = std::log(rho.density[i]) + V.values[i];
  p.du = fd_gradient(rho.grid, p.u);
  return p;
}

}  // namespace otlab
