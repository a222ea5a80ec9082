#include "otlab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "otlab/errors.hpp"
#include "otlab/parallel.hpp"

namespace otlab {

namespace {

constexpr double kCriterionSlack = 1e-10;

void finish_scan(CriterionReport& rep) {
  rep.worst_margin = std::numeric_limits<double>::infinity();
  rep.worst_z = rep.z.empty() ? 0.0 : rep.z.front();
  for (std::size_t i = 0; i < rep.z.size(); ++i) {
    if (rep.margin[i] < rep.worst_margin) {
      rep.worst_margin = rep.margin[i];
      rep.worst_z = rep.z[i];
    }
  }
}

}  // namespace

CriterionReport theorem_criterion(const CostSystem& sys, const Modulus& sigma,
                                  const Modulus& omega, double z_max, int n_z) {
  if (!(z_max > 0.0)) throw DomainError("theorem_criterion requires z_max > 0");
  if (n_z < 16) throw DomainError("theorem_criterion requires n_z >= 16");
  if (!sys.h.has_conjugate() || !sys.L.has_conjugate())
    throw DomainError("theorem_criterion: cost and Young partner must be superlinear");
  if (sigma.kind != ModulusKind::convexity || omega.kind != ModulusKind::monotonicity)
    throw DomainError("theorem_criterion: modulus kinds are swapped");

  CriterionReport rep;
  rep.z = logspace(1e-6 * z_max, z_max, n_z);
  rep.lhs.resize(n_z);
  rep.rhs.resize(n_z);
  rep.margin.resize(n_z);
  par::for_each_index(std::size_t(n_z), [&](std::size_t i) {
    const double z = rep.z[i];
    const double v = sys.h.dconj(z);
    const double lhs = sys.L.kappa(z) + sys.L.conj(v);
    const double rhs = sigma.value(v) + alpha(z, sys) * omega.value(v);
    rep.lhs[i] = lhs;
    rep.rhs[i] = rhs;
    rep.margin[i] = rhs - lhs;
  });
  finish_scan(rep);
  rep.passed = rep.worst_margin >= -kCriterionSlack;
  return rep;
}

CriterionReport simpler_condition(const RadialProfile& h, const Modulus& sigma,
                                  const Modulus& omega, double z_max, int n_z) {
  if (!(z_max > 0.0)) throw DomainError("simpler_condition requires z_max > 0");
  if (n_z < 16) throw DomainError("simpler_condition requires n_z >= 16");
  if (sigma.kind != ModulusKind::convexity || omega.kind != ModulusKind::monotonicity)
    throw DomainError("simpler_condition: modulus kinds are swapped");

  CriterionReport rep;
  rep.z = logspace(1e-6 * z_max, z_max, n_z);
  rep.lhs.resize(n_z);
  rep.rhs.resize(n_z);
  rep.margin.resize(n_z);

  double C = 0.0;
  bool feasible = true;
  for (int i = 0; i < n_z; ++i) {
    const double z = rep.z[i];
    const double need = h.dkappa(z) * z - sigma.value(z);
    rep.lhs[i] = h.dkappa(z) * z;
    if (need <= 0.0) continue;
    const double w = omega.value(z);
    if (w <= 0.0) {
      if (need > kCriterionSlack) feasible = false;
      continue;
    }
    C = std::max(C, need / w);
  }
  for (int i = 0; i < n_z; ++i) {
    rep.rhs[i] = sigma.value(rep.z[i]) + C * omega.value(rep.z[i]);
    rep.margin[i] = rep.rhs[i] - rep.lhs[i];
  }
  finish_scan(rep);
  rep.constant = C;
  rep.lsi_constant = 1.0 + C;
  rep.passed = feasible;
  return rep;
}

ThetaLsiReport radial_theta_lsi(const Fn& theta, double t_max, const Modulus& sigma,
                                const Modulus& omega, double C, int n_t) {
  if (!(t_max > 0.0)) throw DomainError("radial_theta_lsi requires t_max > 0");
  if (n_t < 16) throw DomainError("radial_theta_lsi requires n_t >= 16");
  if (C < 0.0) throw DomainError("radial_theta_lsi requires C >= 0");
  if (std::abs(theta(0.0)) > 1e-12) throw DomainError("radial_theta_lsi: theta(0) must be 0");

  ThetaLsiReport rep;
  rep.t = linspace(0.0, t_max, n_t);

  for (int i = 0; i + 1 < n_t; ++i) {
    if (!(theta(rep.t[i + 1]) > theta(rep.t[i])))
      throw DomainError("radial_theta_lsi: theta must be strictly increasing");
  }

  rep.hypothesis_worst = std::numeric_limits<double>::infinity();
  for (int i = 1; i < n_t; ++i) {
    const double t = rep.t[i];
    rep.hypothesis_worst =
        std::min(rep.hypothesis_worst, sigma.value(t) + C * omega.value(t) - theta(t));
  }
  rep.hypothesis_ok = rep.hypothesis_worst >= -kCriterionSlack;
  rep.lsi_constant = 1.0 + C;

  // Upper bracket for the inverse nu = theta^{-1} on [0, t_max].
  double x_hi = t_max;
  while (theta(x_hi) < t_max) x_hi *= 2.0;

  auto nu = [&](double s) {
    if (s <= 0.0) return 0.0;
    return invert_increasing(theta, s, 0.0, x_hi, 1e-14 * x_hi);
  };

  // Route A: cumulative quadrature of nu on a cubically graded refinement,
  // which keeps the error controlled through the s -> 0 singularity of nu.
  const int refine = 8;
  const int m = refine * (n_t - 1);
  std::vector<double> s_fine(m + 1), nu_fine(m + 1);
  for (int j = 0; j <= m; ++j) {
    const double u = double(j) / double(m);
    s_fine[j] = t_max * u * u * u;
    nu_fine[j] = nu(s_fine[j]);
  }
  std::vector<double> l_fine(m + 1, 0.0);
  for (int j = 1; j <= m; ++j)
    l_fine[j] = l_fine[j - 1] + 0.5 * (s_fine[j] - s_fine[j - 1]) * (nu_fine[j] + nu_fine[j - 1]);

  rep.l.resize(n_t);
  rep.l[0] = 0.0;
  for (int i = 1; i < n_t; ++i) rep.l[i] = pl_interp(s_fine, l_fine, rep.t[i]);

  // Route B: l(t) = t nu(t) - kappa(nu(t)) with kappa = ∫_0^x theta.
  rep.conj_consistency = 0.0;
  for (int i = 1; i < n_t; ++i) {
    const double t = rep.t[i];
    const double x = nu(t);
    const double kap = adaptive_simpson(theta, 0.0, x, 1e-13);
    const double lb = t * x - kap;
    rep.conj_consistency = std::max(rep.conj_consistency, std::abs(lb - rep.l[i]));
  }
  rep.consistent = rep.conj_consistency <= 1e-6;

  auto ts = std::make_shared<std::vector<double>>(rep.t);
  auto ls = std::make_shared<std::vector<double>>(rep.l);
  rep.l_profile.analytic = false;
  rep.l_profile.r_max = t_max;
  rep.l_profile.name = "theta-lsi weight";
  rep.l_profile.kappa = [ts, ls](double t) {
    if (t <= 0.0) return 0.0;
    return pl_interp(*ts, *ls, t);
  };
  rep.l_profile.dkappa = [theta, x_hi](double t) {
    if (t <= 0.0) return 0.0;
    return invert_increasing(theta, t, 0.0, x_hi, 1e-14 * x_hi);
  };
  rep.l_profile.conj = [theta](double x) {
    if (x <= 0.0) return 0.0;
    return adaptive_simpson(theta, 0.0, x, 1e-13);
  };
  rep.l_profile.dconj = [theta](double x) { return theta(std::max(0.0, x)); };
  return rep;
}

double lsi_gap(const std::vector<double>& g_values, const GridMeasure& eta,
               const RadialProfile& G) {
  const Grid& grid = eta.grid;
  if (int(g_values.size()) != grid.n) throw GridMismatch("lsi_gap: test density size mismatch");
  for (double v : g_values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("lsi_gap: test density must be positive");
  }
  std::vector<double> geta(grid.n);
  for (int i = 0; i < grid.n; ++i) geta[i] = g_values[i] * eta.density[i];
  const double z = trapz(grid, geta);
  std::vector<double> g(grid.n), lg(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    g[i] = g_values[i] / z;
    lg[i] = std::log(g[i]);
  }
  const std::vector<double> dlg = fd_gradient(grid, lg);
  std::vector<double> f(grid.n);
  for (int i = 0; i < grid.n; ++i)
    f[i] = eta.density[i] * g[i] * (G.kappa(std::abs(dlg[i])) - lg[i]);
  return trapz(grid, f);
}

LsiLimitReport classical_lsi_limit(double Lambda, std::vector<double> taus,
                                   const std::vector<TestDensity>& family) {
  if (!(Lambda > 0.0)) throw DomainError("classical_lsi_limit requires Lambda > 0");
  if (taus.empty() || family.empty())
    throw DomainError("classical_lsi_limit requires taus and a test family");
  for (double t : taus) {
    if (!(t > 0.0)) throw DomainError("classical_lsi_limit: taus must be positive");
  }
  std::sort(taus.begin(), taus.end(), std::greater<double>());

  const Grid grid = Grid::uniform(-8.0, 8.0, 2049);
  std::vector<double> vraw(grid.n), vgrad(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    vraw[i] = 0.5 * Lambda * grid.x[i] * grid.x[i];
    vgrad[i] = Lambda * grid.x[i];
  }
  const GibbsPair gibbs = make_gibbs(grid, vraw, vgrad);

  LsiLimitReport rep;
  rep.Lambda = Lambda;
  rep.minimal_A = 1.0 / (2.0 * Lambda);
  rep.taus = taus;

  const RadialProfile G_quad = power_profile(2.0, rep.minimal_A);

  for (const TestDensity& td : family) {
    LsiLimitRow row;
    row.g_name = td.name;
    std::vector<double> g(grid.n), lg(grid.n), geta(grid.n);
    for (int i = 0; i < grid.n; ++i) g[i] = td.g(grid.x[i]);
    for (int i = 0; i < grid.n; ++i) geta[i] = g[i] * gibbs.eta.density[i];
    const double z = trapz(grid, geta);
    for (int i = 0; i < grid.n; ++i) {
      g[i] /= z;
      lg[i] = std::log(g[i]);
    }
    row.quad_gap = lsi_gap(g, gibbs.eta, G_quad);

    const std::vector<double> dlg = fd_gradient(grid, lg);
    std::vector<double> kin(grid.n);
    for (int i = 0; i < grid.n; ++i)
      kin[i] = gibbs.eta.density[i] * g[i] * 0.5 * dlg[i] * dlg[i];
    row.kinetic = trapz(grid, kin);

    row.excess.reserve(taus.size());
    for (double tau : taus) row.excess.push_back(row.quad_gap + tau * row.kinetic);
    rep.rows.push_back(std::move(row));
  }

  rep.monotone_ok = true;
  rep.converged_ok = true;
  for (const LsiLimitRow& row : rep.rows) {
    for (std::size_t j = 1; j < row.excess.size(); ++j) {
      if (row.excess[j] > row.excess[j - 1] + 1e-14) rep.monotone_ok = false;
    }
    if (std::abs(row.excess.back() - row.quad_gap) > 1e-3) rep.converged_ok = false;
  }

  // The minimal Fisher weight: the criterion holds at A = 1/(2 Lambda) for
  // every tau and fails just below it once tau is small.
  const double tau_probe = 0.01;
  const Modulus sig = power_modulus(2.0, 0.5 * Lambda, ModulusKind::convexity);
  const Modulus omg = power_modulus(2.0, Lambda, ModulusKind::monotonicity);
  auto criterion_at = [&](double A) {
    CostSystem sys;
    sys.h = scaled_profile(tau_probe, quadratic_profile());
    sys.H = power_profile(2.0, A);
    sys.L = conjugate(sys.h);
    return theorem_criterion(sys, sig, omg, 10.0, 512).passed;
  };
  rep.minimal_A_verified = criterion_at(rep.minimal_A) && !criterion_at(0.9 * rep.minimal_A);
  return rep;
}

}  // namespace otlab
