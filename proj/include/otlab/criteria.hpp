#pragma once

#include <functional>
#include <string>

#include "otlab/diagnostics.hpp"

namespace otlab {

struct CriterionReport {
  std::vector<double> z;  // scan grid, log-spaced on [1e-6 z_max, z_max]
  std::vector<double> lhs, rhs, margin;
  double worst_margin = 0.0;
  double worst_z = 0.0;
  bool passed = false;
  double constant = 0.0;      // the C found by simpler_condition, else 0
  double lsi_constant = 0.0;  // 1 + C when applicable
};

// Pointwise dissipation criterion
//   L(z) + L*(v) <= sigma(v) + alpha(z) omega(v),  v = (h*)'(z),
// scanned on a log grid; passed iff worst margin >= -1e-10.
CriterionReport theorem_criterion(const CostSystem& sys, const Modulus& sigma,
                                  const Modulus& omega, double z_max, int n_z = 4096);

// Least C >= 0 with kappa'(z) z <= sigma(z) + C omega(z) on the scan; the
// induced LSI constant is 1 + C. passed = false when no finite C works
// (omega vanishes where the left side exceeds sigma).
CriterionReport simpler_condition(const RadialProfile& h, const Modulus& sigma,
                                  const Modulus& omega, double z_max, int n_z = 4096);

struct ThetaLsiReport {
  bool hypothesis_ok = false;  // sigma + C omega >= theta on the scan
  double hypothesis_worst = 0.0;
  double conj_consistency = 0.0;  // sup |l via quadrature - l via conjugate|
  bool consistent = false;        // conj_consistency <= 1e-6
  std::vector<double> t, l;       // l(t) = ∫_0^t theta^{-1}(s) ds
  RadialProfile l_profile;        // kappa = l, (kappa*)' = theta
  double lsi_constant = 0.0;      // 1 + C
};

// Entropy weight l with l' = theta^{-1} built by two independent routes: a
// graded-grid quadrature of the inverted theta, and the conjugate formula
// l(t) = t nu(t) - kappa(nu(t)) with kappa = ∫ theta. theta must be strictly
// increasing with theta(0) = 0.
ThetaLsiReport radial_theta_lsi(const Fn& theta, double t_max, const Modulus& sigma,
                                const Modulus& omega, double C, int n_t = 1025);

// ∫ G(|(log g)'|) g deta - ∫ g log g deta; g is renormalized so ∫ g deta = 1.
double lsi_gap(const std::vector<double>& g_values, const GridMeasure& eta,
               const RadialProfile& G);

struct TestDensity {
  std::string name;
  std::function<double(double)> g;  // unnormalized positive density against eta
};

struct LsiLimitRow {
  std::string g_name;
  double quad_gap = 0.0;  // gap with G = r^2/(2 Lambda)
  double kinetic = 0.0;   // ∫ h*(|(log g)'|) g deta with h* = r^2/2
  std::vector<double> excess;  // gap with G_tau = (A + tau/2) r^2, one per tau
};

struct LsiLimitReport {
  double Lambda = 0.0;
  double minimal_A = 0.0;          // 1/(2 Lambda)
  bool minimal_A_verified = false;  // criterion passes at A and fails at 0.9 A
  std::vector<double> taus;
  std::vector<LsiLimitRow> rows;
  bool monotone_ok = false;   // excess nonincreasing as tau decreases
  bool converged_ok = false;  // |excess(tau_min) - quad_gap| <= 1e-3 per row
};

// Gaussian-limit study on V = Lambda x^2 / 2 over [-8, 8]: the tau-dependent
// certificate excess decomposes as quad_gap + tau * kinetic and must collapse
// to the G = r^2/(2 Lambda) evaluation as tau -> 0.
LsiLimitReport classical_lsi_limit(double Lambda, std::vector<double> taus,
                                   const std::vector<TestDensity>& family);

}  // namespace otlab
