#pragma once

#include "otlab/costs.hpp"
#include "otlab/grid.hpp"

namespace otlab {

// Monotone rearrangement T = Quantile_nu ∘ CDF_mu at the grid nodes, with
// piecewise-linear CDF and quantile interpolation. Exact identity when
// mu == nu nodewise.
std::vector<double> optimal_map(const GridMeasure& mu, const GridMeasure& nu);

// ∫_0^1 h(Q_mu(p) - Q_nu(p)) dp by trapezoid on the union of both CDF images.
// Equals ∫ h(x - T(x)) dmu up to the same discretization and is exactly
// symmetric in (mu, nu) for even costs.
double transport_cost(const GridMeasure& mu, const GridMeasure& nu, const RadialProfile& h);

// Optimality derivative psi'(x_i) = kappa'(|x_i - T_i|) sgn(x_i - T_i).
std::vector<double> potential_derivative(const Grid& g, const std::vector<double>& T,
                                         const RadialProfile& h);

// Discrete c-transform out_j = min_i [ h(x_i - x_j) - psi_i ]; O(n^2) kernel,
// parallel with a serial reference path.
std::vector<double> c_transform(const Grid& g, const std::vector<double>& psi,
                                const RadialProfile& h);

struct PotentialPair {
  std::vector<double> psi;  // source side, tightened to a c-concave pair
  std::vector<double> phi;  // target side
  double cost = 0.0;
  double duality_gap = 0.0;  // cost - (∫ psi dmu + ∫ phi dnu)
  double gap_tol = 0.0;
};

// psi integrates the optimality derivative from the monotone map, then the
// pair is tightened by a double c-transform so psi_i + phi_j <= h(x_i - x_j)
// holds exactly on the grid. Throws DualityGapError when |gap| exceeds
// gap_tol (default max(1e-4, 10 dx^2) * (1 + cost)).
PotentialPair kantorovich_potentials(const GridMeasure& mu, const GridMeasure& nu,
                                     const RadialProfile& h, double gap_tol = 0.0);

// ∫ H'(|psi'|) sgn(psi') mu' dx + ∫ H'(|phi'|) sgn(phi') nu' dx with
// finite-difference density gradients and the optimality derivatives of both
// potentials; nonnegative up to discretization.
double five_gradients_value(const GridMeasure& mu, const GridMeasure& nu,
                            const RadialProfile& H, const RadialProfile& h);

struct TransportSolution {
  std::vector<double> map;
  PotentialPair potentials;
  double cost = 0.0;
};

TransportSolution solve_transport(const GridMeasure& mu, const GridMeasure& nu,
                                  const RadialProfile& h, double gap_tol = 0.0);

double default_gap_tol(double dx, double cost);

}  // namespace otlab
