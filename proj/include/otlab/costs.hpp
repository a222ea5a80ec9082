#pragma once

#include <exception>
#include <string>
#include <vector>

#include "otlab/numerics.hpp"

namespace otlab {

// Radial profile kappa: [0, inf) -> [0, inf), kappa(0) = 0, with its first
// derivative and (when superlinear) its Legendre conjugate pair. Costs act on
// displacements as h(z) = kappa(|z|); the same type carries Fisher weights H
// and Young partners L.
struct RadialProfile {
  Fn kappa;
  Fn dkappa;  // kappa'
  Fn conj;    // kappa*; empty when the profile is not superlinear
  Fn dconj;   // (kappa*)' = (kappa')^{-1}
  bool analytic = true;
  double r_max = 0.0;  // sampling range used by checks and table profiles
  std::string name;
  std::exception_ptr conj_error;  // why the conjugate is missing, when it is

  double operator()(double r) const { return kappa(r); }
  bool has_conjugate() const { return static_cast<bool>(conj); }
};

RadialProfile quadratic_profile();                    // r^2 / 2, self-conjugate
RadialProfile power_profile(double p);                // r^p / p, p > 1
RadialProfile power_profile(double p, double coeff);  // coeff * r^p
RadialProfile linear_profile(double slope);           // slope * r, no conjugate

// tau * inner(r / tau); conjugate scales as tau * inner*(s).
RadialProfile scaled_profile(double tau, const RadialProfile& inner);

// Piecewise-linear profile through (r_i, kappa_i); r strictly increasing from 0,
// kappa[0] = 0, at least 8 nodes. Evaluation extends linearly past r.back().
RadialProfile table_profile(std::vector<double> r, std::vector<double> kappa);

// Exact Legendre transform. Analytic profiles swap (kappa, kappa*). A table
// profile conjugates to the piecewise-linear function whose breakpoints are
// the segment slopes s_j, with kappa*(s_j) = r_j s_j - kappa(r_j); this
// biconjugates back to the original node values exactly. Throws
// ConvexityViolation for non-convex tables, DomainError when no conjugate
// exists (linear growth).
RadialProfile conjugate(const RadialProfile& c);

struct CostSystem {
  RadialProfile h;  // transport cost
  RadialProfile H;  // Fisher weight
  RadialProfile L;  // Young partner in the dissipation criterion
};

// alpha(z) = |H'(|z|)| / (h*)'(|z|), alpha(0) = 0.
double alpha(double z, const CostSystem& sys);

struct CostAxiomReport {
  bool zero_at_zero = false;
  bool strictly_convex = false;
  bool superlinear = false;
  double convexity_margin = 0.0;      // min second difference over the sample
  double superlinearity_margin = 0.0;  // min increment of kappa(r)/r on the tail
  bool all_ok() const { return zero_at_zero && strictly_convex && superlinear; }
};

// Samples kappa on [0, r_max] and checks kappa(0) = 0, strict convexity
// (positive second differences) and superlinearity (kappa(r)/r increasing on
// the tail). Reported, never thrown.
CostAxiomReport verify_cost_axioms(const RadialProfile& c, double r_max, int samples = 2048);

}  // namespace otlab
