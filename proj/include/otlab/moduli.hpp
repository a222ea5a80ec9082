#pragma once

#include <string>
#include <vector>

#include "otlab/grid.hpp"
#include "otlab/numerics.hpp"

namespace otlab {

enum class ModulusKind { convexity, monotonicity };

// Nonnegative profile on t >= 0 used as a convexity modulus sigma (Bregman
// lower bound) or a monotonicity modulus omega (gradient pairing lower bound).
struct Modulus {
  Fn value;
  ModulusKind kind = ModulusKind::convexity;
  std::string name;

  double operator()(double t) const { return value(t); }
};

Modulus power_modulus(double p, double coeff, ModulusKind kind);
Modulus table_modulus(std::vector<double> r, std::vector<double> values, ModulusKind kind);

struct ModulusReport {
  bool valid = false;
  double min_margin = 0.0;
  double witness_x = 0.0;
  double witness_y = 0.0;
  long long pairs_checked = 0;
};

// Scans grid pairs (x, y), x != y, for
//   convexity:    V(x) - V(y) - V'(y)(x - y) - sigma(|x - y|)
//   monotonicity: (V'(x) - V'(y))(x - y)     - omega(|x - y|)
// and reports the worst margin with its witness pair. Pairs are strided
// deterministically down to roughly pair_samples evaluations; valid means
// min_margin >= -1e-12 * (1 + |V| and slope scales).
ModulusReport verify_modulus(const Potential& V, const Modulus& m, long long pair_samples = 250000);

// C(p) = min over t in [-1, 0] of (1/p)|t+1|^p - (1/p)|t|^p - |t|^{p-2} t,
// and its minimizer t_p (convention t_2 = -1/2, where the function is flat).
// Requires p >= 2; C(p) >= 2^{2-p}/p always.
double ppower_C(double p);
double ppower_tp(double p);

}  // namespace otlab
