#pragma once

#include <stdexcept>
#include <string>

namespace otlab {

// Hard failures surface as exceptions rooted here. Verification routines
// (axiom checks, modulus scans, criteria) return reports instead of throwing.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent experiment configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Two objects living on different grids were combined.
struct GridMismatch : Error {
  using Error::Error;
};

// Parameter outside the admissible range (p < 2, negative tau, ...).
struct DomainError : Error {
  using Error::Error;
};

// A profile that must be convex has a negative second difference.
struct ConvexityViolation : Error {
  double r_lo, r_mid, r_hi;
  ConvexityViolation(double lo, double mid, double hi)
      : Error("convexity violation on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        r_lo(lo), r_mid(mid), r_hi(hi) {}
};

// Kantorovich duality gap exceeded its certificate tolerance.
struct DualityGapError : Error {
  double gap, tol;
  DualityGapError(double g, double t)
      : Error("duality gap " + std::to_string(g) + " exceeds tolerance " + std::to_string(t)),
        gap(g), tol(t) {}
};

// The JKO inner iteration failed to converge after all relaxation restarts,
// or its solution failed a post-hoc certificate.
struct SolverFailure : Error {
  enum class Kind { divergence, objective, oracle };
  double residual;
  int step;
  Kind kind;
  SolverFailure(const std::string& what, double res, int step_index = -1,
                Kind k = Kind::divergence)
      : Error(what), residual(res), step(step_index), kind(k) {}
};

}  // namespace otlab
