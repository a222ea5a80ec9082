#pragma once

#include <functional>
#include <vector>

namespace otlab {

using Fn = std::function<double(double)>;

std::vector<double> linspace(double a, double b, int n);

// n log-spaced points on [lo, hi], lo > 0.
std::vector<double> logspace(double lo, double hi, int n);

// Piecewise-linear interpolation of (xs, ys) with linear extrapolation using
// the boundary segment slopes. xs must be strictly increasing.
double pl_interp(const std::vector<double>& xs, const std::vector<double>& ys, double x);

// Largest index j with xs[j] <= x, clamped to [0, xs.size() - 2].
std::size_t bracket_index(const std::vector<double>& xs, double x);

struct ScalarMin {
  double x;
  double value;
};

// Coarse grid scan followed by golden-section refinement of the best bracket.
// Robust for continuous f with an interior or boundary minimum.
ScalarMin minimize_scalar(const Fn& f, double a, double b, int scan_points = 4097,
                          double x_tol = 1e-13);

// Root of a continuous sign-changing function by bisection. Requires
// f(a) and f(b) of opposite sign (zero counts as either).
double bisect_root(const Fn& f, double a, double b, double x_tol = 1e-14);

// Inverse of a strictly increasing function on [a, b] by bisection.
double invert_increasing(const Fn& f, double y, double a, double b, double x_tol = 1e-14);

// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
double adaptive_simpson(const Fn& f, double a, double b, double tol = 1e-12);

}  // namespace otlab
