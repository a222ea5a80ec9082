#pragma once

#include <vector>

namespace otlab {

// Uniform 1D grid on [a, b]. Every measure, potential and transport object in
// the library lives on one of these; mixing grids is a hard error.
struct Grid {
  double a = 0.0;
  double b = 1.0;
  int n = 0;
  double dx = 0.0;
  std::vector<double> x;

  static Grid uniform(double a, double b, int n);  // requires a < b, n >= 16
  bool same_as(const Grid& o) const;
  double weight(int i) const { return (i == 0 || i == n - 1) ? 0.5 * dx : dx; }
  double length() const { return b - a; }
};

double trapz(const Grid& g, const std::vector<double>& f);

// Running trapezoid integral, out[0] = 0.
std::vector<double> cumtrapz(const Grid& g, const std::vector<double>& f);

// Second-order gradient: central differences inside, 3-point one-sided at the ends.
std::vector<double> fd_gradient(const Grid& g, const std::vector<double>& f);

// Probability density sampled nodewise: strictly positive, trapezoid mass 1.
// Construction floors raw values at 1e-300 (guard against log(0)) and
// renormalizes; negative or non-finite input is rejected.
struct GridMeasure {
  Grid grid;
  std::vector<double> density;

  static GridMeasure from_values(const Grid& g, std::vector<double> values);
  double mass() const;
  double sup_distance(const GridMeasure& o) const;
  std::vector<double> cdf() const;  // P[0] = 0, P[n-1] = 1
};

// Confining potential on a grid, normalized so that trapz(e^{-V}) = 1.
struct Potential {
  Grid grid;
  std::vector<double> values;
  std::vector<double> gradient;
  double normalization_shift = 0.0;  // amount added to the raw values

  double lip() const;  // max |gradient| over the grid
};

struct GibbsPair {
  Potential V;
  GridMeasure eta;  // e^{-V} after normalization
};

// Normalizes V and builds its Gibbs measure. raw_grad may be empty, in which
// case the gradient is taken by finite differences of raw_values.
GibbsPair make_gibbs(const Grid& g, const std::vector<double>& raw_values,
                     const std::vector<double>& raw_grad = {});

double entropy(const GridMeasure& rho);                           // trapz(rho log rho)
double free_energy(const GridMeasure& rho, const Potential& V);  // entropy + trapz(V rho)

struct PressureField {
  std::vector<double> u;   // log rho + V
  std::vector<double> du;  // finite-difference gradient of u
};

PressureField pressure(const GridMeasure& rho, const Potential& V);

}  // namespace otlab
