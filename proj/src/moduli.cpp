#include "otlab/moduli.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "otlab/errors.hpp"
#include "otlab/parallel.hpp"

namespace otlab {

Modulus power_modulus(double p, double coeff, ModulusKind kind) {
  if (!(p > 0.0)) throw DomainError("modulus requires p > 0");
  if (coeff < 0.0) throw DomainError("modulus requires a nonnegative coefficient");
  Modulus m;
  m.kind = kind;
  m.name = "power(p=" + std::to_string(p) + ", c=" + std::to_string(coeff) + ")";
  m.value = [p, coeff](double t) {
    if (t <= 0.0) return 0.0;
    if (p == 2.0) return coeff * t * t;
    if (p == 3.0) return coeff * t * t * t;
    return coeff * std::pow(t, p);
  };
  return m;
}

Modulus table_modulus(std::vector<double> r, std::vector<double> values, ModulusKind kind) {
  if (r.size() < 2 || r.size() != values.size())
    throw DomainError("table modulus needs matching (r, value) nodes");
  if (r.front() != 0.0 || std::abs(values.front()) > 1e-14)
    throw DomainError("table modulus must vanish at 0");
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    if (!(r[i + 1] > r[i])) throw DomainError("table modulus abscissae must increase");
  }
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("table modulus values must be nonnegative");
  }
  auto xs = std::make_shared<std::vector<double>>(std::move(r));
  auto ys = std::make_shared<std::vector<double>>(std::move(values));
  Modulus m;
  m.kind = kind;
  m.name = "table";
  m.value = [xs, ys](double t) {
    if (t <= 0.0) return 0.0;
    return std::max(0.0, pl_interp(*xs, *ys, t));
  };
  return m;
}

ModulusReport verify_modulus(const Potential& V, const Modulus& m, long long pair_samples) {
  if (pair_samples < 1000) throw DomainError("verify_modulus requires at least 1000 pair samples");
  const Grid& g = V.grid;
  const long long n = g.n;
  const long long total = n * n;
  const long long stride = std::max(1LL, total / pair_samples);
  const std::size_t count = std::size_t((total + stride - 1) / stride);

  double vscale = 0.0;
  for (double v : V.values) vscale = std::max(vscale, std::abs(v));
  const double scale = 1.0 + vscale + V.lip() * g.length();

  const bool convexity = m.kind == ModulusKind::convexity;
  auto margin_at = [&](std::size_t idx) {
    const long long f = (long long)idx * stride;
    const long long i = f / n, j = f % n;
    if (i == j) return std::numeric_limits<double>::infinity();
    const double x = g.x[i], y = g.x[j];
    const double d = x - y;
    double lhs;
    if (convexity) {
      lhs = V.values[i] - V.values[j] - V.gradient[j] * d;
    } else {
      lhs = (V.gradient[i] - V.gradient[j]) * d;
    }
    return lhs - m.value(std::abs(d));
  };

  const par::MinLoc worst = par::min_scan(count, margin_at);
  ModulusReport rep;
  rep.pairs_checked = (long long)count;
  rep.min_margin = worst.value;
  const long long f = (long long)worst.index * stride;
  rep.witness_x = g.x[f / n];
  rep.witness_y = g.x[f % n];
  rep.valid = worst.value >= -1e-12 * scale;
  return rep;
}

namespace {

// (1/p)|t+1|^p - (1/p)|t|^p - |t|^{p-2} t on [-1, 0], written for t <= 0.
double ppower_objective(double p, double t) {
  const double a = 1.0 + t;   // in [0, 1]
  const double mt = -t;       // in [0, 1]
  return (std::pow(a, p) - std::pow(mt, p)) / p + std::pow(mt, p - 1.0);
}

// Stationarity: (1+t)^{p-1} + (-t)^{p-1} - (p-1)(-t)^{p-2} on (-1, 0).
double ppower_stationarity(double p, double t) {
  const double a = 1.0 + t;
  const double mt = -t;
  return std::pow(a, p - 1.0) + std::pow(mt, p - 1.0) - (p - 1.0) * std::pow(mt, p - 2.0);
}

}  // namespace

double ppower_C(double p) {
  if (!(p >= 2.0)) throw DomainError("ppower_C requires p >= 2");
  if (p == 2.0) return 0.5;
  auto f = [p](double t) { return ppower_objective(p, t); };
  return minimize_scalar(f, -1.0, 0.0).value;
}

double ppower_tp(double p) {
  if (!(p >= 2.0)) throw DomainError("ppower_tp requires p >= 2");
  if (p == 2.0) return -0.5;
  auto s = [p](double t) { return ppower_stationarity(p, t); };
  return bisect_root(s, -1.0 + 1e-15, -1e-15, 1e-14);
}

}  // namespace otlab
