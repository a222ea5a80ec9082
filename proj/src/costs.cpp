#include "otlab/costs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "otlab/errors.hpp"

namespace otlab {

namespace {

// Fast paths for the exponents that dominate the hot transport loops.
double pow_by(double r, double p) {
  if (p == 2.0) return r * r;
  if (p == 3.0) return r * r * r;
  if (p == 4.0) {
    const double r2 = r * r;
    return r2 * r2;
  }
  if (p == 1.5) return r * std::sqrt(r);
  return std::pow(r, p);
}

struct TableData {
  std::vector<double> r, k;
  std::vector<double> slope;  // segment slopes, size m-1
  std::vector<double> dk;     // nodal derivative estimates, size m
};

using TablePtr = std::shared_ptr<const TableData>;

TablePtr make_table_data(std::vector<double> r, std::vector<double> k) {
  const std::size_t m = r.size();
  if (m < 8 || k.size() != m) throw DomainError("table profile needs at least 8 (r, kappa) nodes");
  if (r.front() != 0.0) throw DomainError("table profile must start at r = 0");
  if (std::abs(k.front()) > 1e-12) throw DomainError("table profile must have kappa(0) = 0");
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (!(r[i + 1] > r[i])) throw DomainError("table profile abscissae must be strictly increasing");
  }
  for (double v : k) {
    if (!std::isfinite(v)) throw DomainError("table profile values must be finite");
  }
  auto d = std::make_shared<TableData>();
  d->r = std::move(r);
  d->k = std::move(k);
  d->slope.resize(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) d->slope[i] = (d->k[i + 1] - d->k[i]) / (d->r[i + 1] - d->r[i]);
  d->dk.resize(m);
  d->dk.front() = d->slope.front();
  d->dk.back() = d->slope.back();
  for (std::size_t i = 1; i + 1 < m; ++i) d->dk[i] = 0.5 * (d->slope[i - 1] + d->slope[i]);
  return d;
}

double table_eval(const TableData& d, double x) {
  if (x >= d.r.back()) return d.k.back() + d.slope.back() * (x - d.r.back());
  const std::size_t j = bracket_index(d.r, x);
  return d.k[j] + d.slope[j] * (x - d.r[j]);
}

double table_deval(const TableData& d, double x) {
  if (x >= d.r.back()) return d.dk.back();
  if (x <= d.r.front()) return d.dk.front();
  return pl_interp(d.r, d.dk, x);
}

// Inverse of the nodal derivative estimate: maps slopes back to radii.
double table_dinv(const TableData& d, double s) {
  if (s <= d.dk.front()) return d.r.front();
  if (s >= d.dk.back()) {
    const std::size_t m = d.dk.size();
    const double run = d.dk[m - 1] - d.dk[m - 2];
    if (run <= 0.0) return d.r.back();
    return d.r.back() + (s - d.dk.back()) * (d.r[m - 1] - d.r[m - 2]) / run;
  }
  return std::max(0.0, pl_interp(d.dk, d.r, s));
}

// Exact PL conjugate: breakpoints at the segment slopes, value r_j s_j - k_j,
// zero on [0, slope_0] when the first slope is positive.
TablePtr dual_table_data(const TableData& d) {
  const std::size_t m = d.r.size();
  for (std::size_t i = 0; i + 1 < d.slope.size(); ++i) {
    const double scale = 1.0 + std::abs(d.slope[i]) + std::abs(d.slope[i + 1]);
    if (d.slope[i + 1] - d.slope[i] <= -1e-12 * scale)
      throw ConvexityViolation(d.r[i], d.r[i + 1], d.r[i + 2]);
  }
  std::vector<double> s, v;
  s.reserve(m);
  v.reserve(m);
  if (d.slope.front() > 1e-14 * (1.0 + std::abs(d.slope.back()))) {
    s.push_back(0.0);
    v.push_back(0.0);
  }
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double sj = d.slope[j];
    if (!s.empty() && sj <= s.back()) continue;  // merge machine-level flat segments
    s.push_back(sj);
    v.push_back(d.r[j] * sj - d.k[j]);
  }
  if (s.size() < 8) throw DomainError("conjugate table degenerates to fewer than 8 nodes");
  return make_table_data(std::move(s), std::move(v));
}

RadialProfile profile_from_table(TablePtr data, std::string name) {
  RadialProfile c;
  c.analytic = false;
  c.r_max = data->r.back();
  c.name = std::move(name);
  c.kappa = [data](double x) { return table_eval(*data, x); };
  c.dkappa = [data](double x) { return table_deval(*data, x); };
  TablePtr dual;
  try {
    dual = dual_table_data(*data);
  } catch (const Error&) {
    c.conj_error = std::current_exception();  // surfaces on conjugate(), reported otherwise
    dual = nullptr;
  }
  if (dual) {
    c.conj = [dual](double s) { return table_eval(*dual, s); };
    c.dconj = [data](double s) { return table_dinv(*data, s); };
  }
  return c;
}

}  // namespace

RadialProfile power_profile(double p, double coeff) {
  if (!(p > 1.0)) throw DomainError("power profile requires p > 1");
  if (!(coeff > 0.0)) throw DomainError("power profile requires a positive coefficient");
  const double q = p / (p - 1.0);
  const double cc = (p - 1.0) * std::pow(coeff, 1.0 - q) * std::pow(p, -q);
  RadialProfile c;
  c.analytic = true;
  c.r_max = 0.0;
  c.name = "power(p=" + std::to_string(p) + ")";
  c.kappa = [coeff, p](double r) { return coeff * pow_by(r, p); };
  c.dkappa = [coeff, p](double r) { return coeff * p * pow_by(r, p - 1.0); };
  c.conj = [cc, q](double s) { return cc * pow_by(s, q); };
  c.dconj = [cc, q](double s) { return cc * q * pow_by(s, q - 1.0); };
  return c;
}

RadialProfile power_profile(double p) { return power_profile(p, 1.0 / p); }

RadialProfile quadratic_profile() {
  RadialProfile c = power_profile(2.0, 0.5);
  c.name = "quadratic";
  return c;
}

RadialProfile linear_profile(double slope) {
  if (!(slope > 0.0)) throw DomainError("linear profile requires a positive slope");
  RadialProfile c;
  c.analytic = true;
  c.name = "linear";
  c.kappa = [slope](double r) { return slope * r; };
  c.dkappa = [slope](double) { return slope; };
  return c;
}

RadialProfile scaled_profile(double tau, const RadialProfile& inner) {
  if (!(tau > 0.0)) throw DomainError("scaled profile requires tau > 0");
  RadialProfile c;
  c.analytic = inner.analytic;
  c.r_max = inner.r_max * tau;
  c.name = "scaled(tau=" + std::to_string(tau) + ", " + inner.name + ")";
  c.conj_error = inner.conj_error;
  const Fn k = inner.kappa, dk = inner.dkappa;
  c.kappa = [tau, k](double r) { return tau * k(r / tau); };
  c.dkappa = [tau, dk](double r) { return dk(r / tau); };
  if (inner.has_conjugate()) {
    const Fn kc = inner.conj, dkc = inner.dconj;
    c.conj = [tau, kc](double s) { return tau * kc(s); };
    c.dconj = [tau, dkc](double s) { return tau * dkc(s); };
  }
  return c;
}

RadialProfile table_profile(std::vector<double> r, std::vector<double> kappa) {
  auto data = make_table_data(std::move(r), std::move(kappa));
  return profile_from_table(data, "table");
}

RadialProfile conjugate(const RadialProfile& c) {
  if (!c.has_conjugate()) {
    if (c.conj_error) std::rethrow_exception(c.conj_error);
    throw DomainError("profile has no Legendre conjugate (not superlinear or not convex)");
  }
  RadialProfile out;
  out.analytic = c.analytic;
  out.name = "conj(" + c.name + ")";
  out.kappa = c.conj;
  out.dkappa = c.dconj;
  out.conj = c.kappa;
  out.dconj = c.dkappa;
  out.r_max = (c.r_max > 0.0 && c.dkappa) ? c.dkappa(c.r_max) : c.r_max;
  return out;
}

double alpha(double z, const CostSystem& sys) {
  const double az = std::abs(z);
  if (az == 0.0) return 0.0;
  if (!sys.h.has_conjugate()) throw DomainError("alpha: cost has no conjugate");
  const double dc = sys.h.dconj(az);
  if (!(dc > 0.0)) throw DomainError("alpha: (h*)' is not positive at z > 0");
  return std::abs(sys.H.dkappa(az)) / dc;
}

CostAxiomReport verify_cost_axioms(const RadialProfile& c, double r_max, int samples) {
  if (!(r_max > 0.0)) throw DomainError("verify_cost_axioms requires r_max > 0");
  if (samples < 64) samples = 64;
  std::vector<double> k(samples);
  double kscale = 0.0;
  const double dr = r_max / double(samples - 1);
  for (int i = 0; i < samples; ++i) {
    k[i] = c.kappa(dr * double(i));
    kscale = std::max(kscale, std::abs(k[i]));
  }

  CostAxiomReport rep;
  rep.zero_at_zero = std::abs(k[0]) <= 1e-12 * (1.0 + kscale);

  double d2_min = std::numeric_limits<double>::infinity();
  for (int i = 1; i + 1 < samples; ++i) d2_min = std::min(d2_min, k[i - 1] - 2.0 * k[i] + k[i + 1]);
  rep.convexity_margin = d2_min;
  rep.strictly_convex = d2_min > 1e-12 * (1.0 + kscale);

  double sl_min = std::numeric_limits<double>::infinity();
  double gscale = 0.0;
  for (int i = samples / 2; i + 1 < samples; ++i) {
    const double gi = k[i] / (dr * double(i));
    const double gn = k[i + 1] / (dr * double(i + 1));
    sl_min = std::min(sl_min, gn - gi);
    gscale = std::max(gscale, std::abs(gn));
  }
  rep.superlinearity_margin = sl_min;
  rep.superlinear = sl_min > 1e-12 * (1.0 + gscale);
  return rep;
}

}  // namespace otlab
