#include "otlab/descriptions.hpp"

#include <cmath>
#include <random>

#include "otlab/errors.hpp"

namespace otlab {

namespace {

std::string kind_of(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ConfigError(std::string(what) + ": expected an object with a \"kind\" string");
  return j["kind"].get<std::string>();
}

double num(const json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigError(std::string(what) + ": missing numeric field \"" + key + "\"");
  return j[key].get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(std::string("field \"") + key + "\" must be numeric");
  return j[key].get<double>();
}

std::vector<double> num_array(const json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_array())
    throw ConfigError(std::string(what) + ": missing array field \"" + key + "\"");
  std::vector<double> out;
  out.reserve(j[key].size());
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw ConfigError(std::string(what) + ": array \"" + key + "\" must be numeric");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Grid parse_grid(const json& j) {
  if (!j.is_object()) throw ConfigError("grid: expected an object with a, b, n");
  const double a = num(j, "a", "grid");
  const double b = num(j, "b", "grid");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw ConfigError("grid: missing integer field \"n\"");
  try {
    return Grid::uniform(a, b, j["n"].get<int>());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

GibbsPair gibbs_from_spec(const json& j, const Grid& g) {
  const std::string kind = kind_of(j, "potential");
  std::vector<double> vals(g.n), grad;
  if (kind == "quadratic") {
    const double lam = num(j, "lambda", "potential.quadratic");
    if (!(lam > 0.0)) throw ConfigError("potential.quadratic: lambda must be positive");
    grad.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
      vals[i] = 0.5 * lam * g.x[i] * g.x[i];
      grad[i] = lam * g.x[i];
    }
  } else if (kind == "power") {
    const double p = num(j, "p", "potential.power");
    const double coeff = num_or(j, "coeff", 1.0 / p);
    if (!(p > 1.0)) throw ConfigError("potential.power: requires p > 1");
    grad.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
      const double ax = std::abs(g.x[i]);
      vals[i] = coeff * std::pow(ax, p);
      grad[i] = g.x[i] >= 0.0 ? coeff * p * std::pow(ax, p - 1.0)
                              : -coeff * p * std::pow(ax, p - 1.0);
    }
  } else if (kind == "linear") {
    const double slope = num(j, "slope", "potential.linear");
    grad.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
      vals[i] = slope * g.x[i];
      grad[i] = slope;
    }
  } else if (kind == "table") {
    vals = num_array(j, "values", "potential.table");
    if (int(vals.size()) != g.n)
      throw ConfigError("potential.table: values must have exactly n entries");
  } else {
    throw ConfigError("potential: unknown kind \"" + kind + "\"");
  }
  try {
    return make_gibbs(g, vals, grad);
  } catch (const Error& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
}

RadialProfile parse_cost(const json& j) {
  const std::string kind = kind_of(j, "cost");
  try {
    if (kind == "quadratic") return quadratic_profile();
    if (kind == "power") {
      const double p = num(j, "p", "cost.power");
      if (j.contains("coeff")) return power_profile(p, num(j, "coeff", "cost.power"));
      return power_profile(p);
    }
    if (kind == "linear") return linear_profile(num(j, "slope", "cost.linear"));
    if (kind == "scaled") {
      if (!j.contains("inner")) throw ConfigError("cost.scaled: missing \"inner\" profile");
      return scaled_profile(num(j, "tau", "cost.scaled"), parse_cost(j["inner"]));
    }
    if (kind == "table")
      return table_profile(num_array(j, "r", "cost.table"), num_array(j, "kappa", "cost.table"));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("cost: ") + e.what());
  }
  throw ConfigError("cost: unknown kind \"" + kind + "\"");
}

Modulus parse_modulus(const json& j, ModulusKind kind) {
  const char* what = kind == ModulusKind::convexity ? "sigma" : "omega";
  const std::string k = kind_of(j, what);
  try {
    if (k == "power") return power_modulus(num(j, "p", what), num(j, "coeff", what), kind);
    if (k == "table")
      return table_modulus(num_array(j, "r", what), num_array(j, "values", what), kind);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
  throw ConfigError(std::string(what) + ": unknown kind \"" + k + "\"");
}

GridMeasure initial_measure(const json& j, const Grid& g, const GridMeasure& eta) {
  const std::string kind = kind_of(j, "initial");
  std::vector<double> vals(g.n, 1.0);
  if (kind == "uniform") {
    // already ones
  } else if (kind == "gibbs") {
    vals = eta.density;
  } else if (kind == "gauss") {
    const double c = num(j, "center", "initial.gauss");
    const double s = num(j, "stddev", "initial.gauss");
    if (!(s > 0.0)) throw ConfigError("initial.gauss: stddev must be positive");
    for (int i = 0; i < g.n; ++i) {
      const double d = (g.x[i] - c) / s;
      vals[i] = std::exp(-0.5 * d * d);
    }
  } else if (kind == "tilt") {
    const double t = num(j, "t", "initial.tilt");
    for (int i = 0; i < g.n; ++i) vals[i] = eta.density[i] * std::exp(t * g.x[i]);
  } else if (kind == "two_bump") {
    const double c1 = num(j, "c1", "initial.two_bump"), s1 = num(j, "s1", "initial.two_bump");
    const double c2 = num(j, "c2", "initial.two_bump"), s2 = num(j, "s2", "initial.two_bump");
    const double w = num_or(j, "weight", 0.5);
    if (!(s1 > 0.0 && s2 > 0.0)) throw ConfigError("initial.two_bump: widths must be positive");
    if (!(w > 0.0 && w < 1.0)) throw ConfigError("initial.two_bump: weight must lie in (0, 1)");
    for (int i = 0; i < g.n; ++i) {
      const double d1 = (g.x[i] - c1) / s1, d2 = (g.x[i] - c2) / s2;
      vals[i] = w / s1 * std::exp(-0.5 * d1 * d1) + (1.0 - w) / s2 * std::exp(-0.5 * d2 * d2);
    }
  } else if (kind == "fourier") {
    const double seed = num(j, "seed", "initial.fourier");
    return random_smooth_measure(g, static_cast<std::uint64_t>(seed), num_or(j, "amplitude", 0.75));
  } else if (kind == "table") {
    vals = num_array(j, "values", "initial.table");
    if (int(vals.size()) != g.n) throw ConfigError("initial.table: values must have exactly n entries");
  } else {
    throw ConfigError("initial: unknown kind \"" + kind + "\"");
  }
  try {
    return GridMeasure::from_values(g, std::move(vals));
  } catch (const Error& e) {
    throw ConfigError(std::string("initial: ") + e.what());
  }
}

TestDensity parse_test_density(const json& j) {
  const std::string kind = kind_of(j, "test_density");
  TestDensity td;
  if (kind == "tilt") {
    const double t = num(j, "t", "test_density.tilt");
    td.name = "tilt(t=" + std::to_string(t) + ")";
    td.g = [t](double x) { return std::exp(t * x); };
  } else if (kind == "bump") {
    const double c = num(j, "center", "test_density.bump");
    const double s = num(j, "stddev", "test_density.bump");
    const double a = num_or(j, "amp", 1.0);
    if (!(s > 0.0)) throw ConfigError("test_density.bump: stddev must be positive");
    if (!(a > -1.0)) throw ConfigError("test_density.bump: amp must exceed -1");
    td.name = "bump(c=" + std::to_string(c) + ", s=" + std::to_string(s) + ")";
    td.g = [c, s, a](double x) {
      const double d = (x - c) / s;
      return 1.0 + a * std::exp(-0.5 * d * d);
    };
  } else if (kind == "two_bump") {
    const double c1 = num(j, "c1", "test_density.two_bump"), s1 = num(j, "s1", "test_density.two_bump");
    const double c2 = num(j, "c2", "test_density.two_bump"), s2 = num(j, "s2", "test_density.two_bump");
    const double w = num_or(j, "weight", 0.5);
    if (!(s1 > 0.0 && s2 > 0.0)) throw ConfigError("test_density.two_bump: widths must be positive");
    if (!(w > 0.0 && w < 1.0)) throw ConfigError("test_density.two_bump: weight must lie in (0, 1)");
    td.name = "two_bump(c1=" + std::to_string(c1) + ", c2=" + std::to_string(c2) + ")";
    td.g = [c1, s1, c2, s2, w](double x) {
      const double d1 = (x - c1) / s1, d2 = (x - c2) / s2;
      return w / s1 * std::exp(-0.5 * d1 * d1) + (1.0 - w) / s2 * std::exp(-0.5 * d2 * d2);
    };
  } else {
    throw ConfigError("test_density: unknown kind \"" + kind + "\"");
  }
  return td;
}

GridMeasure random_smooth_measure(const Grid& g, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  // Uniform in [-1, 1) from the top 53 bits; the distribution adapters in
  // <random> are not pinned down by the standard, so roll the mapping by hand
  // to keep outputs identical across toolchains.
  auto symmetric = [&rng]() { return 2.0 * (double(rng() >> 11) * 0x1.0p-53) - 1.0; };

  const int modes = 4;
  std::vector<double> as(modes), bs(modes);
  for (int m = 0; m < modes; ++m) {
    const double damp = amplitude / double((m + 1) * (m + 1));
    as[m] = damp * symmetric();
    bs[m] = damp * symmetric();
  }
  const double two_pi = 2.0 * 3.14159265358979323846;
  std::vector<double> vals(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double s = (g.x[i] - g.a) / g.length();
    double u = 0.0;
    for (int m = 0; m < modes; ++m)
      u += as[m] * std::sin(two_pi * (m + 1) * s) + bs[m] * std::cos(two_pi * (m + 1) * s);
    vals[i] = std::exp(u);
  }
  return GridMeasure::from_values(g, std::move(vals));
}

}  // namespace otlab
