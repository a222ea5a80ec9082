#pragma once

#include <json.hpp>

#include <cstdint>

#include "otlab/criteria.hpp"

namespace otlab {

using json = nlohmann::json;

// Tagged-record parsers shared by the JSON and TOML config front ends. Every
// parser throws ConfigError with the offending key on malformed input.

Grid parse_grid(const json& j);

// kinds: quadratic{lambda}, power{p, coeff}, linear{slope}, table{values}
GibbsPair gibbs_from_spec(const json& j, const Grid& g);

// kinds: quadratic, power{p, coeff?}, linear{slope}, scaled{tau, inner}, table{r, kappa}
RadialProfile parse_cost(const json& j);

// kinds: power{p, coeff}, table{r, values}
Modulus parse_modulus(const json& j, ModulusKind kind);

// kinds: uniform, gibbs, gauss{center, stddev}, tilt{t}, two_bump{c1, s1, c2,
// s2, weight}, table{values}
GridMeasure initial_measure(const json& j, const Grid& g, const GridMeasure& eta);

// kinds: tilt{t}, bump{center, stddev, amp}, two_bump{c1, s1, c2, s2, weight}
TestDensity parse_test_density(const json& j);

// Seeded smooth positive density: exp of a low-order Fourier sum with mode-m
// coefficients of size amplitude / m^2. Deterministic across platforms.
GridMeasure random_smooth_measure(const Grid& g, std::uint64_t seed, double amplitude = 0.75);

}  // namespace otlab
