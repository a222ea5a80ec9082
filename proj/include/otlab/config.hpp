#pragma once

#include "otlab/descriptions.hpp"

namespace otlab {

// Fully parsed experiment: grid plus the raw JSON blocks the subcommands
// interpret lazily. TOML files are lowered to the same JSON schema first.
struct ExperimentConfig {
  json raw;
  Grid grid;
  JkoConfig solver;
  int n_steps = 100;
  double tol_scale = 1.0;
  std::vector<std::string> checks;

  bool has(const char* key) const { return raw.contains(key); }
  const json& block(const char* key) const;  // ConfigError when missing
};

ExperimentConfig config_from_json(json j);
ExperimentConfig load_config(const std::string& path);  // dispatches on .toml / .json

// Applies a sweep override "a.b.c" = value (parsed as bool, integer, float or
// string, in that order) to a JSON document.
void apply_override(json& root, const std::string& dotted_key, const std::string& value);

}  // namespace otlab
