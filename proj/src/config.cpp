#include "otlab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "otlab/errors.hpp"
#include "otlab/toml_lite.hpp"

namespace otlab {

const json& ExperimentConfig::block(const char* key) const {
  if (!raw.contains(key))
    throw ConfigError(std::string("config: missing required block \"") + key + "\"");
  return raw.at(key);
}

ExperimentConfig config_from_json(json j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a table");
  ExperimentConfig cfg;
  cfg.raw = std::move(j);
  if (!cfg.raw.contains("grid")) throw ConfigError("config: missing required block \"grid\"");
  cfg.grid = parse_grid(cfg.raw["grid"]);

  if (cfg.raw.contains("solver")) {
    const json& s = cfg.raw["solver"];
    if (!s.is_object()) throw ConfigError("config: \"solver\" must be a table");
    if (s.contains("relaxation")) cfg.solver.relaxation = s["relaxation"].get<double>();
    if (s.contains("max_inner_iters")) cfg.solver.max_inner_iters = s["max_inner_iters"].get<int>();
    if (s.contains("opt_tol")) cfg.solver.opt_tol = s["opt_tol"].get<double>();
    if (s.contains("gap_tol")) cfg.solver.gap_tol = s["gap_tol"].get<double>();
    if (s.contains("oracle_check")) cfg.solver.oracle_check = s["oracle_check"].get<bool>();
  }
  if (cfg.raw.contains("flow")) {
    const json& f = cfg.raw["flow"];
    if (!f.is_object()) throw ConfigError("config: \"flow\" must be a table");
    if (f.contains("n_steps")) cfg.n_steps = f["n_steps"].get<int>();
    if (cfg.n_steps < 1) throw ConfigError("config: flow.n_steps must be positive");
  }
  if (cfg.raw.contains("tol_scale")) {
    cfg.tol_scale = cfg.raw["tol_scale"].get<double>();
    if (!(cfg.tol_scale > 0.0)) throw ConfigError("config: tol_scale must be positive");
  }
  if (cfg.raw.contains("checks")) {
    if (!cfg.raw["checks"].is_array()) throw ConfigError("config: \"checks\" must be an array");
    for (const auto& c : cfg.raw["checks"]) {
      if (!c.is_string()) throw ConfigError("config: \"checks\" entries must be strings");
      cfg.checks.push_back(c.get<std::string>());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "toml") return config_from_json(toml_to_json(text));
  if (ext == "json") {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config: \"" + path + "\" is not valid JSON");
    return config_from_json(std::move(j));
  }
  throw ConfigError("config: \"" + path + "\" must end in .toml or .json");
}

void apply_override(json& root, const std::string& dotted_key, const std::string& value) {
  if (dotted_key.empty()) throw ConfigError("sweep: empty key");
  json* cur = &root;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted_key.find('.', start);
    const std::string part = dotted_key.substr(start, dot - start);
    if (part.empty()) throw ConfigError("sweep: malformed key \"" + dotted_key + "\"");
    if (dot == std::string::npos) {
      json leaf;
      if (value == "true") {
        leaf = true;
      } else if (value == "false") {
        leaf = false;
      } else {
        char* end = nullptr;
        const long long iv = std::strtoll(value.c_str(), &end, 10);
        if (end == value.c_str() + value.size() && !value.empty()) {
          leaf = iv;
        } else {
          const double dv = std::strtod(value.c_str(), &end);
          if (end == value.c_str() + value.size() && !value.empty()) {
            leaf = dv;
          } else {
            leaf = value;
          }
        }
      }
      (*cur)[part] = std::move(leaf);
      return;
    }
    json& next = (*cur)[part];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) throw ConfigError("sweep: key \"" + part + "\" is not a table");
    cur = &next;
    start = dot + 1;
  }
}

}  // namespace otlab
