#include <doctest.h>

#include <string>

#include "otlab/config.hpp"
#include "otlab/errors.hpp"
#include "otlab/toml_lite.hpp"
#include "paths.hpp"

using namespace otlab;

TEST_SUITE("config") {
  TEST_CASE("toml lowering: tables, dotted keys, arrays, inline tables") {
    const char* text = R"(# leading comment
title = "demo"
flag = true
off = false
count = 42
ratio = 0.125
names = ["a", "b"]   # trailing comment
nums = [
  1.0,
  2.5,
  3.0,
]
inline = { kind = "power", p = 2.0 }

[outer]
x = 1

[outer.inner]
y = -2.5
z = [1, 2, 3]

[other]
dotted.key = "deep"
)";
    const json j = toml_to_json(text);
    CHECK(j["title"] == "demo");
    CHECK(j["flag"] == true);
    CHECK(j["off"] == false);
    CHECK(j["count"] == 42);
    CHECK(j["ratio"] == 0.125);
    CHECK(j["names"] == json::array({"a", "b"}));
    CHECK(j["nums"] == json::array({1.0, 2.5, 3.0}));
    CHECK(j["inline"]["kind"] == "power");
    CHECK(j["inline"]["p"] == 2.0);
    CHECK(j["outer"]["x"] == 1);
    CHECK(j["outer"]["inner"]["y"] == -2.5);
    CHECK(j["outer"]["inner"]["z"] == json::array({1, 2, 3}));
    CHECK(j["other"]["dotted"]["key"] == "deep");
  }

  TEST_CASE("toml errors carry the offending line number") {
    for (const char* bad : {"x = ", "= 3", "[unclosed\nx = 1", "x = \"no end",
                            "v = 1.2.3", "t = {a = 1", "arr = [1, 2", "key_only"}) {
      try {
        toml_to_json(bad);
        FAIL_CHECK("expected ConfigError for: " << bad);
      } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line") != std::string::npos);
      }
    }
  }

  TEST_CASE("toml and json front ends lower to the same document") {
    const ExperimentConfig t = load_config(std::string(OTLAB_CONFIG_DIR) + "/gaussian.toml");
    const ExperimentConfig j = load_config(std::string(OTLAB_CONFIG_DIR) + "/gaussian.json");
    CHECK(t.raw == j.raw);
    CHECK(t.grid.n == 513);
    CHECK(t.grid.a == -4.0);
    CHECK(t.n_steps == 200);
    CHECK(t.checks == std::vector<std::string>{"theorem", "simpler", "moduli"});
  }

  TEST_CASE("experiment validation") {
    CHECK_THROWS_AS(config_from_json(json{{"flow", {{"n_steps", 10}}}}), ConfigError);

    json good{{"grid", {{"a", -1.0}, {"b", 1.0}, {"n", 65}}}};
    const ExperimentConfig cfg = config_from_json(good);
    CHECK(cfg.grid.n == 65);
    CHECK(cfg.solver.opt_tol == 1e-8);
    CHECK_THROWS_AS(cfg.block("potential"), ConfigError);

    json zero_steps = good;
    zero_steps["flow"] = {{"n_steps", 0}};
    CHECK_THROWS_AS(config_from_json(zero_steps), ConfigError);

    json bad_tol = good;
    bad_tol["tol_scale"] = -1.0;
    CHECK_THROWS_AS(config_from_json(bad_tol), ConfigError);

    json bad_checks = good;
    bad_checks["checks"] = "theorem";
    CHECK_THROWS_AS(config_from_json(bad_checks), ConfigError);

    json solver = good;
    solver["solver"] = {{"relaxation", 0.25}, {"max_inner_iters", 30}, {"oracle_check", true}};
    const ExperimentConfig s = config_from_json(solver);
    CHECK(s.solver.relaxation == 0.25);
    CHECK(s.solver.max_inner_iters == 30);
    CHECK(s.solver.oracle_check);
  }

  TEST_CASE("load_config rejects unknown extensions and missing files") {
    CHECK_THROWS_AS(load_config("/nonexistent/path/exp.toml"), ConfigError);
    CHECK_THROWS_AS(load_config(std::string(OTLAB_SOURCE_DIR) + "/README.md"), ConfigError);
  }

  TEST_CASE("sweep overrides parse types and create nested tables") {
    json root = json::object();
    apply_override(root, "solver.opt_tol", "1e-9");
    apply_override(root, "flow.n_steps", "25");
    apply_override(root, "initial.kind", "gauss");
    apply_override(root, "solver.oracle_check", "true");
    apply_override(root, "grid.a", "-2.5");
    CHECK(root["solver"]["opt_tol"].is_number_float());
    CHECK(root["solver"]["opt_tol"] == 1e-9);
    CHECK(root["flow"]["n_steps"].is_number_integer());
    CHECK(root["flow"]["n_steps"] == 25);
    CHECK(root["initial"]["kind"] == "gauss");
    CHECK(root["solver"]["oracle_check"] == true);
    CHECK(root["grid"]["a"] == -2.5);

    apply_override(root, "flow.n_steps", "30");
    CHECK(root["flow"]["n_steps"] == 30);

    root["scalar"] = 3;
    CHECK_THROWS_AS(apply_override(root, "scalar.sub", "1"), ConfigError);
    CHECK_THROWS_AS(apply_override(root, "", "1"), ConfigError);
    CHECK_THROWS_AS(apply_override(root, "a..b", "1"), ConfigError);
  }
}
