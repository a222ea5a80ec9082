#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "otlab/config.hpp"

namespace otlab::cli {

// Shared command options. out_dir is created on demand; tol_scale multiplies
// every pass/fail tolerance; oracle enables the brute-force cross-checks.
// log redirects the human-readable summary lines (sweep jobs buffer them).
struct RunOptions {
  std::string config_path;
  std::string out_dir = ".";
  double tol_scale = 1.0;
  bool oracle = false;
  std::ostream* log = nullptr;
};

// Exit codes: 0 all requested checks passed, 1 a check failed, 2 the config
// was malformed or a solver gave up.
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

int cmd_criterion(const ExperimentConfig& cfg, const RunOptions& opt);
int cmd_flow(const ExperimentConfig& cfg, const RunOptions& opt);
int cmd_step(const ExperimentConfig& cfg, const RunOptions& opt);
int cmd_transport(const ExperimentConfig& cfg, const RunOptions& opt);
int cmd_five_gradients(const ExperimentConfig& cfg, const RunOptions& opt);
int cmd_lsi_gap(const ExperimentConfig& cfg, const RunOptions& opt);
int cmd_theta_lsi(const ExperimentConfig& cfg, const RunOptions& opt);
int cmd_ppower(double p, const RunOptions& opt);

// Runs body(), translating exceptions into the exit-code contract; messages
// go to err.
int guarded_run(const std::function<int()>& body, std::ostream& err);

// Loads opt.config_path, applies the overrides, and dispatches to the command
// named by `verb`, translating exceptions into the exit-code contract.
int run_command(const std::string& verb, const RunOptions& opt,
                const std::vector<std::pair<std::string, std::string>>& overrides = {});

// One sweep axis: dotted config key and its values.
struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

SweepAxis parse_sweep(const std::string& flag_value);  // "a.b=1,2,3"

// Cartesian fan-out of the axes; each combination runs as an independent job
// in its own subdirectory of opt.out_dir. Returns the worst job exit code.
int run_sweep(const std::string& verb, const RunOptions& opt, const std::vector<SweepAxis>& axes);

}  // namespace otlab::cli
