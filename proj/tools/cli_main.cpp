#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "commands.hpp"

namespace {

struct SubArgs {
  otlab::cli::RunOptions opt;
  std::vector<std::string> sweeps;
};

void add_common(CLI::App* sub, SubArgs& args, bool needs_config) {
  if (needs_config)
    sub->add_option("--config", args.opt.config_path, "experiment config (.toml or .json)")
        ->required()
        ->check(CLI::ExistingFile);
  sub->add_option("--out", args.opt.out_dir, "output directory (env OTLAB_OUT overrides)");
  sub->add_option("--tol-scale", args.opt.tol_scale, "multiply all pass/fail tolerances")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--oracle", args.opt.oracle, "enable brute-force cross-checks");
  sub->add_option("--sweep", args.sweeps,
                  "KEY=v1,v2,... fan-out over a config key; repeatable, axes combine");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "otlab: entropy dissipation, transport flows and log-Sobolev certificates on 1D grids"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> verbs = {
      {"criterion", "scan the pointwise dissipation criterion and modulus validity"},
      {"flow", "run a JKO flow, write the trace and the log-Sobolev certificate"},
      {"step", "solve a single JKO step and report its optimality certificates"},
      {"transport", "solve a 1D transport problem with dual potentials"},
      {"five-gradients", "evaluate the five-gradients functional on density pairs"},
      {"lsi-gap", "evaluate log-Sobolev gaps for test densities (optional classical limit)"},
      {"theta-lsi", "build the entropy weight from a radial theta profile"},
  };

  std::map<std::string, SubArgs> args;
  for (const auto& [name, desc] : verbs) add_common(app.add_subcommand(name, desc), args[name], true);

  SubArgs ppower_args;
  double p = 3.0;
  CLI::App* ppower = app.add_subcommand("ppower", "modulus constants C(p) and t_p of power potentials");
  ppower->add_option("--p", p, "power exponent, p >= 2")->required();
  add_common(ppower, ppower_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : otlab::cli::kExitError;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string verb = sub->get_name();
  SubArgs& a = verb == "ppower" ? ppower_args : args[verb];
  if (const char* env = std::getenv("OTLAB_OUT"); env != nullptr && *env != '\0')
    a.opt.out_dir = env;

  if (verb == "ppower")
    return otlab::cli::guarded_run([&] { return otlab::cli::cmd_ppower(p, a.opt); }, std::cerr);

  return otlab::cli::guarded_run(
      [&]() -> int {
        std::vector<otlab::cli::SweepAxis> axes;
        axes.reserve(a.sweeps.size());
        for (const std::string& s : a.sweeps) axes.push_back(otlab::cli::parse_sweep(s));
        if (axes.empty()) return otlab::cli::run_command(verb, a.opt);
        return otlab::cli::run_sweep(verb, a.opt, axes);
      },
      std::cerr);
}
