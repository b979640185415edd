// symbranch: simulation and analytics lab for the symbiotic branching model
// SBM(rho, kappa). One subcommand per experiment kind; every run writes its
// CSV outputs plus an appended report.json under --out.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symbranch/config.hpp"
#include "symbranch/errors.hpp"
#include "symbranch/experiments.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::int64_t replicas = 0;
  bool has_replicas = false;
  std::vector<std::string> sets;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "flat key = value config file");
  cmd->add_option("--out", flags.out, "output directory");
  cmd->add_option("--seed", flags.seed, "override the config seed")
      ->each([&](const std::string&) { flags.has_seed = true; });
  cmd->add_option("--replicas", flags.replicas, "override the replica count")
      ->each([&](const std::string&) { flags.has_replicas = true; });
  cmd->add_option("--set", flags.sets, "extra key=value overrides (repeatable)");
  cmd->add_flag("--quiet", flags.quiet, "suppress the per-check report lines");
}

int dispatch(const std::string& kind, const CommonFlags& flags) {
  try {
    sbm::ExperimentConfig cfg;
    if (!flags.config_path.empty()) cfg = sbm::ExperimentConfig::from_file(flags.config_path);
    cfg.set("kind", kind);
    if (!flags.out.empty()) cfg.set("out", flags.out);
    if (flags.has_seed) cfg.set("seed", std::to_string(flags.seed));
    if (flags.has_replicas) cfg.set("replicas", std::to_string(flags.replicas));
    for (const std::string& kv : flags.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw sbm::ConfigError("--set expects key=value: " + kv);
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return sbm::run_experiment_cli(cfg, flags.quiet);
  } catch (const sbm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbiotic branching model laboratory"};
  app.require_subcommand(1);

  const std::vector<std::string> kinds = {
      "critical-curve", "exit-dist",    "nonspatial-moments", "lattice-moments",
      "dual-moments",   "self-duality", "lyapunov",           "interface-speed"};
  std::vector<CommonFlags> flags(kinds.size());
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(kinds[i], "run the " + kinds[i] + " experiment");
    add_common(cmd, flags[i]);
  }

  CLI11_PARSE(app, argc, argv);
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (app.get_subcommand(kinds[i])->parsed()) return dispatch(kinds[i], flags[i]);
  }
  std::cerr << "no subcommand selected\n";
  return 2;
}
