#ifndef SYMBRANCH_EXPERIMENTS_HPP
#define SYMBRANCH_EXPERIMENTS_HPP

#include "symbranch/config.hpp"
#include "symbranch/report.hpp"

namespace sbm {

// Experiment kinds: critical-curve, exit-dist, nonspatial-moments,
// lattice-moments, dual-moments, self-duality, lyapunov, interface-speed.
// Dispatches on cfg key `kind`, writes CSV outputs plus an appended
// report.json line under `out`, and returns the report. Unknown kinds and
// malformed configs throw ConfigError.
RunReport run_experiment(const ExperimentConfig& cfg);

// CLI wrapper: runs, prints the per-check lines (unless quiet), returns the
// process exit code (0 all checks pass, 1 a tolerance failed, 2 bad config).
int run_experiment_cli(const ExperimentConfig& cfg, bool quiet);

}  // namespace sbm

#endif
