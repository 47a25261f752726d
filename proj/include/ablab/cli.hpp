#ifndef ABLAB_CLI_HPP
#define ABLAB_CLI_HPP

#include <string>
#include <vector>

#include "ablab/config.hpp"
#include "ablab/solver.hpp"
#include "ablab/theorems.hpp"

namespace ablab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

struct RunOutcome {
  SimulationResult result;
  std::vector<TheoremOutcome> theorems;
  bool passed() const { return all_passed(theorems); }
};

/// Simulates a scenario and evaluates its requested estimates. Structural
/// hypothesis failures throw before the first step.
RunOutcome run_scenario(const ScenarioConfig& config, const SnapshotObserver& observer = {});

/// The scenario with the sweep parameter set to `value`.
ScenarioConfig sweep_point(const SweepConfig& sweep, double value);

struct SweepRow {
  double value = 0.0;
  RunOutcome outcome;
};
/// Runs every sweep value on a pool of `parallelism` workers. Rows come back
/// sorted by value, so the output does not depend on scheduling.
std::vector<SweepRow> run_sweep(const SweepConfig& sweep);

/// Entry point of the `ablab` executable. Returns the process exit code.
int cli_main(int argc, char** argv);

}  // namespace ablab

#endif  // ABLAB_CLI_HPP
