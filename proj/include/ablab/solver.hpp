#ifndef ABLAB_SOLVER_HPP
#define ABLAB_SOLVER_HPP

#include <functional>
#include <vector>

#include "ablab/analysis.hpp"
#include "ablab/config.hpp"
#include "ablab/grid.hpp"
#include "ablab/growth_law.hpp"
#include "ablab/kernels.hpp"
#include "ablab/pressure_law.hpp"

namespace ablab {

struct SimState {
  double time = 0.0;
  Field n;
  PressureLaw law = PressureLaw::power_law(2.0);
  GrowthLaw growth = GrowthLaw::zero();
  long step_count = 0;
};

struct StepOptions {
  double cfl_safety = 0.45;
  kernels::Backend backend = kernels::Backend::Serial;
};

/// Pressure field p(n) of a density field.
Field pressure_field(const Field& n, const PressureLaw& law,
                     kernels::Backend backend = kernels::Backend::Serial);

/// Largest step allowed by cfl_safety dx^2 / (2 dim max Phi'(n)) and, with
/// growth, by cfl_safety / max |G(p)|.
double admissible_dt(const SimState& state, double cfl_safety);

/// One forward Euler step of n_t = Laplace Phi(n) + n G(p) in flux form.
/// Throws StepRejected when dt exceeds the admissible step, and
/// std::runtime_error when the density undershoots below -1e-12.
SimState step_density(const SimState& state, double dt, const StepOptions& options = {});

/// Admissible step for the pressure-form stepper.
double admissible_dt_pressure(const Field& p, double gamma, double cfl_safety);

/// One forward Euler step of p_t = gamma p p_xx + p_x^2 on a 1D grid.
Field step_pressure_1d(const Field& p, double gamma, double dt, const StepOptions& options = {});

/// Initial density for a scenario.
Field initial_density(const ScenarioConfig& config, const PressureLaw& law);

struct Snapshot {
  double time = 0.0;
  long step = 0;
  const Field* n = nullptr;
  const Field* p = nullptr;
  const Field* w = nullptr;
  const Mask* mask = nullptr;
};

struct SimulationResult {
  DiagnosticsSeries diagnostics;
  long steps = 0;
  SimState final_state;
};

using SnapshotObserver = std::function<void(const Snapshot&)>;

/// Runs a scenario from its start time to t_end. Snapshots fall on
/// snapshot_count equally spaced times (the last step is shortened to land on
/// each); diagnostics are evaluated at every snapshot and `observer` sees the
/// fields. Errors from a step are rethrown with the time and step index.
SimulationResult simulate(const ScenarioConfig& config, const SnapshotObserver& observer = {});

}  // namespace ablab

#endif  // ABLAB_SOLVER_HPP
