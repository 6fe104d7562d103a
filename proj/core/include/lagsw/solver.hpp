#pragma once

#include <functional>
#include <vector>

#include "lagsw/functionals.hpp"
#include "lagsw/params.hpp"
#include "lagsw/state.hpp"

namespace lagsw::solver {

struct StepReport {
  double dt = 0.0;
  int solve_iterations = 1;  // one direct tridiagonal solve per step
  double max_density_change = 0.0;
  double max_velocity_change = 0.0;
  bool cfl_limited = false;
};

struct StepResult {
  State state;
  StepReport report;
};

/// Additive source rates for the primitive system, evaluated at the old time level:
/// d_tau v += cell_volume[i], d_tau u += node_velocity[j].
struct Sources {
  std::vector<double> cell_volume;
  std::vector<double> node_velocity;
};

using SourceFn = std::function<void(const State& old_state, Sources& out)>;

/// Acoustic step bound in mass coordinates:
/// cfl * min_i dy / (c_s rho r^{N-1} + |u| rho r^{N-1} + eps), c_s = sqrt(gamma P / rho),
/// with r taken at the outer node of each cell. Uses the CFL fraction of the
/// params' dt policy (1 for a fixed policy). Never below 1e-12.
double stable_dt(const State& state, const SimParams& params);

/// One Lie-split step of the primitive system: implicit-viscous momentum,
/// then flux-form continuity with the new velocity, then geometry.
/// Throws DensityPositivityError or SolverError.
StepResult step_primitive(const State& state, double dt, const SimParams& params,
                          const Sources* sources = nullptr);

/// One step of the effective-velocity system: explicit w update, then a
/// linearly implicit continuity update in the specific volume, then u recovery.
StepResult step_effective(const State& state, double dt, const SimParams& params);

/// Dispatches on params.formulation.
StepResult step(const State& state, double dt, const SimParams& params);

using Observer = std::function<void(const State&, const DiagnosticsRecord&)>;

struct AdvanceOptions {
  int cadence_steps = 1;       // observe every k steps
  double cadence_time = 0.0;   // when > 0, observe each time tau crosses a multiple of it
  bool observe_initial = true;
  int max_halvings = 10;
  SourceFn sources;            // primitive formulation only
};

struct AdvanceStats {
  long steps = 0;
  long halvings = 0;
};

/// Steps until tau == t_end exactly. The observer sees the initial state (when
/// enabled), every cadence tick and the final state; records carry residuals
/// of the step that produced them.
State advance_to(State state, double t_end, const SimParams& params, const Observer& observer = {},
                 const AdvanceOptions& options = {}, AdvanceStats* stats = nullptr);

}  // namespace lagsw::solver
