#include "lagsw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "lagsw/model.hpp"
#include "lagsw/tridiagonal.hpp"

namespace lagsw::solver {
namespace {

constexpr double kMinDt = 1e-12;
constexpr double kSpeedFloor = 1e-300;

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// Shared tail of both steppers: positivity, geometry, bookkeeping.
StepResult finish_step(const State& old, std::vector<double> volume, std::vector<double> u_out,
                       double dt, const SimParams& params) {
  State next;
  next.tau = old.tau + dt;
  next.rho.resize(volume.size());
  for (std::size_t i = 0; i < volume.size(); ++i) {
    if (!(volume[i] > 0.0) || !std::isfinite(volume[i]))
      throw DensityPositivityError("density positivity violated in cell " + std::to_string(i));
    next.rho[i] = 1.0 / volume[i];
  }
  next.s = old.s;
  next.u = std::move(u_out);
  next.u.front() = 0.0;
  next.u.back() = 0.0;
  next.r = reconstruct_radius(next.rho, old.grid(), params);

  StepResult result{std::move(next), {}};
  result.report.dt = dt;
  result.report.max_density_change = max_abs_diff(result.state.rho, old.rho);
  result.report.max_velocity_change = max_abs_diff(result.state.u, old.u);
  return result;
}

void check_step_inputs(const State& state, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be > 0");
  if (state.cells() < 3) throw std::invalid_argument("step: state needs at least 3 cells");
}

}  // namespace

double stable_dt(const State& state, const SimParams& params) {
  const double cfl = params.dt_policy.kind == DtPolicy::Kind::cfl ? params.dt_policy.value : 1.0;
  const double dy = state.grid().dy();
  const int n = params.dimension;
  double dt = std::numeric_limits<double>::infinity();
  for (int i = 0; i < state.cells(); ++i) {
    const double rho = state.rho[i];
    const double sound = std::sqrt(params.gamma * pressure(rho, state.s[i], params.gamma) / rho);
    const double jac = rho * ipow(state.r[i + 1], n - 1);
    const double speed = std::max(std::abs(state.u[i]), std::abs(state.u[i + 1]));
    dt = std::min(dt, dy / (sound * jac + speed * jac + kSpeedFloor));
  }
  return std::max(cfl * dt, kMinDt);
}

StepResult step_primitive(const State& state, double dt, const SimParams& params,
                          const Sources* sources) {
  check_step_inputs(state, dt);
  const int m = state.cells();
  const int n = params.dimension;
  const double dy = state.grid().dy();
  const auto& rho = state.rho;
  const auto& r = state.r;
  const auto p = cell_pressure(state, params.gamma);

  std::vector<double> jac(m + 1);
  for (int j = 0; j <= m; ++j) jac[j] = ipow(r[j], n - 1);

  // Momentum: (I - dt L) u_out = u + dt (-r^{N-1} D P - 2(N-1) r^{N-2} u D rho) at interior nodes.
  const double visc = dt / (dy * dy);
  SymmetricTridiagonal a(m - 1);
  std::vector<double> rhs(m - 1);
  for (int j = 1; j < m; ++j) {
    const double dp = (p[j] - p[j - 1]) / dy;
    const double drho = (rho[j] - rho[j - 1]) / dy;
    double rate = -jac[j] * dp - 2.0 * (n - 1) * ipow(r[j], n - 2) * state.u[j] * drho;
    if (sources) rate += sources->node_velocity[j];
    rhs[j - 1] = state.u[j] + dt * rate;
    a.diag[j - 1] = 1.0 + visc * jac[j] * jac[j] * 2.0 * (rho[j] * rho[j] + rho[j - 1] * rho[j - 1]);
    if (j + 1 < m) a.off[j - 1] = -visc * 2.0 * rho[j] * rho[j] * jac[j] * jac[j + 1];
  }
  solve_tridiagonal(a, rhs);

  std::vector<double> u_out(m + 1, 0.0);
  std::copy(rhs.begin(), rhs.end(), u_out.begin() + 1);

  // Continuity in specific-volume flux form with the fresh velocity.
  std::vector<double> volume(m);
  for (int i = 0; i < m; ++i) {
    const double flux_div = (jac[i + 1] * u_out[i + 1] - jac[i] * u_out[i]) / dy;
    double rate = flux_div;
    if (sources) rate += sources->cell_volume[i];
    volume[i] = 1.0 / rho[i] + dt * rate;
  }
  return finish_step(state, std::move(volume), std::move(u_out), dt, params);
}

StepResult step_effective(const State& state, double dt, const SimParams& params) {
  check_step_inputs(state, dt);
  const int m = state.cells();
  const int n = params.dimension;
  const double dy = state.grid().dy();
  const auto& rho = state.rho;
  const auto& r = state.r;
  const auto p = cell_pressure(state, params.gamma);
  auto w = effective_velocity(state, params).w;

  std::vector<double> jac(m + 1);
  for (int j = 0; j <= m; ++j) jac[j] = ipow(r[j], n - 1);

  for (int j = 1; j < m; ++j) w[j] -= dt * jac[j] * (p[j] - p[j - 1]) / dy;

  // Continuity: v_out - dt D G(v_out) = v with nodal flux
  // G_j = r^{N-1} w_j + c_j (v_out_j - v_out_{j-1}), c_j = 2 r^{2N-2} rho_{j-1} rho_j / dy,
  // whose old-level value is exactly r^{N-1} (w - 2 r^{N-1} D rho) = r^{N-1} u.
  std::vector<double> c(m + 1, 0.0);
  for (int j = 1; j < m; ++j) c[j] = 2.0 * jac[j] * jac[j] * rho[j - 1] * rho[j] / dy;
  const double k = dt / dy;
  SymmetricTridiagonal a(m);
  std::vector<double> volume(m);
  for (int i = 0; i < m; ++i) {
    const double flux_right = i + 1 < m ? jac[i + 1] * w[i + 1] : 0.0;
    const double flux_left = i > 0 ? jac[i] * w[i] : 0.0;
    volume[i] = 1.0 / rho[i] + k * (flux_right - flux_left);
    a.diag[i] = 1.0 + k * (c[i] + c[i + 1]);
    if (i + 1 < m) a.off[i] = -k * c[i + 1];
  }
  solve_tridiagonal(a, volume);

  // Recover u from the updated w against the new density and geometry.
  std::vector<double> rho_new(m);
  for (int i = 0; i < m; ++i) {
    if (!(volume[i] > 0.0) || !std::isfinite(volume[i]))
      throw DensityPositivityError("density positivity violated in cell " + std::to_string(i));
    rho_new[i] = 1.0 / volume[i];
  }
  const auto r_new = reconstruct_radius(rho_new, state.grid(), params);
  auto u_out = recover_velocity(EffectiveState{std::move(w)}, rho_new, r_new, params);
  return finish_step(state, std::move(volume), std::move(u_out), dt, params);
}

StepResult step(const State& state, double dt, const SimParams& params) {
  return params.formulation == Formulation::primitive ? step_primitive(state, dt, params)
                                                      : step_effective(state, dt, params);
}

State advance_to(State state, double t_end, const SimParams& params, const Observer& observer,
                 const AdvanceOptions& options, AdvanceStats* stats) {
  if (!(t_end >= state.tau)) throw std::invalid_argument("advance_to: t_end precedes state time");
  if (options.cadence_steps < 1) throw std::invalid_argument("advance_to: cadence must be >= 1");
  const bool primitive = params.formulation == Formulation::primitive;
  if (options.sources && !primitive)
    throw std::invalid_argument("advance_to: sources require the primitive formulation");

  if (observer && options.observe_initial) observer(state, functionals::record(state, params));

  Sources sources;
  long step_count = 0;
  double next_tick = options.cadence_time > 0.0 ? state.tau + options.cadence_time : 0.0;
  while (state.tau < t_end) {
    const double remaining = t_end - state.tau;
    const bool cfl = params.dt_policy.kind == DtPolicy::Kind::cfl;
    double dt = cfl ? stable_dt(state, params) : params.dt_policy.value;
    bool last = false;
    if (remaining <= dt) {
      dt = remaining;
      last = true;
    } else if (remaining < 2.0 * dt) {
      // Split the tail evenly instead of leaving a sliver step.
      dt = 0.5 * remaining;
    }

    std::optional<StepResult> result;
    for (int attempt = 0;; ++attempt) {
      try {
        if (options.sources) {
          options.sources(state, sources);
          result = step_primitive(state, dt, params, &sources);
        } else {
          result = step(state, dt, params);
        }
        break;
      } catch (const DensityPositivityError& err) {
        if (attempt >= options.max_halvings)
          throw SolverError(std::string(err.what()) + " after " + std::to_string(attempt) +
                            " dt halvings");
        dt *= 0.5;
        last = false;
        if (stats) ++stats->halvings;
      }
    }
    result->report.cfl_limited = cfl && !last;
    if (last) result->state.tau = t_end;
    ++step_count;

    if (observer) {
      bool tick = step_count % options.cadence_steps == 0;
      if (options.cadence_time > 0.0) {
        tick = result->state.tau >= next_tick;
        while (next_tick <= result->state.tau) next_tick += options.cadence_time;
      }
      if (tick || result->state.tau >= t_end)
        observer(result->state,
                 functionals::record(result->state, params,
                                     functionals::PreviousStep{state, result->report.dt}));
    }
    state = std::move(result->state);
  }
  if (stats) stats->steps += step_count;
  return state;
}

}  // namespace lagsw::solver
