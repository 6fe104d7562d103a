#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lagsw/functionals.hpp"
#include "lagsw/initcond.hpp"
#include "lagsw/params.hpp"
#include "lagsw/state.hpp"

namespace lagsw::verify {

/// (E_basic(s1) - E_basic(s0)) / dt + (D_basic(s0) + D_basic(s1)) / 2.
/// Throws std::invalid_argument for mismatched grids or dt <= 0.
double energy_residual(const State& s0, const State& s1, double dt, const SimParams& params);

/// (E_bd(s1) - E_bd(s0)) / dt + mean D_bd - mean S_bd.
double bd_residual(const State& s0, const State& s1, double dt, const SimParams& params);

struct ResidualSample {
  double tau = 0.0;
  double dt = 0.0;
  double energy = 0.0;
  double bd = 0.0;
};

struct ResidualSeries {
  std::vector<ResidualSample> samples;

  double max_abs_energy() const;
  double max_abs_bd() const;
  /// Time integral of |residual|, sum |r_k| dt_k.
  double integrated_energy() const;
  double integrated_bd() const;
};

/// Runs `initial` to t_end with per-step residual recording. Optionally hands
/// every record to `sink` as well.
ResidualSeries residual_run(const State& initial, double t_end, const SimParams& params,
                            const std::function<void(const DiagnosticsRecord&)>& sink = {});

/// max |s1 - s0| over cells; zero when entropy transport is exact.
double entropy_invariance(const State& initial, const State& final_state);

struct EnvelopeReport {
  std::vector<double> tau;
  std::vector<double> energy;    // E_bd samples
  std::vector<double> envelope;  // (E_bd(0) + C* tau) e^{2 C* tau}
  double rate = 0.0;             // measured C*
  bool within = false;
};

/// Measures C* = max over consecutive samples of (dE_bd/dtau)_+ / (1 + |u|^2 + |w|^2)
/// (norms from the records' L4 columns, which dominate L2 on the unit mass interval)
/// and checks E_bd against the resulting Gronwall envelope. Throws on empty input.
EnvelopeReport gronwall_envelope(std::span<const DiagnosticsRecord> series);

/// Least-squares slope of log(error) against log(1/h), i.e. the observed order
/// for errors ~ h^order, with the RMS residual of the fit.
struct OrderFit {
  double order = 0.0;
  double residual = 0.0;
};
OrderFit fit_order(std::span<const double> h, std::span<const double> error);

/// Analytic solution in mass coordinates used to manufacture forcing terms.
struct ManufacturedSolution {
  std::string name;
  std::function<double(double y, double tau)> rho;
  std::function<double(double y, double tau)> u;
  std::function<double(double y)> s;
};

/// rho = 1, u = 0, s = 0: zero forcing.
ManufacturedSolution mms_quiescent();
/// rho = 1 + a e^{-tau} cos(pi y), u = a sin(pi y) e^{-tau}, s = 0.
///
/// Near the origin u ~ r^N, so r^{N-1} u is only C^{1.5} (N = 2) in y and the
/// stencils lose accuracy at the first nodes. Observed order is about 0.7.
ManufacturedSolution mms_trigonometric(double amplitude = 0.1);

/// 1/rho = 1 - a e^{-tau} cos(pi y), r^{N-1} u = a sin(pi y) e^{-tau}, s = 0.
/// u ~ r near the origin, which keeps every flux smooth in y. The velocity
/// depends on the dimension through r. Throws for dimension outside {2, 3}.
ManufacturedSolution mms_origin_regular(int dimension, double amplitude = 0.1);

struct ConvergenceLevel {
  int cells = 0;
  double dt = 0.0;
  double error_rho = 0.0;
  double error_u = 0.0;
  double error = 0.0;  // error_rho + error_u
};

struct ConvergenceReport {
  std::string solution;
  int dimension = 2;
  std::vector<ConvergenceLevel> space;
  std::vector<ConvergenceLevel> time;
  OrderFit space_order;
  OrderFit time_order;
};

struct MmsOptions {
  std::vector<int> space_levels = {32, 64, 128};
  double t_end = 0.1;
  // Spatial study uses dt = dt_coefficient * dy^2 so temporal error stays subdominant.
  double dt_coefficient = 0.5;
  int time_cells = 64;
  std::vector<double> time_steps = {4e-3, 2e-3, 1e-3};
  int forcing_refinement = 16;
};

/// Manufactured-solution refinement study of the primitive scheme.
/// Throws std::invalid_argument for fewer than 3 levels, rho <= 0 or u not
/// vanishing at y = 0, 1.
ConvergenceReport mms_convergence(const SimParams& params, const ManufacturedSolution& solution,
                                  const MmsOptions& options = {});

struct AgreementReport {
  std::vector<int> cells;
  std::vector<double> gaps;
  OrderFit order;
};

/// Runs both formulations from the same sampled profile and reports
/// sup |rho_prim - rho_eff| + sup |u_prim - u_eff| at t_end per resolution.
AgreementReport scheme_agreement(const SimParams& params, const init::PhysicalProfile& profile,
                                 double t_end, std::span<const int> refinements);

struct LargeTimeReport {
  std::vector<double> tau;
  std::vector<double> density_deviation;  // sup |rho - rhobar|
  std::vector<double> gradient_norm;      // l2_grad_rho_weighted
  double mean_density = 0.0;
  bool deviation_trending_down = false;
  bool gradient_trending_down = false;
  bool passed = false;
  std::string note;
};

struct LargeTimeThresholds {
  double density_deviation = 1e-3;
  double gradient_norm = 1e-3;
};

/// Trend-based check of relaxation to the mean density. Finite runs cannot
/// distinguish uniform-in-time bounds from slow growth; the report says so.
/// Throws std::invalid_argument for non-isentropic runs or empty series.
LargeTimeReport large_time_check(std::span<const DiagnosticsRecord> series, bool isentropic,
                                 const LargeTimeThresholds& thresholds = {});

struct KappaReport {
  int dimension = 3;
  double candidate_a = 0.0;  // 2(N-1)
  double candidate_b = 0.0;  // 2
  double integrated_a = 0.0;
  double integrated_b = 0.0;
  double selected = 0.0;
  double separation = 0.0;  // larger integrated residual / smaller
};

/// Runs the same smooth flow once and evaluates the time-integrated energy
/// residual under both dissipation coefficients, selecting the one that closes
/// the identity.
KappaReport kappa_selection(const SimParams& params, const init::PhysicalProfile& profile,
                            double t_end);

}  // namespace lagsw::verify
