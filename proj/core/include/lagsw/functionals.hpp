#pragma once

#include <optional>
#include <span>
#include <utility>

#include "lagsw/mass_grid.hpp"
#include "lagsw/params.hpp"
#include "lagsw/state.hpp"

namespace lagsw {

/// One row of the monitored-functional time series.
///
/// Column names and order of the CSV serialization live in io/csv; the field
/// order here matches them.
struct DiagnosticsRecord {
  double tau = 0.0;
  double mass = 0.0;
  double total_volume = 0.0;
  double e_basic = 0.0;
  double d_basic = 0.0;
  double e_bd = 0.0;
  double d_bd = 0.0;
  double s_bd = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double s_min = 0.0;
  double s_max = 0.0;
  double sup_u = 0.0;
  double sup_w = 0.0;
  double l4_u = 0.0;
  double l4_w = 0.0;
  double l2_grad_rho_weighted = 0.0;
  double weighted_origin_norm = 0.0;
  double energy_residual = 0.0;
  double bd_residual = 0.0;
  bool has_residuals = false;
};

namespace functionals {

/// Sum over cells of (ubar^2/2 + rho^{gamma-1} e^s / (gamma-1)) dy, ubar the
/// mean of the two adjacent nodal velocities.
double basic_energy(const State& state, const SimParams& params);

/// Sum over interior nodes of (2 rhobar^2 r^{2N-2} (D u)^2 + kappa u^2 / r^2) dy.
double basic_dissipation(const State& state, const SimParams& params);

// BD functionals. Nodal quadratures use trapezoid weights; rho and s at a node
// are the mean of the adjacent cells (the single adjacent cell at the two ends).
double bd_energy(const State& state, const SimParams& params);
double bd_dissipation(const State& state, const SimParams& params);
/// Right-hand side of the BD balance, -sum 2 r^{2N-2} rho^gamma e^s Ds Drho dy.
double bd_source(const State& state, const SimParams& params);
/// Y(state) = sum (gamma/2)^{-1} r^{2N-2} rho^{gamma+1} e^s (Ds)^2 dy, so that
/// |bd_source| <= bd_dissipation / 2 + Y holds node by node.
double young_bound(const State& state, const SimParams& params);

/// max over cells of rho^{1/2} r_c^{xi + (N-2)/2}, r_c the cell-center radius.
/// Throws std::invalid_argument for xi outside (0, 1).
double weighted_origin_norm(const State& state, const SimParams& params, double xi);

/// (sum |f|^p w dy)^{1/p}. Fields with M entries use cell weights, fields with
/// M+1 entries use trapezoid node weights. Throws for p < 1.
double lp_norm(std::span<const double> field, double p, const MassGrid& grid);
double sup_norm(std::span<const double> field);
std::pair<double, double> density_extrema(const State& state);

/// || D rho r^{N-1} ||_{L^2(0,1)} with nodal gradients.
double weighted_gradient_norm(const State& state, const SimParams& params);

struct PreviousStep {
  const State& state;
  double dt;
};

/// Assembles every field; residuals are filled only when `prev` is supplied.
DiagnosticsRecord record(const State& state, const SimParams& params,
                         std::optional<PreviousStep> prev = std::nullopt);

}  // namespace functionals
}  // namespace lagsw
