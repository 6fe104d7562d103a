#pragma once

#include <span>
#include <vector>

#include "lagsw/mass_grid.hpp"
#include "lagsw/params.hpp"
#include "lagsw/state.hpp"

namespace lagsw {

/// x^n for small non-negative integer n, without going through std::pow.
inline double ipow(double x, int n) {
  double result = 1.0;
  for (int k = 0; k < n; ++k) result *= x;
  return result;
}

/// Pressure law P = rho^gamma e^s. Throws std::domain_error for rho <= 0.
double pressure(double rho, double s, double gamma);

/// Nodal radii from cell densities: r[0] = 0, r[i+1]^N = r[i]^N + N dy / rho[i].
std::vector<double> reconstruct_radius(std::span<const double> rho, const MassGrid& grid,
                                       const SimParams& params);

/// Mass-coordinate derivative of a cell field, evaluated at the M+1 nodes.
///
/// Interior nodes use the centered difference (f[i] - f[i-1]) / dy. The two
/// boundary nodes use the second-order one-sided stencil through the three
/// nearest cell centers.
std::vector<double> nodal_gradient(std::span<const double> cell_field, double dy);

EffectiveState effective_velocity(const State& state, const SimParams& params);

/// Inverse of effective_velocity: u = w - 2 r^{N-1} D rho, with u pinned to 0
/// at both boundary nodes.
std::vector<double> recover_velocity(const EffectiveState& eff, std::span<const double> rho,
                                     std::span<const double> r, const SimParams& params);

/// Cell pressures of a state.
std::vector<double> cell_pressure(const State& state, double gamma);

/// Sum of dy / rho[i]; equals R^N / N for a state on B_R.
double total_volume(const State& state);

}  // namespace lagsw
