#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lagsw/mass_grid.hpp"

namespace lagsw {

/// Discrete solution at one time level on a staggered mass grid.
///
/// rho and s are cell-centered (M values); u and r are nodal (M+1 values).
/// r is never evolved on its own: it is always reconstructed from rho.
struct State {
  double tau = 0.0;
  std::vector<double> rho;
  std::vector<double> s;
  std::vector<double> u;
  std::vector<double> r;

  int cells() const { return static_cast<int>(rho.size()); }
  MassGrid grid() const { return MassGrid(cells()); }

  bool operator==(const State&) const = default;
};

/// Nodal effective velocity w = u + 2 r^{N-1} D rho.
struct EffectiveState {
  std::vector<double> w;
};

/// Raised when an update would produce a non-positive density.
class DensityPositivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the time stepper cannot proceed (solve breakdown, retries exhausted).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks array sizes, positivity, pinned boundary velocities, r[0] = 0 and
/// strict monotonicity of r. Returns an empty string when valid.
std::string check_state(const State& state);

/// Largest violation of r[i+1]^N - r[i]^N = N dy / rho[i] over all cells.
double geometry_defect(const State& state, int dimension);

/// Throws std::invalid_argument unless both states live on the same mass grid.
void require_same_grid(const State& a, const State& b);

}  // namespace lagsw
