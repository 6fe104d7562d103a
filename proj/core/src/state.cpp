#include "lagsw/state.hpp"

#include <algorithm>
#include <cmath>

#include "lagsw/model.hpp"

namespace lagsw {

std::string check_state(const State& state) {
  const auto m = state.rho.size();
  if (m < 3) return "state needs at least 3 cells";
  if (state.s.size() != m) return "entropy array size mismatch";
  if (state.u.size() != m + 1) return "velocity array size mismatch";
  if (state.r.size() != m + 1) return "radius array size mismatch";
  for (double rho : state.rho)
    if (!(rho > 0.0) || !std::isfinite(rho)) return "density must be positive and finite";
  for (double s : state.s)
    if (!std::isfinite(s)) return "entropy must be finite";
  for (double u : state.u)
    if (!std::isfinite(u)) return "velocity must be finite";
  if (state.u.front() != 0.0 || state.u.back() != 0.0) return "boundary velocity must be zero";
  if (state.r.front() != 0.0) return "r[0] must be zero";
  for (std::size_t i = 0; i + 1 < state.r.size(); ++i)
    if (!(state.r[i + 1] > state.r[i])) return "radius must be strictly increasing";
  return {};
}

double geometry_defect(const State& state, int dimension) {
  const double dy = 1.0 / state.cells();
  double worst = 0.0;
  for (int i = 0; i < state.cells(); ++i) {
    const double lhs = ipow(state.r[i + 1], dimension) - ipow(state.r[i], dimension);
    worst = std::max(worst, std::abs(lhs - dimension * dy / state.rho[i]));
  }
  return worst;
}

void require_same_grid(const State& a, const State& b) {
  if (a.rho.size() != b.rho.size() || a.u.size() != b.u.size())
    throw std::invalid_argument("states live on different mass grids");
}

}  // namespace lagsw
