#include "lagsw/model.hpp"

#include <cmath>
#include <stdexcept>

namespace lagsw {

double pressure(double rho, double s, double gamma) {
  if (!(rho > 0.0)) throw std::domain_error("pressure: density must be positive");
  return std::pow(rho, gamma) * std::exp(s);
}

std::vector<double> reconstruct_radius(std::span<const double> rho, const MassGrid& grid,
                                       const SimParams& params) {
  const int n = params.dimension;
  const double dy = grid.dy();
  std::vector<double> r(rho.size() + 1, 0.0);
  // Accumulate r^N rather than r so each cell's shell volume is exact up to rounding.
  double rn = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    rn += n * dy / rho[i];
    r[i + 1] = n == 2 ? std::sqrt(rn) : std::cbrt(rn);
  }
  return r;
}

std::vector<double> nodal_gradient(std::span<const double> f, double dy) {
  const std::size_t m = f.size();
  if (m < 3) throw std::invalid_argument("nodal_gradient needs at least 3 cells");
  std::vector<double> g(m + 1);
  g[0] = (-2.0 * f[0] + 3.0 * f[1] - f[2]) / dy;
  for (std::size_t i = 1; i < m; ++i) g[i] = (f[i] - f[i - 1]) / dy;
  g[m] = (2.0 * f[m - 1] - 3.0 * f[m - 2] + f[m - 3]) / dy;
  return g;
}

EffectiveState effective_velocity(const State& state, const SimParams& params) {
  const auto grad = nodal_gradient(state.rho, state.grid().dy());
  EffectiveState eff;
  eff.w.resize(state.u.size());
  for (std::size_t i = 0; i < eff.w.size(); ++i)
    eff.w[i] = state.u[i] + 2.0 * ipow(state.r[i], params.dimension - 1) * grad[i];
  return eff;
}

std::vector<double> recover_velocity(const EffectiveState& eff, std::span<const double> rho,
                                     std::span<const double> r, const SimParams& params) {
  const auto grad = nodal_gradient(rho, 1.0 / static_cast<double>(rho.size()));
  std::vector<double> u(eff.w.size(), 0.0);
  for (std::size_t i = 1; i + 1 < u.size(); ++i)
    u[i] = eff.w[i] - 2.0 * ipow(r[i], params.dimension - 1) * grad[i];
  return u;
}

std::vector<double> cell_pressure(const State& state, double gamma) {
  std::vector<double> p(state.rho.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = pressure(state.rho[i], state.s[i], gamma);
  return p;
}

double total_volume(const State& state) {
  // Kahan summation keeps the conservation diagnostics at the rounding floor.
  const double dy = state.grid().dy();
  double sum = 0.0, carry = 0.0;
  for (double rho : state.rho) {
    const double term = dy / rho - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum;
}

}  // namespace lagsw
