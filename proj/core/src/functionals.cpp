#include "lagsw/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lagsw/model.hpp"
#include "lagsw/verify.hpp"

namespace lagsw::functionals {
namespace {

double internal_energy_density(double rho, double s, double gamma) {
  return std::pow(rho, gamma - 1.0) * std::exp(s) / (gamma - 1.0);
}

double internal_energy(const State& state, double gamma) {
  const double dy = state.grid().dy();
  double sum = 0.0;
  for (int i = 0; i < state.cells(); ++i)
    sum += internal_energy_density(state.rho[i], state.s[i], gamma) * dy;
  return sum;
}

// Node-located factors shared by the BD quadratures.
struct NodalFields {
  std::vector<double> weight;  // trapezoid weights
  std::vector<double> rho;     // adjacent-cell mean
  std::vector<double> es;      // e^{s} of the adjacent-cell mean entropy
  std::vector<double> jac2;    // r^{2N-2}
  std::vector<double> drho;
  std::vector<double> ds;

  NodalFields(const State& state, int dimension) {
    const int m = state.cells();
    const double dy = state.grid().dy();
    weight.assign(m + 1, dy);
    weight.front() = weight.back() = 0.5 * dy;
    rho.resize(m + 1);
    es.resize(m + 1);
    jac2.resize(m + 1);
    for (int j = 0; j <= m; ++j) {
      const int left = std::max(j - 1, 0);
      const int right = std::min(j, m - 1);
      rho[j] = 0.5 * (state.rho[left] + state.rho[right]);
      es[j] = std::exp(0.5 * (state.s[left] + state.s[right]));
      jac2[j] = ipow(state.r[j], 2 * dimension - 2);
    }
    drho = nodal_gradient(state.rho, dy);
    ds = nodal_gradient(state.s, dy);
  }
};

}  // namespace

double basic_energy(const State& state, const SimParams& params) {
  const double dy = state.grid().dy();
  double kinetic = 0.0;
  for (int i = 0; i < state.cells(); ++i) {
    const double ubar = 0.5 * (state.u[i] + state.u[i + 1]);
    kinetic += 0.5 * ubar * ubar * dy;
  }
  return kinetic + internal_energy(state, params.gamma);
}

double basic_dissipation(const State& state, const SimParams& params) {
  const int m = state.cells();
  const int n = params.dimension;
  const double dy = state.grid().dy();
  const double kappa = params.kappa();
  double sum = 0.0;
  for (int j = 1; j < m; ++j) {
    const double rhobar = 0.5 * (state.rho[j - 1] + state.rho[j]);
    const double du = (state.u[j + 1] - state.u[j - 1]) / (2.0 * dy);
    const double r = state.r[j];
    sum += (2.0 * rhobar * rhobar * ipow(r, 2 * n - 2) * du * du +
            kappa * state.u[j] * state.u[j] / (r * r)) *
           dy;
  }
  return sum;
}

double bd_energy(const State& state, const SimParams& params) {
  const auto eff = effective_velocity(state, params);
  const double dy = state.grid().dy();
  const int m = state.cells();
  double kinetic = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double weight = (j == 0 || j == m) ? 0.5 * dy : dy;
    kinetic += 0.5 * eff.w[j] * eff.w[j] * weight;
  }
  return kinetic + internal_energy(state, params.gamma);
}

double bd_dissipation(const State& state, const SimParams& params) {
  const NodalFields f(state, params.dimension);
  const double g = params.gamma;
  double sum = 0.0;
  for (std::size_t j = 0; j < f.weight.size(); ++j)
    sum += 2.0 * g * f.jac2[j] * std::pow(f.rho[j], g - 1.0) * f.es[j] * f.drho[j] * f.drho[j] *
           f.weight[j];
  return sum;
}

double bd_source(const State& state, const SimParams& params) {
  const NodalFields f(state, params.dimension);
  const double g = params.gamma;
  double sum = 0.0;
  for (std::size_t j = 0; j < f.weight.size(); ++j)
    sum -= 2.0 * f.jac2[j] * std::pow(f.rho[j], g) * f.es[j] * f.ds[j] * f.drho[j] * f.weight[j];
  return sum;
}

double young_bound(const State& state, const SimParams& params) {
  const NodalFields f(state, params.dimension);
  const double g = params.gamma;
  double sum = 0.0;
  for (std::size_t j = 0; j < f.weight.size(); ++j)
    sum += (2.0 / g) * f.jac2[j] * std::pow(f.rho[j], g + 1.0) * f.es[j] * f.ds[j] * f.ds[j] *
           f.weight[j];
  return sum;
}

double weighted_origin_norm(const State& state, const SimParams& params, double xi) {
  if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("weighted_origin_norm: xi must lie in (0, 1)");
  const double exponent = xi + 0.5 * (params.dimension - 2);
  double worst = 0.0;
  for (int i = 0; i < state.cells(); ++i) {
    const double rc = 0.5 * (state.r[i] + state.r[i + 1]);
    worst = std::max(worst, std::sqrt(state.rho[i]) * std::pow(rc, exponent));
  }
  return worst;
}

double lp_norm(std::span<const double> field, double p, const MassGrid& grid) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const auto m = static_cast<std::size_t>(grid.cells());
  const double dy = grid.dy();
  const bool nodal = field.size() == m + 1;
  if (!nodal && field.size() != m) throw std::invalid_argument("lp_norm: field does not match grid");
  // Scale by the sup norm so large p does not overflow.
  const double top = sup_norm(field);
  if (top == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double weight = nodal && (i == 0 || i == m) ? 0.5 * dy : dy;
    sum += std::pow(std::abs(field[i]) / top, p) * weight;
  }
  return top * std::pow(sum, 1.0 / p);
}

double sup_norm(std::span<const double> field) {
  double top = 0.0;
  for (double v : field) top = std::max(top, std::abs(v));
  return top;
}

std::pair<double, double> density_extrema(const State& state) {
  const auto [lo, hi] = std::minmax_element(state.rho.begin(), state.rho.end());
  return {*lo, *hi};
}

double weighted_gradient_norm(const State& state, const SimParams& params) {
  const NodalFields f(state, params.dimension);
  double sum = 0.0;
  for (std::size_t j = 0; j < f.weight.size(); ++j) sum += f.jac2[j] * f.drho[j] * f.drho[j] * f.weight[j];
  return std::sqrt(sum);
}

DiagnosticsRecord record(const State& state, const SimParams& params,
                         std::optional<PreviousStep> prev) {
  DiagnosticsRecord rec;
  const auto grid = state.grid();
  const auto eff = effective_velocity(state, params);
  rec.tau = state.tau;
  rec.mass = grid.total_mass();
  rec.total_volume = total_volume(state);
  rec.e_basic = basic_energy(state, params);
  rec.d_basic = basic_dissipation(state, params);
  rec.e_bd = bd_energy(state, params);
  rec.d_bd = bd_dissipation(state, params);
  rec.s_bd = bd_source(state, params);
  std::tie(rec.rho_min, rec.rho_max) = density_extrema(state);
  const auto [smin, smax] = std::minmax_element(state.s.begin(), state.s.end());
  rec.s_min = *smin;
  rec.s_max = *smax;
  rec.sup_u = sup_norm(state.u);
  rec.sup_w = sup_norm(eff.w);
  rec.l4_u = lp_norm(state.u, 4.0, grid);
  rec.l4_w = lp_norm(eff.w, 4.0, grid);
  rec.l2_grad_rho_weighted = weighted_gradient_norm(state, params);
  rec.weighted_origin_norm = weighted_origin_norm(state, params, params.origin_weight_xi);
  if (prev) {
    rec.energy_residual = verify::energy_residual(prev->state, state, prev->dt, params);
    rec.bd_residual = verify::bd_residual(prev->state, state, prev->dt, params);
    rec.has_residuals = true;
  }
  return rec;
}

}  // namespace lagsw::functionals
