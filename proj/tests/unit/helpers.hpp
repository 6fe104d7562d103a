#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "lagsw/model.hpp"
#include "lagsw/params.hpp"
#include "lagsw/state.hpp"

namespace lagsw::testing {

inline SimParams params_for(int dimension, int cells, double gamma = 1.4) {
  SimParams p;
  p.dimension = dimension;
  p.cells = cells;
  p.gamma = gamma;
  return p;
}

/// State with the given cell densities/entropies and nodal velocity, radius reconstructed.
inline State make_state(std::vector<double> rho, std::vector<double> s, std::vector<double> u,
                        const SimParams& params) {
  State st;
  st.rho = std::move(rho);
  st.s = std::move(s);
  st.u = std::move(u);
  st.r = reconstruct_radius(st.rho, st.grid(), params);
  return st;
}

/// State sampled pointwise from functions of the mass coordinate.
inline State state_from(const std::function<double(double)>& rho,
                        const std::function<double(double)>& s,
                        const std::function<double(double)>& u, const SimParams& params) {
  const MassGrid grid(params.cells);
  std::vector<double> r(params.cells), e(params.cells), v(params.cells + 1, 0.0);
  for (int i = 0; i < params.cells; ++i) {
    r[i] = rho(grid.center(i));
    e[i] = s(grid.center(i));
  }
  for (int j = 1; j < params.cells; ++j) v[j] = u(grid.node(j));
  return make_state(std::move(r), std::move(e), std::move(v), params);
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return sum * h / 3.0;
}

}  // namespace lagsw::testing
