#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace lagsw {

/// Which Lagrangian system the time stepper advances.
enum class Formulation {
  primitive,  ///< velocity u with implicit degenerate viscosity
  effective,  ///< effective velocity w = u + 2 r^{N-1} d_y rho
};

std::string_view to_string(Formulation f);
Formulation parse_formulation(std::string_view text);

/// Time step selection: either a fixed step or a fraction of the acoustic CFL bound.
struct DtPolicy {
  enum class Kind { fixed, cfl };
  Kind kind = Kind::cfl;
  double value = 0.5;

  static DtPolicy fixed(double dt) { return {Kind::fixed, dt}; }
  static DtPolicy cfl(double fraction) { return {Kind::cfl, fraction}; }
};

/// Physical and numerical configuration of one simulation.
struct SimParams {
  int dimension = 2;            // N in {2, 3}
  double gamma = 1.4;           // adiabatic index, > 1
  double domain_radius = 1.0;   // R
  int cells = 128;              // M, >= 8
  DtPolicy dt_policy = DtPolicy::cfl(0.5);
  double t_end = 1.0;
  Formulation formulation = Formulation::primitive;
  double origin_weight_xi = 0.1;  // exponent offset of the weighted origin norm, in (0, 1)
  double tol_volume = 1e-12;
  double tol_energy = 1e-10;
  double tol_steady = 1e-11;
  // Coefficient of u^2/r^2 in the basic dissipation. Unset means 2(N-1).
  std::optional<double> dissipation_kappa;

  /// Coefficient actually used by the basic dissipation functional.
  double kappa() const { return dissipation_kappa.value_or(2.0 * (dimension - 1)); }

  /// Throws std::invalid_argument naming the first violated field.
  void validate() const;

  /// True when gamma lies in the admissible range for this N.
  bool gamma_admissible() const;
};

}  // namespace lagsw
