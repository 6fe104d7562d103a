#include "lagsw/params.hpp"

#include <cmath>
#include <stdexcept>

namespace lagsw {

std::string_view to_string(Formulation f) {
  return f == Formulation::primitive ? "primitive" : "effective";
}

Formulation parse_formulation(std::string_view text) {
  if (text == "primitive") return Formulation::primitive;
  if (text == "effective") return Formulation::effective;
  throw std::invalid_argument("unknown formulation '" + std::string(text) + "'");
}

void SimParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (dimension != 2 && dimension != 3) fail("dimension must be 2 or 3");
  if (!(gamma > 1.0) || !std::isfinite(gamma)) fail("gamma must be > 1");
  if (!(domain_radius > 0.0) || !std::isfinite(domain_radius)) fail("domain_radius must be > 0");
  if (cells < 8) fail("cells must be >= 8");
  if (dt_policy.kind == DtPolicy::Kind::fixed && !(dt_policy.value > 0.0))
    fail("fixed dt must be > 0");
  if (dt_policy.kind == DtPolicy::Kind::cfl && !(dt_policy.value > 0.0 && dt_policy.value <= 1.0))
    fail("cfl fraction must lie in (0, 1]");
  if (!(t_end >= 0.0)) fail("t_end must be >= 0");
  if (!(origin_weight_xi > 0.0 && origin_weight_xi < 1.0)) fail("xi must lie in (0, 1)");
  if (!(tol_volume > 0.0) || !(tol_energy > 0.0) || !(tol_steady > 0.0))
    fail("tolerances must be > 0");
  if (dissipation_kappa && !(*dissipation_kappa >= 0.0)) fail("kappa must be >= 0");
}

bool SimParams::gamma_admissible() const {
  if (dimension == 2) return gamma > 1.0;
  if (dimension == 3) return gamma > 1.0 && gamma < 3.0;
  return false;
}

}  // namespace lagsw
