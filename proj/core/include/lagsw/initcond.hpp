#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lagsw/params.hpp"
#include "lagsw/state.hpp"

namespace lagsw::init {

using RadialFunction = std::function<double(double r)>;

/// Initial data as functions of the physical radius on [0, R].
struct PhysicalProfile {
  std::string name;
  RadialFunction rho0;
  RadialFunction u0;
  RadialFunction s0;
  // When set, rho0^gamma e^{s0} equals this constant and sampling keeps the
  // discrete pressure spatially constant (see normalize_and_sample).
  std::optional<double> isobaric_pressure;
};

using PresetArgs = std::map<std::string, double, std::less<>>;

/// Names accepted by preset().
const std::vector<std::string>& preset_names();

/// Builds a named profile. Unknown names or argument keys throw std::invalid_argument.
///
///   constant         rho (1), s (0)
///   gaussian_bump    a (0.5), width (R/8), center (R/2), base (1), s (0)
///   entropy_layer    amplitude (0.3), center (R/2), width (R/10), s_base (0.1),
///                    rho (1), a (0: optional density bump of the same shape as gaussian_bump)
///   isobaric_steady  c (1), s_amp (0.5), s_base (0): s0 = s_base + s_amp sin(pi r / R),
///                    rho0 = (c e^{-s0})^{1/gamma}, u0 = 0
///   velocity_pulse   amplitude (0.1), rho (1), s (0): u0 = amplitude sin(pi r / R)
PhysicalProfile preset(std::string_view name, const PresetArgs& args, const SimParams& params);

/// Piecewise-linear interpolant of (r, value) samples, clamped beyond the ends.
RadialFunction tabulated(std::vector<double> radii, std::vector<double> values);

/// Rescales rho0 so the total mass is 1, bins the fine physical-space mass
/// distribution into M equal-mass cells and returns the resulting State.
///
/// Cell density is dy over the exact shell volume of the cell, so the total
/// specific volume equals R^N / N to rounding. Cell entropy is the mass-weighted
/// average of s0; nodal velocity is u0 at the node radius. Throws
/// std::invalid_argument when rho0 <= 0 somewhere or u0 is not pinned at 0 and R.
State normalize_and_sample(const PhysicalProfile& profile, const SimParams& params);

/// Outcome of checking the admissibility hypotheses on discrete data.
struct HypothesisReport {
  std::vector<std::string> failures;
  double rho_lower = 0.0;
  double rho_upper = 0.0;
  double s_lower = 0.0;
  double s_upper = 0.0;
  double entropy_slope_sup = 0.0;  // sup |D s / D y|, the mass-coordinate form of d_r s0 / (rho0 r^{N-1})
  bool gamma_ok = false;

  bool passed() const { return failures.empty(); }
};

HypothesisReport validate_hypotheses(const State& state, const SimParams& params);

}  // namespace lagsw::init
