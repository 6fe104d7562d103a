#include "lagsw/initcond.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lagsw/mass_grid.hpp"
#include "lagsw/model.hpp"

namespace lagsw::init {
namespace {

constexpr int kSubsamplesPerCell = 32;

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                          0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kWeights = {0.2369268850561891, 0.4786286704993665,
                                            0.5688888888888889, 0.4786286704993665,
                                            0.2369268850561891};

template <class F>
double gauss(const F& f, double a, double b) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t k = 0; k < kNodes.size(); ++k) sum += kWeights[k] * f(mid + half * kNodes[k]);
  return sum * half;
}

double arg_or(const PresetArgs& args, std::string_view key, double fallback) {
  const auto it = args.find(key);
  return it == args.end() ? fallback : it->second;
}

void reject_unknown(const PresetArgs& args, std::initializer_list<std::string_view> known,
                    std::string_view preset_name) {
  for (const auto& [key, value] : args)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("preset '" + std::string(preset_name) + "' has no argument '" +
                                  key + "'");
}

// Cumulative integrals of a density over the fine physical grid, evaluable at any radius.
class FineCumulative {
 public:
  FineCumulative(RadialFunction integrand, double radius, int intervals)
      : f_(std::move(integrand)), h_(radius / intervals), radius_(radius), cumulative_(intervals + 1, 0.0) {
    for (int j = 0; j < intervals; ++j)
      cumulative_[j + 1] = cumulative_[j] + gauss(f_, j * h_, (j + 1) * h_);
  }

  double total() const { return cumulative_.back(); }
  const std::vector<double>& nodes() const { return cumulative_; }
  double h() const { return h_; }

  double at(double x) const {
    if (x >= radius_) return total();
    const int j = std::clamp(static_cast<int>(x / h_), 0, static_cast<int>(cumulative_.size()) - 2);
    return cumulative_[j] + gauss(f_, j * h_, x);
  }

  double integrand(double x) const { return f_(x); }

 private:
  RadialFunction f_;
  double h_;
  double radius_;
  std::vector<double> cumulative_;
};

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"constant", "gaussian_bump", "entropy_layer",
                                                 "isobaric_steady", "velocity_pulse"};
  return names;
}

PhysicalProfile preset(std::string_view name, const PresetArgs& args, const SimParams& params) {
  const double big_r = params.domain_radius;
  const double pi = std::numbers::pi;
  PhysicalProfile profile;
  profile.name = std::string(name);
  auto zero = [](double) { return 0.0; };

  if (name == "constant") {
    reject_unknown(args, {"rho", "s"}, name);
    const double rho = arg_or(args, "rho", 1.0), s = arg_or(args, "s", 0.0);
    profile.rho0 = [rho](double) { return rho; };
    profile.s0 = [s](double) { return s; };
    profile.u0 = zero;
  } else if (name == "gaussian_bump") {
    reject_unknown(args, {"a", "width", "center", "base", "s"}, name);
    const double a = arg_or(args, "a", 0.5), width = arg_or(args, "width", big_r / 8.0);
    const double center = arg_or(args, "center", big_r / 2.0), base = arg_or(args, "base", 1.0);
    const double s = arg_or(args, "s", 0.0);
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_bump: width must be > 0");
    profile.rho0 = [=](double r) {
      const double z = (r - center) / width;
      return base + a * std::exp(-z * z);
    };
    profile.s0 = [s](double) { return s; };
    profile.u0 = zero;
  } else if (name == "entropy_layer") {
    reject_unknown(args, {"amplitude", "center", "width", "s_base", "rho", "a", "bump_width"}, name);
    const double amp = arg_or(args, "amplitude", 0.3), center = arg_or(args, "center", big_r / 2.0);
    const double width = arg_or(args, "width", big_r / 10.0), s_base = arg_or(args, "s_base", 0.1);
    const double rho = arg_or(args, "rho", 1.0), a = arg_or(args, "a", 0.0);
    const double bump_width = arg_or(args, "bump_width", big_r / 8.0);
    if (!(width > 0.0) || !(bump_width > 0.0))
      throw std::invalid_argument("entropy_layer: widths must be > 0");
    profile.s0 = [=](double r) { return s_base + 0.5 * amp * (1.0 + std::tanh((r - center) / width)); };
    profile.rho0 = [=](double r) {
      const double z = (r - center) / bump_width;
      return rho + a * std::exp(-z * z);
    };
    profile.u0 = zero;
  } else if (name == "isobaric_steady") {
    reject_unknown(args, {"c", "s_amp", "s_base"}, name);
    const double c = arg_or(args, "c", 1.0), s_amp = arg_or(args, "s_amp", 0.5);
    const double s_base = arg_or(args, "s_base", 0.0), gamma = params.gamma;
    if (!(c > 0.0)) throw std::invalid_argument("isobaric_steady: c must be > 0");
    profile.s0 = [=](double r) { return s_base + s_amp * std::sin(pi * r / big_r); };
    profile.rho0 = [=](double r) {
      return std::pow(c * std::exp(-(s_base + s_amp * std::sin(pi * r / big_r))), 1.0 / gamma);
    };
    profile.u0 = zero;
    profile.isobaric_pressure = c;
  } else if (name == "velocity_pulse") {
    reject_unknown(args, {"amplitude", "rho", "s"}, name);
    const double amp = arg_or(args, "amplitude", 0.1), rho = arg_or(args, "rho", 1.0);
    const double s = arg_or(args, "s", 0.0);
    profile.rho0 = [rho](double) { return rho; };
    profile.s0 = [s](double) { return s; };
    // sin(pi R / R) is not exactly zero in floating point; pin the wall explicitly.
    profile.u0 = [=](double r) { return r >= big_r ? 0.0 : amp * std::sin(pi * r / big_r); };
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  return profile;
}

RadialFunction tabulated(std::vector<double> radii, std::vector<double> values) {
  if (radii.size() != values.size() || radii.empty())
    throw std::invalid_argument("tabulated profile needs matching, non-empty columns");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      throw std::invalid_argument("tabulated profile radii must be strictly increasing");
  return [radii = std::move(radii), values = std::move(values)](double r) {
    if (r <= radii.front()) return values.front();
    if (r >= radii.back()) return values.back();
    const auto hi = std::upper_bound(radii.begin(), radii.end(), r);
    const auto j = static_cast<std::size_t>(hi - radii.begin());
    const double t = (r - radii[j - 1]) / (radii[j] - radii[j - 1]);
    return values[j - 1] + t * (values[j] - values[j - 1]);
  };
}

State normalize_and_sample(const PhysicalProfile& profile, const SimParams& params) {
  params.validate();
  if (!profile.rho0 || !profile.u0 || !profile.s0)
    throw std::invalid_argument("profile is missing a component function");
  const int n = params.dimension;
  const int m = params.cells;
  const double big_r = params.domain_radius;
  const MassGrid grid(m);
  const int intervals = kSubsamplesPerCell * m;

  auto density = [&](double r) {
    const double rho = profile.rho0(r);
    if (!(rho > 0.0) || !std::isfinite(rho))
      throw std::invalid_argument("initial density must be positive and finite (r = " +
                                  std::to_string(r) + ")");
    return rho;
  };
  const FineCumulative mass([&](double r) { return density(r) * ipow(r, n - 1); }, big_r, intervals);
  const FineCumulative entropy_mass(
      [&](double r) { return profile.s0(r) * density(r) * ipow(r, n - 1); }, big_r, intervals);
  const double scale = 1.0 / mass.total();

  // Cell boundary radii: invert the normalized cumulative mass at y = i dy.
  std::vector<double> edge(m + 1, 0.0);
  edge[m] = big_r;
  const auto& cum = mass.nodes();
  for (int i = 1; i < m; ++i) {
    const double target = grid.node(i) / scale;
    const auto it = std::upper_bound(cum.begin(), cum.end(), target);
    const int j = std::clamp(static_cast<int>(it - cum.begin()) - 1, 0, intervals - 1);
    double lo = j * mass.h(), hi = (j + 1) * mass.h();
    double x = 0.5 * (lo + hi);
    // Safeguarded Newton on the monotone cumulative mass.
    for (int iter = 0; iter < 100; ++iter) {
      const double residual = mass.at(x) - target;
      if (residual > 0.0) hi = x; else lo = x;
      const double slope = mass.integrand(x);
      double next = x - residual / slope;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) <= 1e-16 * big_r) {
        x = next;
        break;
      }
      x = next;
    }
    edge[i] = x;
  }

  State state;
  state.rho.resize(m);
  state.s.resize(m);
  const double dy = grid.dy();
  for (int i = 0; i < m; ++i) {
    const double shell = (ipow(edge[i + 1], n) - ipow(edge[i], n)) / n;
    state.rho[i] = dy / shell;
    state.s[i] = scale * (entropy_mass.at(edge[i + 1]) - entropy_mass.at(edge[i])) / dy;
  }

  if (profile.isobaric_pressure) {
    // Re-derive the density from the sampled entropy so P is constant cell by cell;
    // the common factor restores the exact total volume R^N / N.
    double sum = 0.0;
    for (int i = 0; i < m; ++i) sum += dy * std::exp(state.s[i] / params.gamma);
    const double factor = n * sum / ipow(big_r, n);
    for (int i = 0; i < m; ++i) state.rho[i] = factor * std::exp(-state.s[i] / params.gamma);
  }

  state.r = reconstruct_radius(state.rho, grid, params);
  const double u_scale = 1e-12 * std::max(1.0, std::abs(profile.u0(0.5 * big_r)));
  if (std::abs(profile.u0(0.0)) > u_scale || std::abs(profile.u0(big_r)) > u_scale)
    throw std::invalid_argument("initial velocity must vanish at r = 0 and r = R");
  state.u.resize(m + 1);
  for (int i = 0; i <= m; ++i) state.u[i] = profile.u0(state.r[i]);
  state.u.front() = 0.0;
  state.u.back() = 0.0;
  for (double u : state.u)
    if (!std::isfinite(u)) throw std::invalid_argument("initial velocity must be finite");
  for (double s : state.s)
    if (!std::isfinite(s)) throw std::invalid_argument("initial entropy must be finite");
  return state;
}

HypothesisReport validate_hypotheses(const State& state, const SimParams& params) {
  HypothesisReport report;
  auto fail = [&](std::string why) { report.failures.push_back(std::move(why)); };

  if (params.dimension != 2 && params.dimension != 3) fail("dimension must be 2 or 3");
  report.gamma_ok = params.gamma_admissible();
  if (!report.gamma_ok) fail("gamma out of range");

  if (state.rho.empty()) {
    fail("empty state");
    return report;
  }
  const auto [rho_lo, rho_hi] = std::minmax_element(state.rho.begin(), state.rho.end());
  report.rho_lower = *rho_lo;
  report.rho_upper = *rho_hi;
  if (!(report.rho_lower > 0.0)) fail("density lower bound");
  if (!std::isfinite(report.rho_upper)) fail("density upper bound");

  const auto [s_lo, s_hi] = std::minmax_element(state.s.begin(), state.s.end());
  report.s_lower = *s_lo;
  report.s_upper = *s_hi;
  const bool isentropic = report.s_lower == report.s_upper;
  if (!std::isfinite(report.s_lower) || !std::isfinite(report.s_upper)) fail("entropy bounds");
  // A spatially constant entropy is the isentropic case, where the positive lower
  // bound carries no content (e^s only rescales the pressure).
  else if (!isentropic && !(report.s_lower > 0.0)) fail("entropy lower bound");

  const double dy = 1.0 / static_cast<double>(state.s.size());
  for (std::size_t i = 1; i < state.s.size(); ++i)
    report.entropy_slope_sup =
        std::max(report.entropy_slope_sup, std::abs(state.s[i] - state.s[i - 1]) / dy);
  if (!std::isfinite(report.entropy_slope_sup)) fail("entropy slope");

  if (state.u.empty() || state.u.front() != 0.0 || state.u.back() != 0.0)
    fail("boundary velocity");
  return report;
}

}  // namespace lagsw::init
