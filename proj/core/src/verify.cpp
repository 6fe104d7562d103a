#include "lagsw/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lagsw/model.hpp"
#include "lagsw/solver.hpp"

namespace lagsw::verify {
namespace {

void check_pair(const State& s0, const State& s1, double dt) {
  require_same_grid(s0, s1);
  if (!(dt > 0.0)) throw std::invalid_argument("residual: dt must be > 0");
}

double trend_slope(std::span<const double> t, std::span<const double> v, double floor) {
  // Least-squares slope of log(max(v, floor)) against t.
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  double mt = 0.0, mv = 0.0;
  std::vector<double> lv(n);
  for (std::size_t i = 0; i < n; ++i) {
    lv[i] = std::log(std::max(v[i], floor));
    mt += t[i];
    mv += lv[i];
  }
  mt /= n;
  mv /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (t[i] - mt) * (lv[i] - mv);
    den += (t[i] - mt) * (t[i] - mt);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

double energy_residual(const State& s0, const State& s1, double dt, const SimParams& params) {
  check_pair(s0, s1, dt);
  const double de = functionals::basic_energy(s1, params) - functionals::basic_energy(s0, params);
  const double d = 0.5 * (functionals::basic_dissipation(s0, params) +
                          functionals::basic_dissipation(s1, params));
  return de / dt + d;
}

double bd_residual(const State& s0, const State& s1, double dt, const SimParams& params) {
  check_pair(s0, s1, dt);
  const double de = functionals::bd_energy(s1, params) - functionals::bd_energy(s0, params);
  const double d = 0.5 * (functionals::bd_dissipation(s0, params) +
                          functionals::bd_dissipation(s1, params));
  const double src =
      0.5 * (functionals::bd_source(s0, params) + functionals::bd_source(s1, params));
  return de / dt + d - src;
}

double ResidualSeries::max_abs_energy() const {
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, std::abs(s.energy));
  return worst;
}

double ResidualSeries::max_abs_bd() const {
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, std::abs(s.bd));
  return worst;
}

double ResidualSeries::integrated_energy() const {
  double sum = 0.0;
  for (const auto& s : samples) sum += std::abs(s.energy) * s.dt;
  return sum;
}

double ResidualSeries::integrated_bd() const {
  double sum = 0.0;
  for (const auto& s : samples) sum += std::abs(s.bd) * s.dt;
  return sum;
}

ResidualSeries residual_run(const State& initial, double t_end, const SimParams& params,
                            const std::function<void(const DiagnosticsRecord&)>& sink) {
  ResidualSeries series;
  double last_tau = initial.tau;
  solver::AdvanceOptions options;
  options.observe_initial = false;
  solver::advance_to(
      initial, t_end, params,
      [&](const State&, const DiagnosticsRecord& rec) {
        series.samples.push_back({rec.tau, rec.tau - last_tau, rec.energy_residual, rec.bd_residual});
        last_tau = rec.tau;
        if (sink) sink(rec);
      },
      options);
  return series;
}

double entropy_invariance(const State& initial, const State& final_state) {
  require_same_grid(initial, final_state);
  double worst = 0.0;
  for (std::size_t i = 0; i < initial.s.size(); ++i)
    worst = std::max(worst, std::abs(final_state.s[i] - initial.s[i]));
  return worst;
}

EnvelopeReport gronwall_envelope(std::span<const DiagnosticsRecord> series) {
  if (series.empty()) throw std::invalid_argument("gronwall_envelope: empty series");
  EnvelopeReport report;
  for (std::size_t k = 1; k < series.size(); ++k) {
    const double dtau = series[k].tau - series[k - 1].tau;
    if (!(dtau > 0.0)) continue;
    const double growth = (series[k].e_bd - series[k - 1].e_bd) / dtau;
    const auto& rec = series[k - 1];
    const double norms = 1.0 + rec.l4_u * rec.l4_u + rec.l4_w * rec.l4_w;
    report.rate = std::max(report.rate, growth / norms);
  }
  const double e0 = series.front().e_bd;
  const double t0 = series.front().tau;
  report.within = true;
  for (const auto& rec : series) {
    const double t = rec.tau - t0;
    const double bound = (e0 + report.rate * t) * std::exp(2.0 * report.rate * t);
    report.tau.push_back(rec.tau);
    report.energy.push_back(rec.e_bd);
    report.envelope.push_back(bound);
    // Rounding slack relative to the energy scale.
    if (rec.e_bd > bound + 1e-12 * std::max(1.0, std::abs(bound))) report.within = false;
  }
  return report;
}

OrderFit fit_order(std::span<const double> h, std::span<const double> error) {
  if (h.size() != error.size() || h.size() < 2)
    throw std::invalid_argument("fit_order: need at least two matching samples");
  const std::size_t n = h.size();
  std::vector<double> x(n), y(n);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(h[i]);
    y[i] = std::log(std::max(error[i], 1e-300));
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  OrderFit fit;
  fit.order = sxx > 0.0 ? sxy / sxx : 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = my + fit.order * (x[i] - mx);
    ss += (y[i] - pred) * (y[i] - pred);
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

ManufacturedSolution mms_quiescent() {
  return {"quiescent", [](double, double) { return 1.0; }, [](double, double) { return 0.0; },
          [](double) { return 0.0; }};
}

ManufacturedSolution mms_trigonometric(double amplitude) {
  const double pi = std::numbers::pi;
  return {"trigonometric",
          [=](double y, double tau) { return 1.0 + amplitude * std::exp(-tau) * std::cos(pi * y); },
          [=](double y, double tau) { return amplitude * std::sin(pi * y) * std::exp(-tau); },
          [](double) { return 0.0; }};
}

ManufacturedSolution mms_origin_regular(int dimension, double amplitude) {
  if (dimension != 2 && dimension != 3)
    throw std::invalid_argument("mms_origin_regular: dimension must be 2 or 3");
  const double pi = std::numbers::pi;
  const double n = dimension;
  return {"origin_regular",
          [=](double y, double tau) {
            return 1.0 / (1.0 - amplitude * std::exp(-tau) * std::cos(pi * y));
          },
          [=](double y, double tau) {
            if (y <= 0.0) return 0.0;
            const double decay = amplitude * std::exp(-tau);
            // r^N = N * integral of the specific volume, in closed form.
            const double rn = n * (y - decay * std::sin(pi * y) / pi);
            return decay * std::sin(pi * y) / std::pow(rn, (n - 1.0) / n);
          },
          [](double) { return 0.0; }};
}

namespace {

// Two-point Gauss-Legendre on [a, b]; enough on the fine auxiliary grid.
template <class F>
double gauss2(const F& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double off = half / std::sqrt(3.0);
  return half * (f(mid - off) + f(mid + off));
}

// Five-point Gauss-Legendre on [a, b], for cell averages.
template <class F>
double gauss5(const F& f, double a, double b) {
  static constexpr std::array<double, 5> x = {0.0, 0.5384693101056831, -0.5384693101056831,
                                              0.9061798459386640, -0.9061798459386640};
  static constexpr std::array<double, 5> w = {0.5688888888888889, 0.4786286704993665,
                                              0.4786286704993665, 0.2369268850560239,
                                              0.2369268850560239};
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (int k = 0; k < 5; ++k) sum += w[k] * f(mid + half * x[k]);
  return half * sum;
}

// Fourth-order central first derivative of samples f at index k with spacing h.
double d1(const std::vector<double>& f, std::size_t k, double h) {
  return (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / (12.0 * h);
}

// Fourth-order central time derivative.
template <class F>
double d_tau(const F& f, double tau) {
  constexpr double delta = 1e-3;
  return (f(tau - 2 * delta) - 8.0 * f(tau - delta) + 8.0 * f(tau + delta) - f(tau + 2 * delta)) /
         (12.0 * delta);
}

class MmsForcing {
 public:
  MmsForcing(const ManufacturedSolution& sol, const SimParams& params, int cells, int refine)
      : sol_(sol), params_(params), grid_(cells), refine_(refine) {}

  double cell_volume_average(int i, double tau) const {
    const double a = grid_.node(i), b = grid_.node(i + 1);
    return gauss5([&](double y) { return 1.0 / sol_.rho(y, tau); }, a, b) / (b - a);
  }

  double cell_entropy_average(int i) const {
    const double a = grid_.node(i), b = grid_.node(i + 1);
    return gauss5([&](double y) { return sol_.s(y); }, a, b) / (b - a);
  }

  State exact_state(double tau) const {
    State st;
    st.tau = tau;
    const int m = grid_.cells();
    st.rho.resize(m);
    st.s.resize(m);
    st.u.resize(m + 1);
    for (int i = 0; i < m; ++i) {
      st.rho[i] = 1.0 / cell_volume_average(i, tau);
      st.s[i] = cell_entropy_average(i);
    }
    for (int j = 0; j <= m; ++j) st.u[j] = sol_.u(grid_.node(j), tau);
    st.u.front() = 0.0;
    st.u.back() = 0.0;
    st.r = reconstruct_radius(st.rho, grid_, params_);
    return st;
  }

  void operator()(double tau, solver::Sources& out) const {
    const int m = grid_.cells();
    const int n = params_.dimension;
    const double gamma = params_.gamma;
    const std::size_t fine = static_cast<std::size_t>(m) * refine_;
    const double h = 1.0 / static_cast<double>(fine);

    // Exact radius on the fine grid from the cumulative specific volume.
    std::vector<double> r(fine + 1), flux(fine + 1), rho(fine + 1), p(fine + 1);
    double rn = 0.0;
    for (std::size_t k = 0; k <= fine; ++k) {
      const double y = static_cast<double>(k) * h;
      if (k > 0)
        rn += n * gauss2([&](double z) { return 1.0 / sol_.rho(z, tau); }, y - h, y);
      r[k] = n == 2 ? std::sqrt(rn) : std::cbrt(rn);
      rho[k] = sol_.rho(y, tau);
      p[k] = std::pow(rho[k], gamma) * std::exp(sol_.s(y));
      flux[k] = ipow(r[k], n - 1) * sol_.u(y, tau);
    }

    out.cell_volume.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
      const double dvdt = d_tau([&](double t) { return cell_volume_average(i, t); }, tau);
      const double div = (flux[(i + 1) * refine_] - flux[i * refine_]) / grid_.dy();
      out.cell_volume[i] = dvdt - div;
    }

    out.node_velocity.assign(m + 1, 0.0);
    std::vector<double> stress(5);
    for (int j = 1; j < m; ++j) {
      const std::size_t k = static_cast<std::size_t>(j) * refine_;
      const double y = grid_.node(j);
      for (int q = 0; q < 5; ++q) {
        const std::size_t kk = k + q - 2;
        stress[q] = 2.0 * rho[kk] * rho[kk] * d1(flux, kk, h);
      }
      const double dstress = d1(stress, 2, h);
      const double dp = d1(p, k, h);
      const double drho = d1(rho, k, h);
      const double u = sol_.u(y, tau);
      const double rate = ipow(r[k], n - 1) * (dstress - dp) - 2.0 * (n - 1) * ipow(r[k], n - 2) * u * drho;
      const double dudt = d_tau([&](double t) { return sol_.u(y, t); }, tau);
      out.node_velocity[j] = dudt - rate;
    }
  }

 private:
  const ManufacturedSolution& sol_;
  SimParams params_;
  MassGrid grid_;
  int refine_;
};

void check_solution(const ManufacturedSolution& sol, double t_end) {
  for (int k = 0; k <= 64; ++k) {
    const double y = k / 64.0;
    for (double tau : {0.0, 0.5 * t_end, t_end})
      if (!(sol.rho(y, tau) > 0.0))
        throw std::invalid_argument("mms: manufactured density must be positive");
  }
  for (double tau : {0.0, 0.5 * t_end, t_end})
    if (std::abs(sol.u(0.0, tau)) > 1e-12 || std::abs(sol.u(1.0, tau)) > 1e-12)
      throw std::invalid_argument("mms: manufactured velocity must vanish at y = 0 and y = 1");
}

State run_mms(const ManufacturedSolution& sol, SimParams params, int cells, double dt,
              double t_end, int refine) {
  params.cells = cells;
  params.formulation = Formulation::primitive;
  params.dt_policy = DtPolicy::fixed(dt);
  MmsForcing forcing(sol, params, cells, refine);
  solver::AdvanceOptions options;
  options.sources = [&](const State& old, solver::Sources& out) { forcing(old.tau, out); };
  return solver::advance_to(forcing.exact_state(0.0), t_end, params, {}, options);
}

ConvergenceLevel compare(const State& a, const State& b, double dt) {
  ConvergenceLevel level;
  level.cells = a.cells();
  level.dt = dt;
  for (std::size_t i = 0; i < a.rho.size(); ++i)
    level.error_rho = std::max(level.error_rho, std::abs(a.rho[i] - b.rho[i]));
  for (std::size_t j = 0; j < a.u.size(); ++j)
    level.error_u = std::max(level.error_u, std::abs(a.u[j] - b.u[j]));
  level.error = level.error_rho + level.error_u;
  return level;
}

}  // namespace

ConvergenceReport mms_convergence(const SimParams& params, const ManufacturedSolution& solution,
                                  const MmsOptions& options) {
  if (options.space_levels.size() < 3 || options.time_steps.size() < 3)
    throw std::invalid_argument("mms: need at least 3 refinement levels");
  if (options.forcing_refinement < 4)
    throw std::invalid_argument("mms: forcing grid must be at least 4x finer");
  check_solution(solution, options.t_end);

  ConvergenceReport report;
  report.solution = solution.name;
  report.dimension = params.dimension;

  std::vector<double> h, err;
  for (int cells : options.space_levels) {
    const double dy = 1.0 / cells;
    const double target = options.dt_coefficient * dy * dy;
    const double dt = options.t_end / std::ceil(options.t_end / target);
    const State numeric = run_mms(solution, params, cells, dt, options.t_end,
                                  options.forcing_refinement);
    SimParams p = params;
    p.cells = cells;
    const State exact =
        MmsForcing(solution, p, cells, options.forcing_refinement).exact_state(options.t_end);
    report.space.push_back(compare(numeric, exact, dt));
    h.push_back(dy);
    err.push_back(report.space.back().error);
  }
  report.space_order = fit_order(h, err);

  // Temporal study against a same-grid reference with a much smaller step, so
  // the spatial error cancels.
  const double dt_ref = *std::min_element(options.time_steps.begin(), options.time_steps.end()) / 16.0;
  const State reference = run_mms(solution, params, options.time_cells, dt_ref, options.t_end,
                                  options.forcing_refinement);
  h.clear();
  err.clear();
  for (double dt : options.time_steps) {
    const State numeric = run_mms(solution, params, options.time_cells, dt, options.t_end,
                                  options.forcing_refinement);
    report.time.push_back(compare(numeric, reference, dt));
    h.push_back(dt);
    err.push_back(report.time.back().error);
  }
  report.time_order = fit_order(h, err);
  return report;
}

AgreementReport scheme_agreement(const SimParams& params, const init::PhysicalProfile& profile,
                                 double t_end, std::span<const int> refinements) {
  AgreementReport report;
  std::vector<double> h;
  for (int cells : refinements) {
    SimParams p = params;
    p.cells = cells;
    const State initial = init::normalize_and_sample(profile, p);
    p.formulation = Formulation::primitive;
    const State prim = solver::advance_to(initial, t_end, p);
    p.formulation = Formulation::effective;
    const State eff = solver::advance_to(initial, t_end, p);
    double drho = 0.0, du = 0.0;
    for (std::size_t i = 0; i < prim.rho.size(); ++i)
      drho = std::max(drho, std::abs(prim.rho[i] - eff.rho[i]));
    for (std::size_t j = 0; j < prim.u.size(); ++j) du = std::max(du, std::abs(prim.u[j] - eff.u[j]));
    report.cells.push_back(cells);
    report.gaps.push_back(drho + du);
    h.push_back(1.0 / cells);
  }
  if (report.gaps.size() >= 2) report.order = fit_order(h, report.gaps);
  return report;
}

LargeTimeReport large_time_check(std::span<const DiagnosticsRecord> series, bool isentropic,
                                 const LargeTimeThresholds& thresholds) {
  if (!isentropic)
    throw std::invalid_argument("large_time_check covers isentropic runs only");
  if (series.empty()) throw std::invalid_argument("large_time_check: empty series");
  LargeTimeReport report;
  report.note = "trend-based: finite runs cannot separate uniform bounds from slow growth";
  for (const auto& rec : series) {
    const double mean = rec.mass / rec.total_volume;
    report.tau.push_back(rec.tau);
    report.density_deviation.push_back(std::max(rec.rho_max - mean, mean - rec.rho_min));
    report.gradient_norm.push_back(rec.l2_grad_rho_weighted);
  }
  report.mean_density = series.back().mass / series.back().total_volume;

  const double t_half = 0.5 * (series.front().tau + series.back().tau);
  const auto first = static_cast<std::size_t>(
      std::lower_bound(report.tau.begin(), report.tau.end(), t_half) - report.tau.begin());
  const std::span<const double> t(report.tau.data() + first, report.tau.size() - first);
  const std::span<const double> dev(report.density_deviation.data() + first, t.size());
  const std::span<const double> grad(report.gradient_norm.data() + first, t.size());
  // Values at the rounding floor carry no trend; clamp before fitting.
  constexpr double kFloor = 1e-10;
  constexpr double kSlopeSlack = 1e-9;
  report.deviation_trending_down = trend_slope(t, dev, kFloor) <= kSlopeSlack;
  report.gradient_trending_down = trend_slope(t, grad, kFloor) <= kSlopeSlack;
  report.passed = report.deviation_trending_down && report.gradient_trending_down &&
                  report.density_deviation.back() < thresholds.density_deviation &&
                  report.gradient_norm.back() < thresholds.gradient_norm;
  return report;
}

KappaReport kappa_selection(const SimParams& params, const init::PhysicalProfile& profile,
                            double t_end) {
  KappaReport report;
  report.dimension = params.dimension;
  report.candidate_a = 2.0 * (params.dimension - 1);
  report.candidate_b = 2.0;
  SimParams pa = params, pb = params;
  pa.dissipation_kappa = report.candidate_a;
  pb.dissipation_kappa = report.candidate_b;
  SimParams run = params;
  run.formulation = Formulation::primitive;

  State state = init::normalize_and_sample(profile, run);
  while (state.tau < t_end) {
    const double dt = std::min(solver::stable_dt(state, run), t_end - state.tau);
    State next = solver::step_primitive(state, dt, run).state;
    report.integrated_a += std::abs(energy_residual(state, next, dt, pa)) * dt;
    report.integrated_b += std::abs(energy_residual(state, next, dt, pb)) * dt;
    state = std::move(next);
  }
  const bool a_wins = report.integrated_a <= report.integrated_b;
  report.selected = a_wins ? report.candidate_a : report.candidate_b;
  const double lo = std::min(report.integrated_a, report.integrated_b);
  const double hi = std::max(report.integrated_a, report.integrated_b);
  report.separation = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace lagsw::verify
