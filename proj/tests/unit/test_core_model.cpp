#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "lagsw/mass_grid.hpp"
#include "lagsw/model.hpp"
#include "lagsw/params.hpp"
#include "lagsw/tridiagonal.hpp"

namespace lagsw {
namespace {

using testing::make_state;
using testing::params_for;
using testing::simpson;

TEST(Params, DefaultsValidate) {
  SimParams p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_DOUBLE_EQ(p.kappa(), 2.0);
  p.dimension = 3;
  EXPECT_DOUBLE_EQ(p.kappa(), 4.0);
  p.dissipation_kappa = 2.0;
  EXPECT_DOUBLE_EQ(p.kappa(), 2.0);
}

TEST(Params, RejectsBadFields) {
  auto bad = [](auto mutate) {
    SimParams p;
    mutate(p);
    EXPECT_THROW(p.validate(), std::invalid_argument);
  };
  bad([](SimParams& p) { p.dimension = 4; });
  bad([](SimParams& p) { p.gamma = 1.0; });
  bad([](SimParams& p) { p.domain_radius = 0.0; });
  bad([](SimParams& p) { p.cells = 7; });
  bad([](SimParams& p) { p.dt_policy = DtPolicy::fixed(0.0); });
  bad([](SimParams& p) { p.dt_policy = DtPolicy::cfl(1.5); });
  bad([](SimParams& p) { p.t_end = -1.0; });
  bad([](SimParams& p) { p.origin_weight_xi = 1.0; });
  bad([](SimParams& p) { p.tol_energy = 0.0; });
}

TEST(Params, GammaAdmissibleRange) {
  SimParams p;
  p.gamma = 5.0;
  EXPECT_TRUE(p.gamma_admissible());
  p.dimension = 3;
  EXPECT_FALSE(p.gamma_admissible());
  p.gamma = 2.5;
  EXPECT_TRUE(p.gamma_admissible());
}

TEST(Params, FormulationNames) {
  EXPECT_EQ(parse_formulation("effective"), Formulation::effective);
  EXPECT_EQ(to_string(Formulation::primitive), "primitive");
  EXPECT_THROW(parse_formulation("eulerian"), std::invalid_argument);
}

TEST(MassGrid, PartitionIsExact) {
  for (int m : {8, 10, 37, 128, 1000}) {
    const MassGrid g(m);
    EXPECT_EQ(g.node(0), 0.0);
    EXPECT_EQ(g.node(m), 1.0);
    EXPECT_EQ(g.total_mass(), 1.0);
    for (int i = 0; i < m; ++i) EXPECT_LT(g.node(i), g.node(i + 1));
    EXPECT_DOUBLE_EQ(g.center(0), 0.5 / m);
  }
}

TEST(Pressure, Examples) {
  EXPECT_DOUBLE_EQ(pressure(1.0, 0.0, 1.4), 1.0);
  EXPECT_DOUBLE_EQ(pressure(2.0, 0.0, 2.0), 4.0);
  EXPECT_NEAR(pressure(1.0, std::log(2.0), 1.4), 2.0, 1e-15);
  EXPECT_THROW(pressure(0.0, 0.0, 1.4), std::domain_error);
  EXPECT_THROW(pressure(-1.0, 0.0, 1.4), std::domain_error);
}

TEST(Pressure, MonotoneInDensityAndEntropy) {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> rho(1e-3, 10.0), s(-3.0, 3.0), g(1.01, 3.0);
  for (int k = 0; k < 2000; ++k) {
    const double r1 = rho(gen), r2 = r1 * (1.0 + 1e-6 + std::abs(s(gen)));
    const double e = s(gen), gamma = g(gen);
    EXPECT_GT(pressure(r2, e, gamma), pressure(r1, e, gamma));
    EXPECT_GT(pressure(r1, e + 1e-6, gamma), pressure(r1, e, gamma));
  }
}

TEST(ReconstructRadius, UniformDensityClosedForm) {
  auto p2 = params_for(2, 16);
  const std::vector<double> ones(16, 1.0);
  const auto r2 = reconstruct_radius(ones, MassGrid(16), p2);
  EXPECT_NEAR(r2[8], 1.0, 1e-15);  // y = 0.5, r = sqrt(2y)
  EXPECT_NEAR(r2[16], std::sqrt(2.0), 1e-15);

  auto p3 = params_for(3, 12);
  const std::vector<double> ones3(12, 1.0);
  const auto r3 = reconstruct_radius(ones3, MassGrid(12), p3);
  EXPECT_NEAR(r3[4], 1.0, 1e-15);  // y = 1/3, r = (3y)^{1/3}
}

TEST(ReconstructRadius, LinearDensityAgainstQuadrature) {
  // Cell densities carry the exact cell-averaged specific volume of rho = 1 + y,
  // so the discrete radius equals sqrt(2 * integral of dy/rho) at every node.
  const int m = 64;
  auto p = params_for(2, m);
  const MassGrid g(m);
  std::vector<double> rho(m);
  for (int i = 0; i < m; ++i)
    rho[i] = g.dy() / simpson([](double y) { return 1.0 / (1.0 + y); }, g.node(i), g.node(i + 1), 64);
  const auto r = reconstruct_radius(rho, g, p);
  const double oracle = std::sqrt(2.0 * simpson([](double y) { return 1.0 / (1.0 + y); }, 0.0, 0.5));
  EXPECT_NEAR(r[m / 2], oracle, 1e-13);
}

TEST(ReconstructRadius, GeometryIdentityAndMonotonicity) {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> dist(0.2, 5.0);
  for (int n : {2, 3}) {
    auto p = params_for(n, 200);
    std::vector<double> rho(200);
    for (auto& v : rho) v = dist(gen);
    State st = make_state(rho, std::vector<double>(200, 0.0), std::vector<double>(201, 0.0), p);
    EXPECT_LE(geometry_defect(st, n), 1e-12 * std::max(1.0, std::pow(st.r.back(), n)));
    EXPECT_EQ(st.r.front(), 0.0);
    for (std::size_t i = 0; i + 1 < st.r.size(); ++i) EXPECT_LT(st.r[i], st.r[i + 1]);
    EXPECT_EQ(check_state(st), "");
  }
}

TEST(ReconstructRadius, OuterRadiusMatchesVolume) {
  // rho = N / R^N everywhere gives total volume R^N / N.
  for (int n : {2, 3}) {
    const double big_r = 1.7;
    auto p = params_for(n, 100);
    p.domain_radius = big_r;
    const std::vector<double> rho(100, n / std::pow(big_r, n));
    const auto r = reconstruct_radius(rho, MassGrid(100), p);
    EXPECT_NEAR(r.back(), big_r, 1e-14);
  }
}

TEST(NodalGradient, ExactForQuadratics) {
  const int m = 10;
  const MassGrid g(m);
  std::vector<double> f(m);
  for (int i = 0; i < m; ++i) f[i] = g.center(i) * g.center(i);
  const auto d = nodal_gradient(f, g.dy());
  EXPECT_NEAR(d[0], 0.0, 1e-13);
  EXPECT_NEAR(d[m], 2.0, 1e-13);
  for (int j = 1; j < m; ++j) EXPECT_NEAR(d[j], 2.0 * g.node(j), 1e-13);
  EXPECT_THROW(nodal_gradient(std::vector<double>{1.0, 2.0}, 0.5), std::invalid_argument);
}

TEST(EffectiveVelocity, ConstantDensityGivesU) {
  auto p = params_for(3, 20);
  std::vector<double> u(21);
  for (int j = 1; j < 20; ++j) u[j] = std::sin(0.3 * j);
  const State st = make_state(std::vector<double>(20, 2.5), std::vector<double>(20, 0.1), u, p);
  const auto w = effective_velocity(st, p).w;
  for (int j = 1; j < 20; ++j) EXPECT_EQ(w[j], u[j]);
}

TEST(EffectiveVelocity, LinearDensityAgainstQuadrature) {
  const int m = 400;
  auto p = params_for(2, m);
  const MassGrid g(m);
  std::vector<double> rho(m);
  for (int i = 0; i < m; ++i)
    rho[i] = g.dy() / simpson([](double y) { return 1.0 / (1.0 + y); }, g.node(i), g.node(i + 1), 32);
  const State st = make_state(rho, std::vector<double>(m, 0.0), std::vector<double>(m + 1, 0.0), p);
  const auto w = effective_velocity(st, p).w;
  for (int j : {1, 50, 200, 399}) {
    // w = 2 r d_y rho with d_y rho = 1 and r^2 = 2 * integral of dy/(1+y).
    const double r = std::sqrt(2.0 * simpson([](double y) { return 1.0 / (1.0 + y); }, 0.0, g.node(j)));
    EXPECT_NEAR(w[j], 2.0 * r, 1e-5) << "node " << j;
  }
}

TEST(RecoverVelocity, RoundTripOnRandomSmoothStates) {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> amp(-0.5, 0.5);
  for (int n : {2, 3}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int m = 50 + trial;
      auto p = params_for(n, m);
      const double a = amp(gen), b = amp(gen), c = amp(gen);
      const State st = testing::state_from(
          [&](double y) { return 1.5 + a * std::cos(3.0 * y) + 0.2 * b * y * y; },
          [&](double y) { return c * y; }, [&](double y) { return b * std::sin(M_PI * y); }, p);
      const auto eff = effective_velocity(st, p);
      const auto u = recover_velocity(eff, st.rho, st.r, p);
      double scale = 0.0;
      for (double v : eff.w) scale = std::max(scale, std::abs(v));
      for (std::size_t j = 0; j < u.size(); ++j)
        EXPECT_LE(std::abs(u[j] - st.u[j]), 1e-13 * std::max(1.0, scale));
      EXPECT_EQ(u.front(), 0.0);
      EXPECT_EQ(u.back(), 0.0);
    }
  }
}

TEST(RecoverVelocity, ZeroEffectiveVelocityAtConstantDensity) {
  auto p = params_for(2, 12);
  const std::vector<double> rho(12, 3.0);
  const auto r = reconstruct_radius(rho, MassGrid(12), p);
  const auto u = recover_velocity(EffectiveState{std::vector<double>(13, 0.0)}, rho, r, p);
  for (double v : u) EXPECT_EQ(v, 0.0);
}

TEST(State, CheckStateReportsViolations) {
  auto p = params_for(2, 8);
  State st = make_state(std::vector<double>(8, 1.0), std::vector<double>(8, 0.0),
                        std::vector<double>(9, 0.0), p);
  EXPECT_EQ(check_state(st), "");
  State bad = st;
  bad.rho[3] = -1.0;
  EXPECT_NE(check_state(bad), "");
  bad = st;
  bad.u[8] = 0.1;
  EXPECT_NE(check_state(bad), "");
  bad = st;
  bad.s.pop_back();
  EXPECT_NE(check_state(bad), "");
  State other = make_state(std::vector<double>(9, 1.0), std::vector<double>(9, 0.0),
                           std::vector<double>(10, 0.0), p);
  EXPECT_THROW(require_same_grid(st, other), std::invalid_argument);
}

TEST(Tridiagonal, SolvesRandomSpdSystems) {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (std::size_t n : {1u, 2u, 7u, 300u}) {
    SymmetricTridiagonal a(n);
    for (std::size_t i = 0; i + 1 < n; ++i) a.off[i] = dist(gen);
    for (std::size_t i = 0; i < n; ++i)
      a.diag[i] = 2.0 + std::abs(dist(gen)) + (i > 0 ? std::abs(a.off[i - 1]) : 0.0) +
                  (i + 1 < n ? std::abs(a.off[i]) : 0.0);
    std::vector<double> x(n);
    for (auto& v : x) v = dist(gen);
    auto b = multiply(a, x);
    solve_tridiagonal(a, b);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(b[i], x[i], 1e-13);
  }
}

TEST(Tridiagonal, BreakdownThrows) {
  SymmetricTridiagonal a(3);
  a.diag = {1.0, 1.0, 1.0};
  a.off = {1.0, 0.0};  // second pivot is zero
  std::vector<double> b = {1.0, 1.0, 1.0};
  EXPECT_THROW(solve_tridiagonal(a, b), SolverError);
  std::vector<double> wrong = {1.0};
  EXPECT_THROW(solve_tridiagonal(a, wrong), std::invalid_argument);
}

}  // namespace
}  // namespace lagsw
