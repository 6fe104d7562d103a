#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "lagsw/functionals.hpp"
#include "lagsw/initcond.hpp"
#include "lagsw/solver.hpp"
#include "lagsw/verify.hpp"

namespace lagsw {
namespace {

using std::numbers::pi;
using testing::make_state;
using testing::params_for;
using testing::simpson;
using testing::state_from;

TEST(Functionals, ThreeCellHandValues) {
  auto p = params_for(2, 3, 2.0);
  const State st = make_state({1.0, 2.0, 4.0}, {0.0, 0.1, 0.2}, {0.0, 0.3, -0.2, 0.0}, p);
  EXPECT_NEAR(st.r[1] * st.r[1], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(st.r[2], 1.0, 1e-15);
  const double internal = (1.0 + 2.0 * std::exp(0.1) + 4.0 * std::exp(0.2)) / 3.0;
  EXPECT_NEAR(functionals::basic_energy(st, p), 0.035 / 6.0 + internal, 1e-15);
  EXPECT_NEAR(functionals::basic_dissipation(st, p), 4.265 / 3.0, 1e-14);
  p.dissipation_kappa = 0.0;
  EXPECT_NEAR(functionals::basic_dissipation(st, p), (0.27 + 3.645) / 3.0, 1e-14);
}

TEST(Functionals, ConstantStateClosedForms) {
  for (int n : {2, 3}) {
    auto p = params_for(n, 50, 1.7);
    const State st = init::normalize_and_sample(init::preset("constant", {{"s", 0.4}}, p), p);
    const double c = n;  // n / R^n with R = 1
    const double internal = std::pow(c, 0.7) * std::exp(0.4) / 0.7;
    EXPECT_NEAR(functionals::basic_energy(st, p), internal, 1e-12);
    EXPECT_NEAR(functionals::bd_energy(st, p), internal, 1e-12);
    EXPECT_NEAR(functionals::basic_dissipation(st, p), 0.0, 1e-20);
    EXPECT_NEAR(functionals::bd_dissipation(st, p), 0.0, 1e-20);
    EXPECT_NEAR(functionals::bd_source(st, p), 0.0, 1e-20);
    EXPECT_NEAR(functionals::young_bound(st, p), 0.0, 1e-20);
    EXPECT_NEAR(functionals::weighted_gradient_norm(st, p), 0.0, 1e-9);
  }
}

// rho = 1 + 0.3 cos(pi y), s = 0.2 y^2, u = 0, N = 2, gamma = 1.4.
class SmoothStateOracle : public ::testing::Test {
 protected:
  static double rho(double y) { return 1.0 + 0.3 * std::cos(pi * y); }
  static double drho(double y) { return -0.3 * pi * std::sin(pi * y); }
  static double s(double y) { return 0.2 * y * y; }
  static double ds(double y) { return 0.4 * y; }
  static double r2(double y) {
    return 2.0 * simpson([](double z) { return 1.0 / rho(z); }, 0.0, y, 200);
  }
  static double integral(const std::function<double(double)>& f) { return simpson(f, 0.0, 1.0, 400); }

  SimParams p = params_for(2, 400, 1.4);
  State st = state_from(rho, s, [](double) { return 0.0; }, p);
};

TEST_F(SmoothStateOracle, BdEnergy) {
  const double g = p.gamma;
  const double oracle = integral([&](double y) {
    const double w = 2.0 * std::sqrt(r2(y)) * drho(y);
    return 0.5 * w * w + std::pow(rho(y), g - 1.0) * std::exp(s(y)) / (g - 1.0);
  });
  EXPECT_NEAR(functionals::bd_energy(st, p), oracle, 1e-4 * oracle);
}

TEST_F(SmoothStateOracle, BdDissipation) {
  const double g = p.gamma;
  const double oracle = integral([&](double y) {
    return 2.0 * g * r2(y) * std::pow(rho(y), g - 1.0) * std::exp(s(y)) * drho(y) * drho(y);
  });
  EXPECT_NEAR(functionals::bd_dissipation(st, p), oracle, 1e-4 * oracle);
}

TEST_F(SmoothStateOracle, BdSourceAndYoung) {
  const double g = p.gamma;
  const double source = integral([&](double y) {
    return -2.0 * r2(y) * std::pow(rho(y), g) * std::exp(s(y)) * ds(y) * drho(y);
  });
  const double young = integral([&](double y) {
    return (2.0 / g) * r2(y) * std::pow(rho(y), g + 1.0) * std::exp(s(y)) * ds(y) * ds(y);
  });
  EXPECT_NEAR(functionals::bd_source(st, p), source, 1e-4 * std::abs(source));
  EXPECT_NEAR(functionals::young_bound(st, p), young, 1e-4 * young);
}

TEST_F(SmoothStateOracle, WeightedGradient) {
  const double oracle = std::sqrt(integral([&](double y) { return r2(y) * drho(y) * drho(y); }));
  EXPECT_NEAR(functionals::weighted_gradient_norm(st, p), oracle, 1e-4 * oracle);
}

TEST(Functionals, BasicDissipationContinuumLimit) {
  // rho = 1, N = 2: r^2 = 2y. u = a sin^2(pi y) keeps the integrand zero at both
  // ends, where the interior-node sum has no weight.
  const double a = 0.2;
  auto p = params_for(2, 5000);
  const State st = state_from([](double) { return 1.0; }, [](double) { return 0.0; },
                              [&](double y) { return a * std::sin(pi * y) * std::sin(pi * y); }, p);
  const double oracle = simpson(
      [&](double y) {
        const double du = a * pi * std::sin(2.0 * pi * y), u = a * std::sin(pi * y) * std::sin(pi * y);
        return 2.0 * 2.0 * y * du * du + (y > 0.0 ? 2.0 * u * u / (2.0 * y) : 0.0);
      },
      0.0, 1.0);
  EXPECT_NEAR(functionals::basic_dissipation(st, p), oracle, 1e-6 * oracle);
}

TEST(Functionals, YoungInequalityHoldsOnRandomStates) {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> rho(0.2, 4.0), s(-1.0, 1.0), g(1.05, 2.9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 2;
    auto p = params_for(n, 8 + trial % 23, g(gen));
    std::vector<double> r(p.cells), e(p.cells);
    for (int i = 0; i < p.cells; ++i) {
      r[i] = rho(gen);
      e[i] = s(gen);
    }
    const State st = make_state(r, e, std::vector<double>(p.cells + 1, 0.0), p);
    const double lhs = std::abs(functionals::bd_source(st, p));
    const double rhs = 0.5 * functionals::bd_dissipation(st, p) + functionals::young_bound(st, p);
    EXPECT_LE(lhs, rhs * (1.0 + 1e-12));
  }
}

TEST(Functionals, WeightedOriginNorm) {
  auto p = params_for(3, 3, 1.4);
  const State st = make_state({3.0, 1.5, 3.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, p);
  // r^3 = {0, 1/3, 1, 4/3}
  const double xi = 0.25, e = xi + 0.5;
  const double r1 = std::cbrt(1.0 / 3.0), r2 = 1.0, r3 = std::cbrt(4.0 / 3.0);
  const double oracle = std::max({std::sqrt(3.0) * std::pow(0.5 * r1, e),
                                  std::sqrt(1.5) * std::pow(0.5 * (r1 + r2), e),
                                  std::sqrt(3.0) * std::pow(0.5 * (r2 + r3), e)});
  EXPECT_NEAR(functionals::weighted_origin_norm(st, p, xi), oracle, 1e-14);
  EXPECT_THROW(functionals::weighted_origin_norm(st, p, 1.0), std::invalid_argument);
  EXPECT_THROW(functionals::weighted_origin_norm(st, p, 0.0), std::invalid_argument);
}

TEST(Functionals, LpNorms) {
  const MassGrid g(4);
  const std::vector<double> cells = {1.0, -2.0, 0.0, 3.0};
  EXPECT_NEAR(functionals::lp_norm(cells, 1.0, g), 1.5, 1e-15);
  EXPECT_NEAR(functionals::lp_norm(cells, 2.0, g), std::sqrt(14.0 / 4.0), 1e-15);
  const std::vector<double> nodes = {2.0, 2.0, 2.0, 2.0, 2.0};
  EXPECT_NEAR(functionals::lp_norm(nodes, 4.0, g), 2.0, 1e-15);
  EXPECT_NEAR(functionals::lp_norm(cells, 400.0, g), 3.0, 0.02);
  EXPECT_NEAR(functionals::lp_norm(std::vector<double>{1e300, 1e300, 1e300, 1e300}, 8.0, g), 1e300,
              1e286);
  EXPECT_EQ(functionals::lp_norm(std::vector<double>(4, 0.0), 3.0, g), 0.0);
  EXPECT_EQ(functionals::sup_norm(cells), 3.0);
  EXPECT_THROW(functionals::lp_norm(cells, 0.5, g), std::invalid_argument);
  EXPECT_THROW(functionals::lp_norm(std::vector<double>{1.0}, 2.0, g), std::invalid_argument);
}

TEST(Functionals, IsobaricDensityExtrema) {
  // rho ~ e^{-s/gamma} with s from 0 (walls) to 0.5 (middle).
  auto p = params_for(2, 512, 1.4);
  const State st = init::normalize_and_sample(init::preset("isobaric_steady", {}, p), p);
  const auto [lo, hi] = functionals::density_extrema(st);
  EXPECT_NEAR(hi / lo, std::exp(0.5 / 1.4), 1e-3);
}

TEST(Functionals, RecordMatchesComponents) {
  auto p = params_for(2, 64);
  const State s0 = init::normalize_and_sample(init::preset("entropy_layer", {{"a", 0.2}}, p), p);
  const double dt = solver::stable_dt(s0, p);
  const State s1 = solver::step(s0, dt, p).state;
  const auto rec = functionals::record(s1, p, functionals::PreviousStep{s0, dt});
  EXPECT_EQ(rec.mass, 1.0);
  EXPECT_EQ(rec.tau, s1.tau);
  EXPECT_EQ(rec.e_basic, functionals::basic_energy(s1, p));
  EXPECT_EQ(rec.d_bd, functionals::bd_dissipation(s1, p));
  EXPECT_EQ(rec.s_bd, functionals::bd_source(s1, p));
  EXPECT_EQ(rec.total_volume, total_volume(s1));
  EXPECT_EQ(rec.sup_w, functionals::sup_norm(effective_velocity(s1, p).w));
  EXPECT_TRUE(rec.has_residuals);
  EXPECT_EQ(rec.energy_residual, verify::energy_residual(s0, s1, dt, p));
  EXPECT_EQ(rec.bd_residual, verify::bd_residual(s0, s1, dt, p));
  EXPECT_FALSE(functionals::record(s1, p).has_residuals);
}

}  // namespace
}  // namespace lagsw
