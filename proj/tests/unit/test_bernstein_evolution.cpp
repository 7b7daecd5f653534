#include <gtest/gtest.h>

#include <cmath>

#include "coagfrag/bernstein_evolution.h"
#include "coagfrag/continuum_profile.h"
#include "coagfrag/errors.h"
#include "oracles.h"

namespace coagfrag {
namespace {

TEST(BernsteinEvolution, ImexInverseSolvesQuadratic) {
  for (double dt : {1e-4, 0.01, 0.5}) {
    for (double u : {0.0, 1e-12, 0.3, 5.0}) {
      double x = imex_inverse(u, dt);
      EXPECT_NEAR(dt * x * x + (1.0 + dt) * x, u, 1e-15 * (1.0 + u));
      EXPECT_GE(x, 0.0);
    }
  }
}

TEST(BernsteinEvolution, LogGridEndpoints) {
  auto g = log_grid(1e-4, 1e3, 200);
  ASSERT_EQ(g.size(), 200u);
  EXPECT_EQ(g.front(), 1e-4);
  EXPECT_EQ(g.back(), 1e3);
  EXPECT_EQ(default_s_grid(), g);
  EXPECT_THROW(log_grid(0.0, 1.0, 10), DomainError);
}

TEST(BernsteinEvolution, RunningAverageOfKnownTransform) {
  // U = s / (1 + s) has running average 1 - ln(1 + s) / s
  auto field = sample_field(default_s_grid(), [](double s) { return s / (1.0 + s); }, 1.0);
  for (std::size_t j : {0u, 50u, 120u, 199u}) {
    double s = field.s_grid[j];
    double expected = 1.0 - std::log1p(s) / s;
    EXPECT_NEAR(running_average(field, j), expected, 1e-7) << s;
  }
}

TEST(BernsteinEvolution, EquilibriumIsNearlyStationary) {
  BernsteinField eq = equilibrium_field(default_s_grid(), 1.0);
  for (std::size_t j = 0; j < eq.s_grid.size(); ++j) {
    EXPECT_NEAR(eq.values[j], oracle::u_star_bisection(eq.s_grid[j]), 2e-15);
  }
  BernsteinField next = imex_step(eq, 0.01, 0.0);
  for (std::size_t j = 0; j < eq.values.size(); ++j) EXPECT_NEAR(next.values[j], eq.values[j], 1e-9);
  EXPECT_DOUBLE_EQ(next.time, 0.01);
}

TEST(BernsteinEvolution, TrapezoidRuleIsSelectable) {
  BernsteinField eq = equilibrium_field(default_s_grid(), 1.0);
  BernsteinField next = imex_step(eq, 0.01, 0.0, AverageQuadrature::trapezoid);
  double worst = 0.0;
  for (std::size_t j = 0; j < eq.values.size(); ++j) worst = std::max(worst, std::abs(next.values[j] - eq.values[j]));
  EXPECT_GT(worst, 1e-8);
  EXPECT_LT(worst, 1e-3);
}

TEST(BernsteinEvolution, MassAtInfinityFollowsLogistic) {
  auto field = sample_field(default_s_grid(), [](double s) { return 0.4 * s / (1.0 + s); }, 0.4);
  ImexConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 2.0;
  auto records = evolve(field, cfg, 0.0);
  EXPECT_LT(records.back().diagnostics.logistic_deviation, 1e-2);
  EXPECT_NEAR(records.back().field.m0, 1.0 / (1.0 + 1.5 * std::exp(-2.0)), 1e-2);
}

TEST(BernsteinEvolution, FieldStaysIncreasingAndConcave) {
  auto field = sample_field(default_s_grid(), [](double s) { return std::sqrt(s) / (1.0 + std::sqrt(s)); }, 1.0);
  ImexConfig cfg;
  cfg.t_end = 3.0;
  auto records = evolve(field, cfg, 0.0);
  for (const auto& r : records) {
    EXPECT_NO_THROW(r.field.validate(1e-8));
    EXPECT_LE(r.diagnostics.max_growth_excess, 0.0);
  }
}

TEST(BernsteinEvolution, InterpolationReproducesSmoothData) {
  auto field = sample_field(default_s_grid(), [](double s) { return u_star(s); }, 1.0);
  for (double s : {3e-4, 0.05, 1.0, 42.0, 999.0}) EXPECT_NEAR(interpolate(field, s), u_star(s), 1e-7);
  EXPECT_THROW(interpolate(field, 1e4), DomainError);
  EXPECT_NEAR(estimate_slope(field), 1.0, 1e-3);
}

TEST(BernsteinEvolution, ConfigValidation) {
  ImexConfig cfg;
  cfg.dt = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg.dt = 0.6;
  EXPECT_THROW(cfg.validate(), DomainError);
  BernsteinField bad{{1.0, 2.0}, {0.5, 0.4}, 1.0, 0.0};
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(BernsteinEvolution, CsvHasInfinitySlot) {
  auto field = equilibrium_field(log_grid(0.1, 10.0, 8), 1.0);
  std::string csv = to_csv(field);
  EXPECT_EQ(csv.substr(0, 4), "s,U\n");
  EXPECT_NE(csv.find("\ninf,"), std::string::npos);
}

}  // namespace
}  // namespace coagfrag
