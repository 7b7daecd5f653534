#include <gtest/gtest.h>

#include <cmath>

#include "coagfrag/continuum_profile.h"
#include "coagfrag/disc2cont.h"
#include "coagfrag/errors.h"
#include "oracles.h"

namespace coagfrag {
namespace {

TEST(Disc2Cont, BinWidthFromGhostTotal) {
  EXPECT_NEAR(h_from(0.6, 1.0), 0.10666666666666667, 1e-15);
  ScaledEquilibrium se = scaled_equilibrium_from_nu(0.6, 1.0, 100);
  EXPECT_NEAR(se.h, h_from(0.6, 1.0), 1e-15);
  EXPECT_NEAR(se.ghost_f0, 0.4, 1e-15);
  EXPECT_NEAR(se.eq.mu * se.h, 1.0, 1e-12);
}

TEST(Disc2Cont, LeadingGhostDeficit) {
  for (double h : {1e-2, 1e-3}) {
    ScaledEquilibrium se = scaled_equilibrium(1.0, h, 8);
    EXPECT_NEAR(se.nu_h, oracle::u_star_bisection(1.0 / h), 1e-15);
    EXPECT_NEAR((1.0 - se.nu_h) / (1.0 - nu_h_leading(h, 1.0)), 1.0, 5.0 * std::cbrt(h));
  }
}

TEST(Disc2Cont, ScaledTransformIdentity) {
  for (double h : {0.2, 0.05}) {
    ScaledEquilibrium se = scaled_equilibrium(1.0, h);
    std::vector<double> s{0.01, 0.5, 5.0, kSInfinity};
    auto direct = bernstein_of(se.eq.distribution(), s, h);
    for (std::size_t j = 0; j < s.size(); ++j) {
      EXPECT_NEAR(direct[j], scaled_transform_identity(1.0, h, s[j]), 1e-12) << s[j];
    }
  }
}

TEST(Disc2Cont, ScaledTruncationBounds) {
  EXPECT_GE(scaled_truncation(1.0, 0.2), 64u);
  EXPECT_LE(scaled_truncation(1.0, 1e-6), 20000u);
  EXPECT_GT(scaled_truncation(1.0, 0.01), scaled_truncation(1.0, 0.1));
}

TEST(Disc2Cont, Figure2Columns) {
  Figure2Data d = figure2_data(0.6, 1.0, 400);
  ASSERT_EQ(d.rows.size(), 400u);
  EXPECT_NEAR(d.h, 0.10667, 5e-6);
  ContinuumProfile p;
  for (std::size_t k : {0u, 10u, 100u}) {
    const auto& r = d.rows[k];
    EXPECT_DOUBLE_EQ(r.x, (k + 1) * d.h);
    EXPECT_NEAR(r.f_star, p.f_star(r.x), 1e-14 * r.f_star);
    EXPECT_DOUBLE_EQ(r.ratio, r.discrete_over_h / r.f_star);
  }
  EXPECT_LT(asym3_deviation(d, 5.0, 30.0), 0.01);
  std::string csv = figure2_csv(d);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,discrete_over_h,f_star,ratio,asym3");
}

TEST(Disc2Cont, ScaledProfileAtSmallBinWidth) {
  const double h = 0.01;
  ScaledEquilibrium se = scaled_equilibrium(1.0, h, 1100);
  ContinuumProfile p;
  for (double x : {5.0, 10.0}) {
    std::size_t i = static_cast<std::size_t>(std::lround(x / h));
    EXPECT_NEAR(se.eq.f[i - 1] / h / p.f_star(x), 1.0, 0.03) << x;
  }
}

TEST(Disc2Cont, TailAsymptoticMatchesProfileForLargeSizes) {
  // (9 / (8 sqrt(pi))) x^{-3/2} e^{-4x/27} is the large-x form of f_star, not its value at moderate x
  ContinuumProfile p;
  auto lead = [](double x) { return 9.0 / (8.0 * std::sqrt(M_PI)) * std::pow(x, -1.5) * std::exp(-4.0 * x / 27.0); };
  EXPECT_GT(std::abs(p.f_star(5.0) / lead(5.0) - 1.0), 0.3);
  EXPECT_NEAR(p.f_star(2000.0) / lead(2000.0), 1.0, 5e-3);
}

TEST(Disc2Cont, HeadRatioTrend) {
  const double target = std::tgamma(1.0 / 3.0) / 3.0;
  double prev = 0.0;
  for (double h : {1e-2, 1e-3, 1e-4}) {
    double r = head_ratio(h);
    EXPECT_GT(r, prev);
    prev = r;
  }
  EXPECT_NEAR(prev / target, 1.0, 0.05);
}

TEST(Disc2Cont, StaticStudyConvergesAtFirstOrder) {
  std::vector<double> hs{0.2, 0.1, 0.05, 0.025};
  HStudyOptions opts;
  opts.dynamic = false;
  auto rows = h_convergence_study(1.0, hs, default_s_probe(), opts);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_TRUE(std::isnan(rows[0].order));
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_LT(rows[k].E, rows[k - 1].E);
    EXPECT_GE(rows[k].order, 0.9);
    EXPECT_LT(rows[k].identity_error, 1e-10);
  }
  EXPECT_EQ(h_study_csv(rows).substr(0, 8), "h,E,orde");
  std::vector<double> bad{1.5};
  EXPECT_THROW(h_convergence_study(1.0, bad, default_s_probe(), opts), DomainError);
}

TEST(Disc2Cont, GhostFixedPointAtEquilibrium) {
  ScaledEquilibrium se = scaled_equilibrium(1.0, 0.1);
  SimulationConfigD cfg;
  cfg.truncation_n = se.eq.size();
  cfg.t_end = 2.0;
  cfg.dt_init = 0.01;
  GhostTrace g = ghost_trace(se.eq.distribution(), se.ghost_f0, cfg);
  for (double f0 : g.run.ghost_f0_trace) EXPECT_NEAR(f0, se.ghost_f0, 1e-10);
  EXPECT_LT(g.max_deviation, 1e-10);
}

}  // namespace
}  // namespace coagfrag
