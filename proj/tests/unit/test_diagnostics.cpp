#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pcurv/diagnostics.hpp"
#include "pcurv/shapes.hpp"

using namespace pcurv;
using oracle::kPi;

namespace {

std::vector<double> sigma_grid() {
  std::vector<double> s;
  for (double x = 0.05; x < 2.0; x += 0.15) s.push_back(x);
  return s;
}

}  // namespace

TEST(Monotonicity, UnitSphereRatioIsPi) {
  const auto s = make_sphere(1, 1024);
  const auto sig = sigma_grid();
  for (VecN<double> c : {VecN<double>{0, 0, -1}, VecN<double>{1, 0, 0}, VecN<double>{0.6, 0, 0.8}}) {
    const auto r = monotonicity_scan(s, c, sig, 3.0);
    ASSERT_EQ(r.ratios.size(), sig.size());
    EXPECT_NEAR(r.willmore, 4 * kPi, 1e-10);
    for (std::size_t k = 0; k < sig.size(); ++k) {
      EXPECT_NEAR(r.ratios[k], kPi, 1e-3) << sig[k];
      // cap area pi sigma^2 with |H| = 2: rhs = pi + pi sigma
      EXPECT_NEAR(r.rhs_simon[k], kPi + kPi * sig[k], 2e-3 * (1 + sig[k]));
    }
    EXPECT_GE(r.min_slack, -2e-3);
    EXPECT_FALSE(r.likely_self_intersecting);
  }
}

TEST(Monotonicity, BallAreaMatchesCapFormula) {
  // ball of radius s around a point of the unit sphere cuts a cap of area pi s^2
  const auto r = monotonicity_scan(make_sphere(1, 512), {0, 0, -1}, {0.5, 1.0, 1.5}, 3.0);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(r.ball_area[k], kPi * r.sigmas[k] * r.sigmas[k], 2e-3);
}

TEST(Monotonicity, TorusSatisfiesSimonBound) {
  const auto t = make_torus(2, 1, 64, 64);
  for (VecN<double> c : {VecN<double>{3, 0, 0}, VecN<double>{0, 1, 0}, VecN<double>{2, 0, 1}})
    EXPECT_GE(monotonicity_scan(t, c, sigma_grid(), 3.0).min_slack, -2e-3);
}

TEST(Monotonicity, FittedConstantCoversRatios) {
  const auto r = monotonicity_scan(make_torus(2, 1, 48, 48), {3, 0, 0}, sigma_grid(), 3.0);
  EXPECT_GE(r.fitted_c, 0.0);
  for (std::size_t k = 0; k < r.sigmas.size(); ++k) EXPECT_LE(r.ratios[k], r.rhs_es[k] * (1 + 1e-12));
}

TEST(Monotonicity, RequiresClosedSurface) {
  EXPECT_THROW(monotonicity_scan(make_flat_graph(8, 8), {0, 0, 0}, {0.5}, 3.0), NotClosed);
}

TEST(Monotonicity, SeparationRatio) {
  EXPECT_GT(separation_ratio(make_sphere(1, 128)), 0.5);
  EXPECT_GT(separation_ratio(make_torus(2, 1, 32, 32)), 0.5);
}

TEST(Neck, ScanInvariants) {
  const auto rep = neck_scan({0.1, 0.05, 0.025}, 3.0, 2048);
  ASSERT_EQ(rep.rows.size(), 3u);
  std::vector<double> lx, ly;
  for (const auto& row : rep.rows) {
    EXPECT_LT(row.willmore, 8 * kPi);
    EXPECT_LT(row.c0_gap, 1e-10);
    lx.push_back(std::log(row.eps));
    ly.push_back(std::log(row.ep));
  }
  EXPECT_NEAR(rep.slope, fit_slope(lx, ly), 1e-14);
  EXPECT_EQ(rep.local_slopes.size(), 2u);
  EXPECT_GE(rep.wp_spread, 1.0);
  EXPECT_LE(rep.wp_spread, 1.2);
  EXPECT_THROW(neck_scan({0.05, 0.1}, 3.0, 1024), InvalidArgument);
  EXPECT_THROW(neck_scan({0.1}, 2.0, 1024), InvalidArgument);
}

TEST(Neck, FitSlope) {
  EXPECT_NEAR(fit_slope({0, 1, 2, 3}, {1, -1, -3, -5}), -2.0, 1e-15);
}

TEST(Suite, IdentityRowsPass) {
  IdentityOptions o;
  o.profile_count = 128;
  o.torus_count = 32;
  const auto rows = identity_suite(o);
  EXPECT_GT(rows.size(), 10u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.error.empty()) << r.shape << " " << r.check << ": " << r.error;
    EXPECT_TRUE(r.pass) << r.shape << " " << r.check << " value " << r.value << " tol " << r.tolerance;
  }
}
