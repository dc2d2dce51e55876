#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pcurv/energy.hpp"
#include "pcurv/shapes.hpp"

using namespace pcurv;
using oracle::kPi;

TEST(Neck, TangencyAndJunctionGaps) {
  for (double eps : {0.1, 0.05, 0.025, 0.0125}) {
    const auto ng = neck_geometry(eps);
    EXPECT_LT(ng.c0_gap, 1e-10) << eps;
    EXPECT_LT(ng.c1_gap, 1e-8) << eps;
    // independent check: the catenoid r = eps cosh(z/eps) passes through the
    // cap circle point and has the circle's slope there
    const double phi = ng.cap_angle;
    const double r = std::sin(phi);
    const double zc = -ng.center_offset + std::cos(phi);  // lower sphere, measured from its center
    EXPECT_NEAR(eps * std::cosh(zc / eps), r, 1e-10);
    // circle slope dr/dz at that point is -cot(phi) relative to the lower
    // sphere; catenoid slope is sinh(z/eps)
    EXPECT_NEAR(std::sinh(zc / eps), -std::cos(phi) / std::sin(phi), 1e-7 / eps);
    EXPECT_GT(phi, 0.0);
    EXPECT_LE(phi, kPi / 4);
  }
}

TEST(Neck, ProfileCurveIsC1AcrossJunctions) {
  const double eps = 0.05;
  const auto prof = make_neck_family(eps, 1024);
  const auto& curve = prof.curve();
  double worst0 = 0, worst1 = 0;
  const int n = 200000;
  ProfileJet prev = curve(0.0);
  for (int i = 1; i <= n; ++i) {
    const ProfileJet cur = curve(kPi * i / n);
    worst0 = std::max(worst0, std::hypot(cur.r - prev.r, cur.z - prev.z));
    worst1 = std::max(worst1, std::hypot(cur.dr - prev.dr, cur.dz - prev.dz));
    prev = cur;
  }
  // speed and tangent are continuous: successive samples stay close
  const double speed = neck_geometry(eps).total_length / kPi;
  EXPECT_LT(worst0, 1.01 * speed * kPi / n);
  EXPECT_LT(worst1, 1e-2);
}

TEST(Neck, WillmoreBelowEightPiAndIncreasing) {
  double prev = 0;
  for (double eps : {0.1, 0.05, 0.025}) {
    const double w = willmore(make_neck_family(eps, 2048)).willmore;
    EXPECT_LT(w, 8 * kPi);
    EXPECT_GT(w, prev);
    EXPECT_GT(w, 4 * kPi);
    prev = w;
  }
}

TEST(Neck, RejectsBadInput) {
  EXPECT_THROW(neck_geometry(0.0), InvalidArgument);
  EXPECT_THROW(neck_geometry(0.9), MatchingFailed);
  EXPECT_THROW(make_neck_family(0.1, 100), InvalidArgument);
}

TEST(Shapes, CliffordTorusIsFlatAndMinimalInS3) {
  // |H|^2 = 4 pointwise, so W = area = 2 pi^2; the stencil error is second order
  double prev_a = 0, prev_w = 0;
  for (int n : {16, 32, 64}) {
    const auto e = energy_wp(make_clifford_torus(n, n), 2.0);
    const double ea = std::abs(e.area - 2 * kPi * kPi), ew = std::abs(e.willmore - 2 * kPi * kPi);
    if (prev_a > 0) {
      EXPECT_GT(prev_a / ea, 3.5);
      EXPECT_GT(prev_w / ew, 3.5);
    }
    prev_a = ea, prev_w = ew;
  }
}

TEST(Shapes, FlatGraphsAreFlat) {
  const auto g = make_flat_graph(12, 12, 1.0, 1.0, BoundaryCondition::Periodic, 5);
  EXPECT_EQ(g.dim, 5);
  const auto e = energy_ep(g, 3.0);
  EXPECT_NEAR(e.intA2, 0.0, 1e-14);
  EXPECT_NEAR(e.area, 1.0, 1e-12);
}

TEST(Shapes, ParaboloidHasUnitHessian) {
  const auto g = make_paraboloid_graph(9, 9, 1.0, 1.0, BoundaryCondition::DirichletFixed);
  const auto q = quadrature(g);
  for (auto node : q.nodes) {
    const auto j = jet_at(g, node);
    EXPECT_NEAR(j.d2f[0][0][2], 1.0, 1e-10);
    EXPECT_NEAR(j.d2f[1][1][2], 1.0, 1e-10);
    EXPECT_NEAR(j.d2f[0][1][2], 0.0, 1e-10);
  }
}

TEST(Shapes, RandomGraphIsSeeded) {
  const auto a = make_random_graph(10, 10, 0.1, 5), b = make_random_graph(10, 10, 0.1, 5);
  EXPECT_EQ(a.u, b.u);
  double mx = 0;
  for (double v : a.u) mx = std::max(mx, std::abs(v));
  EXPECT_NEAR(mx, 0.1, 1e-12);
}
