#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pcurv/energy.hpp"
#include "pcurv/optimize.hpp"
#include "pcurv/shapes.hpp"

using namespace pcurv;
using oracle::kPi;

TEST(Energy, SphereClosedForms) {
  const auto s = make_sphere(1, 256);
  for (double p : {2.0, 2.5, 3.0, 4.0, 6.0}) {
    EXPECT_NEAR(energy_ep(s, p).value, oracle::sphere_ep(p), 1e-12 * oracle::sphere_ep(p)) << p;
    EXPECT_NEAR(energy_wp(s, p).value, oracle::sphere_wp(p), 1e-12 * oracle::sphere_wp(p)) << p;
  }
  const auto big = make_sphere(1.7, 128);
  EXPECT_NEAR(energy_ep(big, 3).value, oracle::sphere_ep(3, 1.7), 1e-11);
  EXPECT_NEAR(energy_wp(big, 3).value, oracle::sphere_wp(3, 1.7), 1e-11);
}

TEST(Energy, FlatGraphQuarterArea) {
  for (double p : {2.0, 3.0, 5.5}) {
    EXPECT_NEAR(energy_ep(make_flat_graph(16, 16), p).value, 0.25, 1e-14);
    EXPECT_NEAR(energy_wp(make_flat_graph(10, 10, 2.0, 3.0, BoundaryCondition::Periodic, 4), p).value, 1.5, 1e-13);
  }
}

TEST(Energy, SphereFamilyMinimaByGoldenSection) {
  for (auto functional : {Functional::Ep, Functional::Wp}) {
    const auto [r, e] = oracle::golden_min(
        [&](double radius) { return energy(make_sphere(radius, 128), 4.0, functional).value; }, 0.5, 4.0, 1e-9);
    const double want = functional == Functional::Ep ? 8 * kPi : 16 * kPi;
    EXPECT_NEAR(e, want, 1e-10 * want);
    EXPECT_NEAR(r, functional == Functional::Ep ? std::sqrt(2.0) : 2.0, 1e-6);
    EXPECT_NEAR(sphere_critical_energy(4.0, functional), want, 1e-12 * want);
  }
  for (double p : {2.5, 3.0, 5.0}) {
    const auto [r, e] = oracle::golden_min(
        [&](double radius) { return energy_ep(make_sphere(radius, 64), p).value; }, 0.1, 4.0, 1e-9);
    const double closed = kPi * std::pow(p, p / 2) * std::pow(p - 2, 1 - p / 2);
    EXPECT_NEAR(e, closed, 1e-9 * closed);
    EXPECT_NEAR(r, sphere_critical_radius(p, Functional::Ep), 1e-6);
  }
}

TEST(Energy, CatenoidIsMinimal) {
  const auto c = make_catenoid_tube(256);
  const auto base = energy_wp(c, 2.0);
  EXPECT_LT(base.intH2, 1e-20 + 1e-12 * base.area);
  for (double p : {2.5, 3.0, 6.0}) EXPECT_NEAR(energy_wp(c, p).value, base.area / 4, 1e-12 * base.area);
  // exact area 2 pi (1 + sinh(2)/2) for |z| <= 1; midpoint in t is second order
  const double exact = 2 * kPi * (1 + std::sinh(2.0) / 2);
  EXPECT_NEAR(base.area, exact, 1e-4 * exact);
}

TEST(Energy, GaussBonnetValues) {
  const auto ws = willmore(make_sphere(1, 256));
  EXPECT_NEAR(ws.willmore, 4 * kPi, 1e-12);
  EXPECT_NEAR(ws.intA2, 8 * kPi, 1e-11);
  EXPECT_LT(std::abs(ws.gauss_bonnet_defect), 1e-11);
  EXPECT_EQ(ws.euler_characteristic, 2);

  const auto ref = oracle::torus_integrals(2.0, 1.0);
  const auto wt = willmore(make_torus(2, 1, 128, 128));
  EXPECT_NEAR(wt.willmore, ref.intH2 / 4, 1e-3 * ref.intH2);
  EXPECT_NEAR(ref.intH2 / 4, 4 * kPi * kPi / std::sqrt(3.0), 1e-9);
  EXPECT_LT(std::abs(wt.gauss_bonnet_defect), 1e-3);

  const auto wc = willmore(make_clifford_torus(64, 64));
  EXPECT_NEAR(wc.willmore, 2 * kPi * kPi, 5e-3 * 2 * kPi * kPi);
  EXPECT_THROW(willmore(make_flat_graph(8, 8)), NotClosed);
}

TEST(Energy, ScalingIdentities) {
  const std::vector<Surface> shapes{make_sphere(1, 128), perturb(make_torus(2, 1, 32, 32), 0.1, 3),
                                    make_clifford_torus(16, 16)};
  for (const auto& s : shapes)
    for (double lambda : {0.5, 2.0, 3.7}) {
      const auto r = scaling_check(s, lambda, 3.0);
      EXPECT_LT(r.willmore, 1e-12) << kind_name(s);
      EXPECT_LT(r.energy, 1e-12) << kind_name(s);
    }
}

TEST(Energy, MonotoneInExponent) {
  const std::vector<Surface> shapes{perturb(make_sphere(1, 128), 0.05, 1), make_random_graph(12, 12, 0.1, 2),
                                    make_torus(2, 1, 24, 24)};
  for (const auto& s : shapes) {
    double pe = 0, pw = 0;
    for (double p : {2.0, 2.5, 3.0, 4.0, 5.0, 6.0}) {
      const double e = energy_ep(s, p).value, w = energy_wp(s, p).value;
      EXPECT_GE(e, pe);
      EXPECT_GE(w, pw);
      pe = e, pw = w;
    }
  }
}

TEST(Energy, ThreadCountDoesNotChangeBits) {
  const auto s = perturb(make_torus(2, 1, 40, 40), 0.1, 7);
  EvalOptions one, many;
  many.threads = 5;
  EXPECT_EQ(energy_ep(s, 3, one).value, energy_ep(s, 3, many).value);
  EXPECT_EQ(energy_wp(s, 3, one).value, energy_wp(s, 3, many).value);
}

TEST(Energy, PerNodeValuesSumToEnergy) {
  const auto s = make_random_graph(10, 10, 0.1, 4);
  EvalOptions o;
  o.keep_per_node = true;
  const auto e = energy_ep(s, 3, o);
  ASSERT_EQ(e.per_node.size(), quadrature(s).nodes.size());
  double sum = 0;
  for (double v : e.per_node) sum += v;
  EXPECT_NEAR(sum, e.value, 1e-12 * e.value);
}

TEST(Energy, RejectsBadInput) {
  EXPECT_THROW(energy_ep(make_sphere(1, 16), 1.5), InvalidArgument);
  auto t = make_torus(2, 1, 8, 8);
  for (int k = 0; k < 3; ++k) t.f[t.node(3, 3) * 3 + k] = t.f[t.node(3, 4) * 3 + k];
  for (int k = 0; k < 3; ++k) t.f[t.node(3, 5) * 3 + k] = t.f[t.node(3, 4) * 3 + k];
  try {
    energy_ep(t, 3);
    FAIL() << "expected DegenerateJet";
  } catch (const DegenerateJet& e) {
    EXPECT_TRUE(e.node().has_value());
  }
}
