#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "pcurv/energy.hpp"
#include "pcurv/shapes.hpp"
#include "pcurv/surfaces.hpp"

using namespace pcurv;
using oracle::kPi;

namespace {

double parameter_sum(const QuadratureRule& q) {
  double s = 0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * q.density[i];
  return s;
}

double area(const Surface& s) { return energy_ep(s, 2.0).area; }

}  // namespace

TEST(Quadrature, ParameterAreaIsReproduced) {
  const std::vector<Surface> shapes{
      make_flat_graph(16, 12, 1.0, 2.0),
      make_flat_graph(16, 12, 1.0, 2.0, BoundaryCondition::DirichletFixed),
      make_torus(2, 1, 24, 20),
      make_sphere(1, 64),
      make_catenoid_tube(64),
  };
  for (const auto& s : shapes) {
    const auto q = quadrature(s);
    EXPECT_NEAR(parameter_sum(q), q.parameter_area, 1e-12 * q.parameter_area) << kind_name(s);
    for (double w : q.weights) EXPECT_GT(w, 0.0);
  }
  EXPECT_NEAR(quadrature(make_torus(2, 1, 24, 20)).parameter_area, 4 * kPi * kPi, 1e-12);
  EXPECT_NEAR(quadrature(make_sphere(1, 64)).parameter_area, 4 * kPi, 1e-12);
  EXPECT_NEAR(quadrature(make_flat_graph(16, 12, 1.0, 2.0)).parameter_area, 2.0, 1e-12);
}

TEST(Quadrature, DirichletSkipsOuterRing) {
  const auto g = make_flat_graph(10, 10, 1.0, 1.0, BoundaryCondition::DirichletFixed);
  EXPECT_EQ(quadrature(g).nodes.size(), 64u);
  const auto mask = free_dofs(g);
  const std::size_t free = std::accumulate(mask.begin(), mask.end(), std::size_t{0});
  EXPECT_EQ(free, 36u);  // outer two rings frozen
}

TEST(Quadrature, PoleWeights) {
  for (int m : {4, 17, 256}) {
    const auto w = pole_weights(m);
    const double h = kPi / m;
    double sum = 0;
    for (int j = 0; j < m; ++j) {
      sum += w[j];
      const double t = (j + 0.5) * h;
      EXPECT_NEAR(w[j] / std::sin(t), w[0] / std::sin(0.5 * h), 1e-13);
    }
    EXPECT_NEAR(sum, 2.0, 1e-13);
  }
  // second-order accuracy on int cos^2 t sin t = 2/3
  double prev = 0;
  for (int m : {32, 64, 128}) {
    const auto w = pole_weights(m);
    double s = 0;
    for (int j = 0; j < m; ++j) s += w[j] * std::pow(std::cos((j + 0.5) * kPi / m), 2);
    const double err = std::abs(s - 2.0 / 3.0);
    if (prev > 0) EXPECT_GT(prev / err, 3.5);
    prev = err;
  }
}

TEST(Surfaces, AnalyticSphereAreaIsExact) {
  EXPECT_NEAR(area(make_sphere(1, 16)), 4 * kPi, 1e-12);
  EXPECT_NEAR(area(make_sphere(2.5, 33)), 4 * kPi * 6.25, 1e-11);
}

TEST(Surfaces, SampledSphereConverges) {
  double prev = 0;
  for (int m : {64, 128, 256}) {
    const double err = std::abs(area(make_sphere(1, m, Derivatives::Sampled)) - 4 * kPi);
    if (prev > 0) EXPECT_GT(prev / err, 3.5);
    prev = err;
  }
}

TEST(Surfaces, TorusMeanCurvatureConvergesAtSecondOrder) {
  const auto ref = oracle::torus_integrals(2.0, 1.0);
  double prev = 0;
  for (int n : {16, 32, 64}) {
    const auto e = energy_wp(make_torus(2, 1, n, n), 2.0);
    const double err = std::abs(e.intH2 - ref.intH2) / ref.intH2;
    EXPECT_NEAR(e.area, ref.area, 0.06 * ref.area * (16.0 / n) * (16.0 / n));
    if (prev > 0) EXPECT_GT(prev / err, 3.5) << n;
    prev = err;
  }
}

TEST(Surfaces, DofRoundTrip) {
  const Surface s = make_torus(2, 1, 8, 10);
  auto v = std::vector<double>(dofs(s).begin(), dofs(s).end());
  EXPECT_EQ(v.size(), dof_count(s));
  v[5] += 0.25;
  const Surface t = with_dofs(s, v);
  EXPECT_EQ(dofs(t)[5], v[5]);
  EXPECT_THROW(with_dofs(s, std::vector<double>(3, 0.0)), Error);
}

TEST(Surfaces, CyclicShiftRelabelsNodes) {
  const auto t = std::get<TorusGrid>(perturb(make_torus(2, 1, 12, 10), 0.05, 4));
  const auto sh = shifted(t, 3, 5);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 10; ++j) {
      const auto a = node_position(sh, sh.node(i, j));
      const auto b = node_position(t, t.node((i + 3) % 12, (j + 5) % 10));
      for (int k = 0; k < 3; ++k) EXPECT_EQ(a[k], b[k]);
    }
  const double e0 = energy_ep(t, 3).value, e1 = energy_ep(sh, 3).value;
  EXPECT_NEAR(e0, e1, 1e-13 * e0);
}

TEST(Surfaces, PerturbationIsDeterministic) {
  const Surface s = make_sphere(1, 64);
  const auto a = perturb(s, 0.05, 9), b = perturb(s, 0.05, 9), c = perturb(s, 0.05, 10);
  const auto da = dofs(a), db = dofs(b), dc = dofs(c);
  EXPECT_TRUE(std::equal(da.begin(), da.end(), db.begin()));
  EXPECT_FALSE(std::equal(da.begin(), da.end(), dc.begin()));
  const auto z = perturb(s, 0.0, 9);
  const auto dz = dofs(z), ds = dofs(s);
  EXPECT_TRUE(std::equal(dz.begin(), dz.end(), ds.begin()));
  // maximum displacement equals the amplitude
  double mx = 0;
  for (std::size_t i = 0; i < da.size(); i += 2) mx = std::max(mx, std::hypot(da[i] - ds[i], da[i + 1] - ds[i + 1]));
  EXPECT_NEAR(mx, 0.05, 1e-12);
}

TEST(Surfaces, EulerCharacteristic) {
  EXPECT_EQ(euler_characteristic(make_sphere(1, 8)).value(), 2);
  EXPECT_EQ(euler_characteristic(make_torus(2, 1, 8, 8)).value(), 0);
  EXPECT_FALSE(euler_characteristic(make_flat_graph(8, 8)).has_value());
}

TEST(Surfaces, AdjointOfFieldJet) {
  CounterRng rng(21);
  const std::vector<Surface> shapes{make_random_graph(8, 8, 0.1, 3), make_torus(2, 1, 8, 8),
                                    perturb(make_sphere(1, 32), 0.05, 2)};
  for (const auto& s : shapes) {
    const auto mask = free_dofs(s);
    std::vector<double> phi(dof_count(s));
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = mask[i] ? rng.uniform(-1, 1) : 0.0;
    const auto q = quadrature(s);
    for (std::size_t idx = 0; idx < q.nodes.size(); idx += 7) {
      const auto node = q.nodes[idx];
      const Jet2 j = field_jet(s, node, phi);
      SlotDerivative sl;
      for (int a = 0; a < 2; ++a)
        for (int k = 0; k < j.dim; ++k) {
          sl.d_df[a][k] = rng.uniform(-1, 1);
          for (int b = 0; b < 2; ++b) sl.d_d2f[a][b][k] = rng.uniform(-1, 1);
        }
      double lhs = 0;
      for (int a = 0; a < 2; ++a)
        for (int k = 0; k < j.dim; ++k) {
          lhs += j.df[a][k] * sl.d_df[a][k];
          for (int b = 0; b < 2; ++b) lhs += j.d2f[a][b][k] * sl.d_d2f[a][b][k];
        }
      std::vector<double> back(phi.size(), 0.0);
      scatter_adjoint(s, node, sl, 1.0, back);
      double rhs = 0;
      for (std::size_t i = 0; i < phi.size(); ++i) rhs += phi[i] * back[i];
      EXPECT_NEAR(lhs, rhs, 1e-10 * (1 + std::abs(lhs))) << kind_name(s);
    }
  }
}

TEST(Surfaces, ScaledSurface) {
  const Surface s = make_torus(2, 1, 16, 16);
  const double a0 = area(s), a1 = area(scaled(s, 3.0));
  EXPECT_NEAR(a1, 9 * a0, 1e-12 * a1);
}
