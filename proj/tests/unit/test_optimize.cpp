#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pcurv/energy.hpp"
#include "pcurv/optimize.hpp"
#include "pcurv/shapes.hpp"

using namespace pcurv;
using oracle::kPi;

namespace {

OptimizerConfig sobolev(int iters = 400) {
  OptimizerConfig c;
  c.metric = DescentMetric::Sobolev;
  c.max_iters = iters;
  return c;
}

void expect_armijo(const OptRun& run, double c) {
  for (std::size_t k = 1; k < run.trace.size(); ++k) {
    const auto& prev = run.trace[k - 1];
    const auto& cur = run.trace[k];
    EXPECT_LT(prev.slope, 0.0);
    EXPECT_LE(cur.energy, prev.energy + c * cur.step * prev.slope + 1e-13 * std::abs(prev.energy)) << k;
    EXPECT_GT(cur.min_detg, 1e-12);
  }
}

}  // namespace

TEST(Optimizer, ValidateRejectsBadSettings) {
  auto bad = [](auto edit) {
    OptimizerConfig c;
    edit(c);
    EXPECT_THROW(c.validate(), InvalidArgument);
  };
  bad([](auto& c) { c.max_iters = -1; });
  bad([](auto& c) { c.armijo_c = 0.7; });
  bad([](auto& c) { c.backtrack_factor = 1.0; });
  bad([](auto& c) { c.init_step = 0.0; });
  bad([](auto& c) { c.energy_window = 0; });
  bad([](auto& c) { c.ps_dictionary = 0; });
  bad([](auto& c) {
    c.metric = DescentMetric::Sobolev;
    c.method = DescentMethod::LBFGS;
  });
  EXPECT_NO_THROW(OptimizerConfig{}.validate());
  EXPECT_THROW(minimize(make_sphere(1, 64), 1.5, Functional::Ep), InvalidArgument);
}

TEST(Optimizer, RecoversCriticalSphereWithSobolevMetric) {
  const double p = 4.0;
  for (auto fn : {Functional::Ep, Functional::Wp}) {
    const auto start = perturb(make_sphere(1.0, 256), 0.05, 1);
    const auto run = minimize(start, p, fn, sobolev());
    ASSERT_NE(run.status, OptStatus::DegenerateStep);
    ASSERT_NE(run.status, OptStatus::MaxIters);
    const double r = mean_radius(run.final_surface);
    EXPECT_NEAR(r, sphere_critical_radius(p, fn), 1e-2 * sphere_critical_radius(p, fn));
    EXPECT_NEAR(run.trace.back().energy, sphere_critical_energy(p, fn), 5e-3 * sphere_critical_energy(p, fn));
    EXPECT_LT(run.final_ps, 1e-2 * run.initial_ps);
    expect_armijo(run, OptimizerConfig{}.armijo_c);
  }
}

TEST(Optimizer, EuclideanDescentDecreasesEnergyOnGraphs) {
  OptimizerConfig c;
  c.max_iters = 60;
  const auto run = minimize(make_random_graph(12, 12, 0.1, 3), 3.0, Functional::Ep, c);
  EXPECT_LT(run.trace.back().energy, run.trace.front().energy);
  expect_armijo(run, c.armijo_c);
  c.method = DescentMethod::LBFGS;
  const auto lb = minimize(make_random_graph(12, 12, 0.1, 3), 3.0, Functional::Ep, c);
  EXPECT_LT(lb.trace.back().energy, lb.trace.front().energy);
  expect_armijo(lb, c.armijo_c);
}

TEST(Optimizer, TraceIsDeterministic) {
  const auto start = perturb(make_sphere(1.0, 128), 0.05, 2);
  auto cfg = sobolev(30);
  const auto a = minimize(start, 3.0, Functional::Wp, cfg);
  const auto b = minimize(start, 3.0, Functional::Wp, cfg);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    EXPECT_EQ(a.trace[k].energy, b.trace[k].energy);
    EXPECT_EQ(a.trace[k].ps, b.trace[k].ps);
    EXPECT_EQ(a.trace[k].step, b.trace[k].step);
  }
  cfg.threads = 3;
  const auto c = minimize(start, 3.0, Functional::Wp, cfg);
  ASSERT_EQ(a.trace.size(), c.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k)
    EXPECT_NEAR(a.trace[k].energy, c.trace[k].energy, 1e-12 * a.trace[k].energy);
}

TEST(Optimizer, ConvergedPSRespectsTolerance) {
  OptimizerConfig c = sobolev(5);
  for (auto fn : {Functional::Ep, Functional::Wp}) {
    // the discrete surrogate at the exact critical sphere is O(h^2); larger for W^p
    c.stop_ps_tol = fn == Functional::Ep ? 1e-6 : 2e-6;
    const auto run = minimize(make_sphere(sphere_critical_radius(4.0, fn), 4096), 4.0, fn, c);
    EXPECT_EQ(run.status, OptStatus::ConvergedPS);
    EXPECT_EQ(run.trace.size(), 1u);
    EXPECT_LE(run.final_ps, run.ps_tol);
    EXPECT_EQ(run.ps_tol, c.stop_ps_tol);
    EXPECT_NEAR(run.trace[0].energy, sphere_critical_energy(4.0, fn), 5e-3 * sphere_critical_energy(4.0, fn));
  }
}

TEST(Optimizer, MaxItersZeroReturnsStart) {
  OptimizerConfig c;
  c.max_iters = 0;
  const auto s = make_torus(2, 1, 12, 12);
  const auto run = minimize(s, 3.0, Functional::Ep, c);
  EXPECT_EQ(run.status, OptStatus::MaxIters);
  ASSERT_EQ(run.trace.size(), 1u);
  EXPECT_EQ(run.trace[0].energy, energy_ep(s, 3.0).value);
}

TEST(Optimizer, MeanRadius) {
  EXPECT_NEAR(mean_radius(make_sphere(1.7, 128)), 1.7, 1e-12);
  EXPECT_NEAR(sphere_critical_radius(3.0, Functional::Wp), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(sphere_critical_radius(2.0, Functional::Ep), InvalidArgument);
}

TEST(Optimizer, SphereSweep) {
  const auto cfg = sobolev(300);
  const auto rep = p_sweep([](double) { return perturb(make_sphere(1.0, 192), 0.05, 4); }, {3.0, 4.0}, Functional::Ep,
                           cfg);
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_TRUE(rep.monotone);
  for (const auto& row : rep.rows) {
    EXPECT_TRUE(row.error.empty());
    const double want = kPi * std::pow(row.p, row.p / 2) * std::pow(row.p - 2, 1 - row.p / 2);
    EXPECT_NEAR(row.energy, want, 1e-2 * want);
    EXPECT_LT(row.willmore, 8 * kPi);
  }
  EXPECT_THROW(p_sweep([](double) { return make_sphere(1, 64); }, {2.0}, Functional::Ep), InvalidArgument);
}
