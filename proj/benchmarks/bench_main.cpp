#include <benchmark/benchmark.h>

#include "pcurv/energy.hpp"
#include "pcurv/shapes.hpp"
#include "pcurv/variation.hpp"

using namespace pcurv;

static void BM_EnergyTorus(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto s = perturb(make_torus(2, 1, n, n), 0.1, 1);
  for (auto _ : st) benchmark::DoNotOptimize(energy_ep(s, 3.0).value);
  st.SetItemsProcessed(st.iterations() * n * n);
}
BENCHMARK(BM_EnergyTorus)->Arg(32)->Arg(64)->Arg(128);

static void BM_EnergyTorusThreads(benchmark::State& st) {
  const auto s = perturb(make_torus(2, 1, 128, 128), 0.1, 1);
  EvalOptions o;
  o.threads = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(energy_ep(s, 3.0, o).value);
}
BENCHMARK(BM_EnergyTorusThreads)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

static void BM_GradientTorus(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto s = perturb(make_torus(2, 1, n, n), 0.1, 1);
  for (auto _ : st) benchmark::DoNotOptimize(discrete_gradient(s, 3.0, Functional::Wp).energy);
  st.SetItemsProcessed(st.iterations() * n * n);
}
BENCHMARK(BM_GradientTorus)->Arg(32)->Arg(64)->Arg(128);

static void BM_GradientSphere(benchmark::State& st) {
  const auto s = perturb(make_sphere(1.0, static_cast<int>(st.range(0))), 0.05, 1);
  for (auto _ : st) benchmark::DoNotOptimize(discrete_gradient(s, 4.0, Functional::Ep).energy);
}
BENCHMARK(BM_GradientSphere)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_PSSurrogate(benchmark::State& st) {
  const auto s = perturb(make_sphere(1.0, 1024), 0.05, 1);
  const auto dict = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(ps_norm_surrogate(s, 4.0, Functional::Ep, dict).surrogate);
}
BENCHMARK(BM_PSSurrogate)->Arg(4)->Arg(16);

static void BM_GrowthCertification(benchmark::State& st) {
  const auto samples = draw_bound_samples(1, 1.0, 1000, 3);
  for (auto _ : st) benchmark::DoNotOptimize(verify_growth(3.0, 1.0, samples).spread);
}
BENCHMARK(BM_GrowthCertification);
BENCHMARK_MAIN();
