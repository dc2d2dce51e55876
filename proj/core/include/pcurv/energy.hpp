#pragma once

#include <vector>

#include "pcurv/surfaces.hpp"

namespace pcurv {

struct EvalOptions {
  int threads = 1;
  bool keep_per_node = false;
};

// Per-quadrature-node samples shared by every energy.
struct NodeSample {
  std::size_t node = 0;
  double weight = 0;    // quadrature weight
  double sqrtdetg = 0;
  double normA2 = 0;
  double normH2 = 0;
};

// Evaluates curvature data at every quadrature node. A DegenerateJet is
// rethrown with the offending node index.
std::vector<NodeSample> sample_nodes(const Surface& s, int threads = 1);

struct EnergyReport {
  double p = 2;
  Functional functional = Functional::Ep;
  double value = 0;     // 1/4 int (1 + |.|^2)^{p/2} dmu
  double area = 0;
  double willmore = 0;  // 1/4 int |H|^2 dmu
  double intA2 = 0;
  double intH2 = 0;
  std::vector<double> per_node;  // weighted integrand, filled on request
};

EnergyReport energy_ep(const Surface& s, double p, const EvalOptions& opts = {});
EnergyReport energy_wp(const Surface& s, double p, const EvalOptions& opts = {});
EnergyReport energy(const Surface& s, double p, Functional functional, const EvalOptions& opts = {});
// Energy value only, from precomputed samples.
double energy_value(std::span<const NodeSample> samples, double p, Functional functional);

struct WillmoreReport {
  double willmore = 0;
  double intA2 = 0;
  double gauss_bonnet_defect = 0;  // W - intA2 / 4 - pi chi
  int euler_characteristic = 0;
};

// Throws NotClosed for graph patches.
WillmoreReport willmore(const Surface& s, int threads = 1);

struct ScalingResidual {
  double willmore = 0;  // |W(l f) - W(f)| / W(f)
  double energy = 0;    // |E^p(l f) - 1/4 int (1 + l^-2 |A|^2)^{p/2} l^2 dmu| / E^p(l f)
};

ScalingResidual scaling_check(const Surface& s, double lambda, double p);

}  // namespace pcurv
