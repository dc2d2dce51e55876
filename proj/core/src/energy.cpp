#include "pcurv/energy.hpp"

#include <cmath>
#include <numbers>

#include "pcurv/parallel.hpp"

namespace pcurv {
namespace {

double half_power(double base, double p) { return p == 2.0 ? base : std::pow(base, 0.5 * p); }

void check_exponent(double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw InvalidArgument("exponent p must satisfy p >= 2");
}

}  // namespace

std::vector<NodeSample> sample_nodes(const Surface& s, int threads) {
  const QuadratureRule q = quadrature(s);
  std::vector<NodeSample> out(q.nodes.size());
  parallel_for(q.nodes.size(), threads, [&](std::size_t k) {
    const std::size_t node = q.nodes[k];
    CurvatureData cd;
    try {
      cd = curvature_data(jet_at(s, node));
    } catch (const DegenerateJet& e) {
      throw e.at_node(node);
    }
    out[k] = NodeSample{node, q.weights[k], cd.sqrtdetg, cd.normA2, cd.normH2};
  });
  return out;
}

double energy_value(std::span<const NodeSample> samples, double p, Functional functional) {
  std::vector<double> terms(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const NodeSample& n = samples[k];
    const double curv = functional == Functional::Ep ? n.normA2 : n.normH2;
    terms[k] = n.weight * half_power(1.0 + curv, p) * n.sqrtdetg;
  }
  return 0.25 * pairwise_sum(terms);
}

EnergyReport energy(const Surface& s, double p, Functional functional, const EvalOptions& opts) {
  check_exponent(p);
  const auto samples = sample_nodes(s, opts.threads);
  const std::size_t n = samples.size();
  std::vector<double> value(n), area(n), a2(n), h2(n);
  for (std::size_t k = 0; k < n; ++k) {
    const NodeSample& x = samples[k];
    const double dmu = x.weight * x.sqrtdetg;
    const double curv = functional == Functional::Ep ? x.normA2 : x.normH2;
    value[k] = dmu * half_power(1.0 + curv, p);
    area[k] = dmu;
    a2[k] = dmu * x.normA2;
    h2[k] = dmu * x.normH2;
  }
  EnergyReport r;
  r.p = p;
  r.functional = functional;
  r.value = 0.25 * pairwise_sum(value);
  r.area = pairwise_sum(area);
  r.intA2 = pairwise_sum(a2);
  r.intH2 = pairwise_sum(h2);
  r.willmore = 0.25 * r.intH2;
  if (opts.keep_per_node) {
    r.per_node = std::move(value);
    for (double& v : r.per_node) v *= 0.25;
  }
  return r;
}

EnergyReport energy_ep(const Surface& s, double p, const EvalOptions& opts) {
  return energy(s, p, Functional::Ep, opts);
}

EnergyReport energy_wp(const Surface& s, double p, const EvalOptions& opts) {
  return energy(s, p, Functional::Wp, opts);
}

WillmoreReport willmore(const Surface& s, int threads) {
  const auto chi = euler_characteristic(s);
  if (!chi) throw NotClosed("Willmore identity needs a closed surface");
  const EnergyReport r = energy(s, 2.0, Functional::Wp, {threads, false});
  WillmoreReport w;
  w.willmore = r.willmore;
  w.intA2 = r.intA2;
  w.euler_characteristic = *chi;
  w.gauss_bonnet_defect = r.willmore - 0.25 * r.intA2 - std::numbers::pi * (*chi);
  return w;
}

ScalingResidual scaling_check(const Surface& s, double lambda, double p) {
  check_exponent(p);
  const Surface big = scaled(s, lambda);
  const auto base = sample_nodes(s);
  const auto grown = sample_nodes(big);

  auto willmore_of = [](std::span<const NodeSample> xs) {
    std::vector<double> t(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) t[k] = xs[k].weight * xs[k].sqrtdetg * xs[k].normH2;
    return 0.25 * pairwise_sum(t);
  };
  ScalingResidual r;
  const double w0 = willmore_of(base);
  r.willmore = std::abs(willmore_of(grown) - w0) / w0;

  const double direct = energy_value(grown, p, Functional::Ep);
  std::vector<double> t(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) {
    const NodeSample& x = base[k];
    t[k] = x.weight * x.sqrtdetg * half_power(1.0 + x.normA2 / (lambda * lambda), p) * lambda * lambda;
  }
  const double predicted = 0.25 * pairwise_sum(t);
  r.energy = std::abs(direct - predicted) / direct;
  return r;
}

}  // namespace pcurv
