#include "pcurv/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pcurv/energy.hpp"
#include "pcurv/parallel.hpp"
#include "pcurv/rng.hpp"

namespace pcurv {
namespace {

void check_exponent(double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw InvalidArgument("exponent p must satisfy p >= 2");
}

struct NodeSlots {
  double weight = 0;
  SlotDerivative slots;
};

std::vector<NodeSlots> node_slots(const Surface& s, double p, Functional functional, int threads,
                                  std::vector<std::size_t>& nodes) {
  check_exponent(p);
  const QuadratureRule q = quadrature(s);
  nodes = q.nodes;
  std::vector<NodeSlots> out(q.nodes.size());
  parallel_for(q.nodes.size(), threads, [&](std::size_t k) {
    const Jet2 jet = jet_at(s, q.nodes[k]);
    CurvatureData cd;
    try {
      cd = curvature_data(jet);
    } catch (const DegenerateJet& e) {
      throw e.at_node(q.nodes[k]);
    }
    out[k] = NodeSlots{q.weights[k], integrand_slots(jet, cd, functional, p)};
  });
  return out;
}

double contract(const SlotDerivative& s, const Jet2& j) {
  double acc = 0;
  for (int a = 0; a < 2; ++a)
    for (int k = 0; k < j.dim; ++k) acc += s.d_df[a][k] * j.df[a][k];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < j.dim; ++k) acc += s.d_d2f[a][b][k] * j.d2f[a][b][k];
  return acc;
}

void check_test_field(const Surface& s, std::span<const double> phi) {
  if (phi.size() != dof_count(s)) throw ShapeMismatch("test field does not match the surface dof layout");
  const auto mask = free_dofs(s);
  for (std::size_t k = 0; k < phi.size(); ++k)
    if (!mask[k] && phi[k] != 0.0) throw ShapeMismatch("test field is nonzero on a frozen dof");
}

// ---------------------------------------------------------------------------
// Coefficient fields, templated so that duals give exact directional
// derivatives.

template <class T>
struct GraphSlotsT {
  int codim = 1;
  std::array<VecN<T>, 2> du{};
  HessN<T> d2u{};
};

template <class T>
BasicJet2<T> graph_jet_t(const GraphSlotsT<T>& x) {
  BasicJet2<T> jet;
  jet.dim = x.codim + 2;
  jet.df[0][0] = T(1.0);
  jet.df[1][1] = T(1.0);
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < x.codim; ++i) {
      jet.df[a][i + 2] = x.du[a][i];
      for (int b = 0; b < 2; ++b) jet.d2f[a][b][i + 2] = x.d2u[a][b][i];
    }
  return jet;
}

template <class T>
struct CoeffE {
  HessN<T> a{};
  std::array<VecN<T>, 2> b{};
};

template <class T>
CoeffE<T> coeffs_e_t(const GraphSlotsT<T>& x, double p) {
  const int m = x.codim;
  const auto jet = graph_jet_t(x);
  const auto cd = curvature_data(jet);
  const auto& G = cd.ginv;
  const T c = detail::power(T(1.0) + cd.normA2, 0.5 * p - 1.0);

  // Normal projector restricted to the u-block: delta_ij - g^{mv} p^i_m p^j_v.
  std::array<VecN<T>, kMaxDim> puu{};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      T s = i == j ? T(1.0) : T(0.0);
      for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu) s -= G[mu][nu] * x.du[mu][i] * x.du[nu][j];
      puu[i][j] = s;
    }

  CoeffE<T> out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < m; ++i) {
        T s{};
        for (int g = 0; g < 2; ++g)
          for (int l = 0; l < 2; ++l) {
            T pq{};
            for (int j = 0; j < m; ++j) pq += puu[i][j] * x.d2u[g][l][j];
            s += G[a][g] * G[b][l] * pq;
          }
        out.a[a][b][i] = c * cd.sqrtdetg * s;
      }

  const auto slots = integrand_slots(jet, cd, Functional::Ep, p);
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < m; ++i) out.b[a][i] = -slots.d_df[a][i + 2] / T(p);
  return out;
}

template <class T>
struct CoeffW {
  std::array<VecN<T>, 2> B{};
  Mat2<T> Lg{};
  VecN<T> Hcal{};
};

template <class T>
CoeffW<T> coeffs_w_t(const BasicJet2<T>& jet, double p) {
  const auto cd = curvature_data(jet);
  const auto slots = integrand_slots(jet, cd, Functional::Wp, p);
  CoeffW<T> out;
  for (int a = 0; a < 2; ++a)
    for (int k = 0; k < jet.dim; ++k) out.B[a][k] = T(0.25) * slots.d_df[a][k];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out.Lg[a][b] = cd.sqrtdetg * cd.ginv[a][b];
  const T c = detail::power(T(1.0) + cd.normH2, 0.5 * p - 1.0);
  for (int k = 0; k < jet.dim; ++k) out.Hcal[k] = c * cd.H[k];
  return out;
}

GraphSlotsT<Dual> lift(const GraphSlots& x, const GraphSlots& dir) {
  GraphSlotsT<Dual> y;
  y.codim = x.codim;
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < x.codim; ++i) {
      y.du[a][i] = Dual(x.du[a][i], dir.du[a][i]);
      for (int b = 0; b < 2; ++b) y.d2u[a][b][i] = Dual(x.d2u[a][b][i], dir.d2u[a][b][i]);
    }
  return y;
}

GraphSlotsT<double> plain(const GraphSlots& x) { return {x.codim, x.du, x.d2u}; }

double q_norm(const GraphSlots& x) {
  double s = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < x.codim; ++i) s += x.d2u[a][b][i] * x.d2u[a][b][i];
  return std::sqrt(s);
}

// Unit symmetric 2x2 directions: E11, E22, (E12 + E21) / sqrt 2.
HessN<double> symmetric_basis(int which, int component) {
  HessN<double> h{};
  if (which == 0) h[0][0][component] = 1.0;
  if (which == 1) h[1][1][component] = 1.0;
  if (which == 2) h[0][1][component] = h[1][0][component] = std::numbers::sqrt2 / 2.0;
  return h;
}

Jet2 graph_direction_jet(const GraphSlots& dir) {
  Jet2 jet = graph_jet(dir);
  jet.df[0][0] = 0.0;
  jet.df[1][1] = 0.0;
  return jet;
}

// Random symmetric q-direction, isotropic in the orthonormal symmetric basis.
HessN<double> random_symmetric(CounterRng& rng, int codim) {
  HessN<double> h{};
  double norm2 = 0;
  for (int i = 0; i < codim; ++i) {
    const double a = rng.normal(), c = rng.normal(), b = rng.normal() * std::numbers::sqrt2 / 2.0;
    h[0][0][i] = a;
    h[1][1][i] = c;
    h[0][1][i] = h[1][0][i] = b;
    norm2 += a * a + c * c + 2 * b * b;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& row : h)
    for (auto& v : row)
      for (double& x : v) x *= inv;
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------

double first_variation(const Surface& s, double p, Functional functional, std::span<const double> phi, int threads) {
  check_test_field(s, phi);
  std::vector<std::size_t> nodes;
  const auto slots = node_slots(s, p, functional, threads, nodes);
  std::vector<double> terms(slots.size());
  parallel_for(slots.size(), threads, [&](std::size_t k) {
    terms[k] = 0.25 * slots[k].weight * contract(slots[k].slots, field_jet(s, nodes[k], phi));
  });
  return pairwise_sum(terms);
}

VariationField discrete_gradient(const Surface& s, double p, Functional functional, int threads) {
  std::vector<std::size_t> nodes;
  const auto slots = node_slots(s, p, functional, threads, nodes);
  VariationField out;
  out.functional = functional;
  out.p = p;
  out.grad.assign(dof_count(s), 0.0);
  out.free_mask = free_dofs(s);
  std::vector<double> values(slots.size());
  // Scatter in node order so the result does not depend on the thread count.
  for (std::size_t k = 0; k < slots.size(); ++k) {
    scatter_adjoint(s, nodes[k], slots[k].slots, 0.25 * slots[k].weight, out.grad);
    values[k] = 0.25 * slots[k].weight * slots[k].slots.value;
  }
  for (std::size_t k = 0; k < out.grad.size(); ++k)
    if (!out.free_mask[k]) out.grad[k] = 0.0;
  out.energy = pairwise_sum(values);
  return out;
}

Jet2 graph_jet(const GraphSlots& x) {
  if (x.codim < 1 || x.codim > kMaxDim - 2) throw InvalidArgument("graph codimension out of range");
  return graph_jet_t(plain(x));
}

ELCoefficientsE el_coeffs_e(const GraphSlots& x, double p) {
  check_exponent(p);
  const auto c = coeffs_e_t(plain(x), p);
  const double q = q_norm(x);
  return {x.codim, c.a, c.b, std::sqrt(1.0 + q * q)};
}

ELCoefficientsE el_coeffs_e_derivative(const GraphSlots& x, const GraphSlots& dir, double p) {
  check_exponent(p);
  const auto c = coeffs_e_t(lift(x, dir), p);
  ELCoefficientsE out;
  out.codim = x.codim;
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < x.codim; ++i) {
      out.b[a][i] = c.b[a][i].d;
      for (int b = 0; b < 2; ++b) out.a[a][b][i] = c.a[a][b][i].d;
    }
  // d/dt (1 + |q + t dq|^2)^{1/2}
  double qdq = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < x.codim; ++i) qdq += x.d2u[a][b][i] * dir.d2u[a][b][i];
  const double q = q_norm(x);
  out.V = qdq / std::sqrt(1.0 + q * q);
  return out;
}

ELCoefficientsW el_coeffs_w(const Jet2& jet, double p) {
  check_exponent(p);
  const auto c = coeffs_w_t(jet, p);
  return {jet.dim, c.B, c.Lg, c.Hcal};
}

ELCoefficientsW el_coeffs_w_derivative(const Jet2& jet, const Jet2& dir, double p) {
  check_exponent(p);
  BasicJet2<Dual> y;
  y.dim = jet.dim;
  for (int k = 0; k < jet.dim; ++k) {
    y.f[k] = Dual(jet.f[k], dir.f[k]);
    for (int a = 0; a < 2; ++a) {
      y.df[a][k] = Dual(jet.df[a][k], dir.df[a][k]);
      for (int b = 0; b < 2; ++b) y.d2f[a][b][k] = Dual(jet.d2f[a][b][k], dir.d2f[a][b][k]);
    }
  }
  const auto c = coeffs_w_t(y, p);
  ELCoefficientsW out;
  out.dim = jet.dim;
  for (int a = 0; a < 2; ++a) {
    for (int k = 0; k < jet.dim; ++k) out.B[a][k] = c.B[a][k].d;
    for (int b = 0; b < 2; ++b) out.Lg_weight[a][b] = c.Lg[a][b].d;
  }
  for (int k = 0; k < jet.dim; ++k) out.Hcal[k] = c.Hcal[k].d;
  return out;
}

// ---------------------------------------------------------------------------
// Bound certification.

std::vector<BoundSample> draw_bound_samples(int codim, double lambda_cap, std::size_t count, std::uint64_t seed,
                                            std::size_t first) {
  if (codim < 1 || codim > kMaxDim - 2) throw InvalidArgument("graph codimension out of range");
  if (!(lambda_cap > 0.0)) throw InvalidArgument("slope cap must be positive");
  std::vector<BoundSample> out(count);
  const CounterRng root(seed);
  for (std::size_t k = 0; k < count; ++k) {
    CounterRng rng = root.split(first + k);
    BoundSample& s = out[k];
    s.x.codim = codim;
    const int d = 2 * codim;
    std::array<double, 2 * kMaxDim> v{};
    double n2 = 0;
    for (int m = 0; m < d; ++m) {
      v[m] = rng.normal();
      n2 += v[m] * v[m];
    }
    const double radius = lambda_cap * std::pow(rng.uniform(), 1.0 / d) / std::sqrt(n2);
    for (int a = 0; a < 2; ++a)
      for (int i = 0; i < codim; ++i) s.x.du[a][i] = radius * v[a * codim + i];

    const double magnitude = std::pow(10.0, rng.uniform(-2.0, 3.0));
    s.x.d2u = random_symmetric(rng, codim);
    for (auto& row : s.x.d2u)
      for (auto& vec : row)
        for (double& x : vec) x *= magnitude;
    s.xi = random_symmetric(rng, codim);
  }
  return out;
}

double ellipticity_contraction(const BoundSample& s, double p) {
  GraphSlots dir;
  dir.codim = s.x.codim;
  dir.d2u = s.xi;
  const auto d = el_coeffs_e_derivative(s.x, dir, p);
  double acc = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < s.x.codim; ++i) acc += d.a[a][b][i] * s.xi[a][b][i];
  const double q = q_norm(s.x);
  return acc * std::pow(1.0 + q * q, 0.5 * (2.0 - p));
}

EllipticityReport verify_ellipticity(double p, double lambda_cap, std::span<const BoundSample> samples, int threads) {
  check_exponent(p);
  std::vector<double> values(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t k) { values[k] = ellipticity_contraction(samples[k], p); });
  EllipticityReport r;
  r.p = p;
  r.lambda_cap = lambda_cap;
  r.samples = samples.size();
  r.lambda_min = values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
  r.violations = static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](double v) { return !(v > 0); }));
  return r;
}

const char* GrowthRatios::name(int k) {
  static constexpr const char* names[kCount] = {"a", "Dq_a", "Dp_a", "Dq_b", "b", "Dp_b", "B", "Dp_B", "Dq_B"};
  return names[k];
}

double& GrowthRatios::operator[](int k) {
  double* f[kCount] = {&a, &Dq_a, &Dp_a, &Dq_b, &b, &Dp_b, &B, &Dp_B, &Dq_B};
  return *f[k];
}

double GrowthRatios::operator[](int k) const { return const_cast<GrowthRatios&>(*this)[k]; }

GrowthRatios growth_ratios(const GraphSlots& x, double p) {
  check_exponent(p);
  const int m = x.codim;
  const auto e = el_coeffs_e(x, p);
  const Jet2 jet = graph_jet(x);
  const auto w = el_coeffs_w(jet, p);
  auto sq = [](double v) { return v * v; };

  double a2 = 0, b2 = 0, B2 = 0;
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < m; ++i) {
      b2 += sq(e.b[a][i]);
      for (int b = 0; b < 2; ++b) a2 += sq(e.a[a][b][i]);
    }
  for (int a = 0; a < 2; ++a)
    for (int k = 0; k < jet.dim; ++k) B2 += sq(w.B[a][k]);

  double dqa = 0, dqb = 0, dqB = 0, dpa = 0, dpb = 0, dpB = 0;
  auto accumulate = [&](const GraphSlots& dir, double& da, double& db, double& dB) {
    const auto de = el_coeffs_e_derivative(x, dir, p);
    const auto dw = el_coeffs_w_derivative(jet, graph_direction_jet(dir), p);
    for (int a = 0; a < 2; ++a) {
      for (int i = 0; i < m; ++i) {
        db += sq(de.b[a][i]);
        for (int b = 0; b < 2; ++b) da += sq(de.a[a][b][i]);
      }
      for (int k = 0; k < jet.dim; ++k) dB += sq(dw.B[a][k]);
    }
  };
  for (int i = 0; i < m; ++i)
    for (int which = 0; which < 3; ++which) {
      GraphSlots dir;
      dir.codim = m;
      dir.d2u = symmetric_basis(which, i);
      accumulate(dir, dqa, dqb, dqB);
    }
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < m; ++i) {
      GraphSlots dir;
      dir.codim = m;
      dir.du[a][i] = 1.0;
      accumulate(dir, dpa, dpb, dpB);
    }

  const double q = q_norm(x);
  const double V = e.V;
  GrowthRatios r;
  r.a = std::sqrt(a2) / std::pow(V, p - 1);
  r.Dq_a = std::sqrt(dqa) / std::pow(V, p - 2);
  r.Dp_a = std::sqrt(dpa) / std::pow(V, p - 1);
  r.Dq_b = std::sqrt(dqb) / std::pow(V, p - 1);
  r.b = std::sqrt(b2) / std::pow(V, p);
  r.Dp_b = std::sqrt(dpb) / std::pow(V, p);
  const double vq = std::pow(V, p - 2);
  r.B = std::sqrt(B2) / (vq * q * q);
  r.Dp_B = std::sqrt(dpB) / (vq * q * q);
  r.Dq_B = std::sqrt(dqB) / (vq * q);
  return r;
}

GrowthReport verify_growth(double p, double lambda_cap, std::span<const BoundSample> samples, int threads) {
  check_exponent(p);
  std::vector<GrowthRatios> ratios(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t k) { ratios[k] = growth_ratios(samples[k].x, p); });

  GrowthReport r;
  r.p = p;
  r.lambda_cap = lambda_cap;
  r.samples = samples.size();
  for (int d = -2; d < 3; ++d) r.decades.push_back({std::pow(10.0, d), std::pow(10.0, d + 1), 0, {}});
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double q = q_norm(samples[k].x);
    const int d = std::clamp(static_cast<int>(std::floor(std::log10(q))), -2, 2) + 2;
    GrowthDecade& dec = r.decades[d];
    ++dec.samples;
    for (int m = 0; m < GrowthRatios::kCount; ++m) {
      const double v = ratios[k][m];
      if (!std::isfinite(v)) r.finite = false;
      dec.max[m] = std::max(dec.max[m], v);
      r.max[m] = std::max(r.max[m], v);
    }
  }
  for (int m = 0; m < GrowthRatios::kCount; ++m) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (const auto& dec : r.decades) {
      if (dec.q_lo < 1.0 || dec.samples == 0) continue;
      lo = std::min(lo, dec.max[m]);
      hi = std::max(hi, dec.max[m]);
    }
    if (hi > 0) r.spread = std::max(r.spread, hi / lo);
  }
  return r;
}

// ---------------------------------------------------------------------------

MeanCurvatureResidual mean_curvature_residual(const GraphPatch& g) {
  const Surface s = g;
  const QuadratureRule quad = quadrature(s);
  const int m = g.codim();
  MeanCurvatureResidual out;
  out.nodes = quad.nodes;
  out.residual.resize(quad.nodes.size() * m);
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    const std::size_t node = quad.nodes[k];
    const Jet2 uj = field_jet(s, node, g.u);
    double metric[2][2];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double v = a == b ? 1.0 : 0.0;
        for (int i = 0; i < m; ++i) v += uj.df[a][i + 2] * uj.df[b][i + 2];
        metric[a][b] = v;
      }
    const double det = metric[0][0] * metric[1][1] - metric[0][1] * metric[1][0];
    const double inv[2][2] = {{metric[1][1] / det, -metric[0][1] / det}, {-metric[1][0] / det, metric[0][0] / det}};
    const CurvatureData cd = curvature_data(jet_at(s, node));
    for (int j = 0; j < m; ++j) {
      double lhs = 0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int i = 0; i < m; ++i) {
            double proj = i == j ? 1.0 : 0.0;
            for (int l = 0; l < 2; ++l)
              for (int n = 0; n < 2; ++n) proj -= inv[l][n] * uj.df[l][i + 2] * uj.df[n][j + 2];
            lhs += inv[a][b] * proj * uj.d2f[a][b][i + 2];
          }
      const double r = lhs - cd.H[j + 2];
      out.residual[k * m + j] = r;
      out.max_abs = std::max(out.max_abs, std::abs(r));
    }
  }
  return out;
}

std::vector<double> dof_to_ambient(const Surface& s, std::span<const double> dof_field) {
  if (dof_field.size() != dof_count(s)) throw ShapeMismatch("field does not match the surface dof layout");
  const auto* g = std::get_if<GraphPatch>(&s);
  if (!g) return {dof_field.begin(), dof_field.end()};
  const std::size_t nodes = node_count(s);
  const int m = g->codim();
  std::vector<double> out(nodes * g->dim, 0.0);
  for (std::size_t k = 0; k < nodes; ++k)
    for (int c = 0; c < m; ++c) out[k * g->dim + 2 + c] = dof_field[k * m + c];
  return out;
}

double w2p_norm(const Surface& s, std::span<const double> field, double p, int threads) {
  if (!(p >= 1.0)) throw InvalidArgument("norm exponent must be at least 1");
  const QuadratureRule q = quadrature(s);
  std::vector<double> terms(q.nodes.size());
  parallel_for(q.nodes.size(), threads, [&](std::size_t k) {
    const std::size_t node = q.nodes[k];
    const Jet2 jet = jet_at(s, node);
    CurvatureData cd;
    try {
      cd = curvature_data(jet);
    } catch (const DegenerateJet& e) {
      throw e.at_node(node);
    }
    const Christoffel chr = christoffel(cd.g, metric_derivative(jet));
    const Jet2 v = ambient_field_jet(s, node, field);
    const int n = jet.dim;
    const auto& G = cd.ginv;

    double v2 = 0;
    for (int i = 0; i < n; ++i) v2 += v.f[i] * v.f[i];
    double dv2 = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) dv2 += G[a][b] * detail::dot(v.df[a], v.df[b], n);
    HessN<double> hess{};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int i = 0; i < n; ++i)
          hess[a][b][i] = v.d2f[a][b][i] - chr.gamma[0][a][b] * v.df[0][i] - chr.gamma[1][a][b] * v.df[1][i];
    double h2 = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int l = 0; l < 2; ++l) h2 += G[a][c] * G[b][l] * detail::dot(hess[a][b], hess[c][l], n);

    auto pw = [p](double sq) { return p == 2.0 ? sq : std::pow(sq, 0.5 * p); };
    terms[k] = q.weights[k] * cd.sqrtdetg * (pw(h2) + pw(dv2) + pw(v2));
  });
  const double total = pairwise_sum(terms);
  return p == 1.0 ? total : std::pow(total, 1.0 / p);
}

std::vector<double> dictionary_field(const Surface& s, std::size_t k, std::uint64_t seed) {
  CounterRng rng = CounterRng(seed).split(k);
  const std::size_t nodes = node_count(s);
  std::vector<double> out(dof_count(s), 0.0);
  constexpr int kModes = 3;

  if (const auto* a = std::get_if<AxisymProfile>(&s)) {
    // rho = r alpha(r^2, z), zeta = beta(r^2, z): smooth and equivariant.
    struct Mode {
      double amp, kr, kz, phase;
    };
    std::array<Mode, 2 * kModes> modes;
    for (auto& m : modes) m = {rng.normal(), rng.normal(), rng.normal(), rng.uniform(0.0, 2.0 * std::numbers::pi)};
    for (std::size_t j = 0; j < nodes; ++j) {
      const double r = a->rz()[2 * j], z = a->rz()[2 * j + 1];
      double al = 0, be = 0;
      for (int m = 0; m < kModes; ++m) {
        const Mode& x = modes[m];
        const Mode& y = modes[kModes + m];
        al += x.amp * std::cos(x.kr * r * r + x.kz * z + x.phase);
        be += y.amp * std::cos(y.kr * r * r + y.kz * z + y.phase);
      }
      out[2 * j] = r * al;
      out[2 * j + 1] = be;
    }
    return out;
  }

  if (const auto* t = std::get_if<TorusGrid>(&s)) {
    const int n = t->dim;
    for (int c = 0; c < n; ++c) {
      for (int m = 0; m < kModes; ++m) {
        const double amp = rng.normal();
        VecN<double> wave{};
        for (int i = 0; i < n; ++i) wave[i] = rng.normal();
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        for (std::size_t j = 0; j < nodes; ++j) {
          double arg = phase;
          for (int i = 0; i < n; ++i) arg += wave[i] * t->f[j * n + i];
          out[j * n + c] += amp * std::cos(arg);
        }
      }
    }
    return out;
  }

  const auto& g = std::get<GraphPatch>(s);
  const int m = g.codim();
  for (int c = 0; c < m; ++c) {
    for (int mode = 0; mode < kModes; ++mode) {
      const double amp = rng.normal();
      const double k1 = std::floor(rng.uniform(-2.0, 3.0)), k2 = std::floor(rng.uniform(-2.0, 3.0));
      const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      for (int i = 0; i < g.count[0]; ++i)
        for (int j = 0; j < g.count[1]; ++j) {
          const double x1 = g.coordinate(0, i) / g.length[0], x2 = g.coordinate(1, j) / g.length[1];
          double v = amp * std::cos(2.0 * std::numbers::pi * (k1 * x1 + k2 * x2) + phase);
          if (g.bc == BoundaryCondition::DirichletFixed) {
            const double w = std::sin(std::numbers::pi * x1) * std::sin(std::numbers::pi * x2);
            v *= w * w;
          }
          out[g.node(i, j) * m + c] += v;
        }
    }
  }
  const auto mask = free_dofs(s);
  for (std::size_t k2 = 0; k2 < out.size(); ++k2)
    if (!mask[k2]) out[k2] = 0.0;
  return out;
}

PSNormReport ps_norm_surrogate(const Surface& s, const VariationField& grad, std::size_t dictionary_size,
                               std::uint64_t seed, int threads) {
  if (dictionary_size < 1) throw InvalidArgument("dictionary size must be at least 1");
  if (grad.grad.size() != dof_count(s)) throw ShapeMismatch("gradient does not match the surface");
  PSNormReport r;
  r.dictionary_size = dictionary_size;
  std::vector<double> prod(grad.grad.size());
  for (std::size_t k = 0; k < dictionary_size; ++k) {
    std::vector<double> field = k == 0 ? grad.grad : dictionary_field(s, k, seed);
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = grad.grad[i] * field[i];
    const double pairing = std::abs(pairwise_sum(prod));
    if (pairing == 0.0) continue;
    const double norm = w2p_norm(s, dof_to_ambient(s, field), grad.p, threads);
    if (!(norm > 0.0)) continue;
    const double ratio = pairing / norm;
    if (ratio > r.surrogate) {
      r.surrogate = ratio;
      r.best_index = k;
      r.best_direction = std::move(field);
    }
  }
  return r;
}

PSNormReport ps_norm_surrogate(const Surface& s, double p, Functional functional, std::size_t dictionary_size,
                               std::uint64_t seed, int threads) {
  return ps_norm_surrogate(s, discrete_gradient(s, p, functional, threads), dictionary_size, seed, threads);
}

}  // namespace pcurv
