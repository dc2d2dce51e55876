#pragma once

// First variations, discrete gradients and the Euler-Lagrange coefficient
// fields of E^p and W^p, together with sampled certification of their
// ellipticity and growth bounds and the W^{2,p} norms of test fields.

#include <cstdint>
#include <span>
#include <vector>

#include "pcurv/surfaces.hpp"

namespace pcurv {

// Gradient of the discrete energy with respect to the dof vector. Frozen
// Dirichlet dofs carry zero; `free_mask` marks the others.
struct VariationField {
  Functional functional = Functional::Ep;
  double p = 2;
  double energy = 0;
  std::vector<double> grad;
  std::vector<char> free_mask;
};

// Quadrature of the first-variation integrand against the stencil jet of phi
// (dof layout). phi must vanish on frozen dofs.
double first_variation(const Surface& s, double p, Functional functional, std::span<const double> phi,
                       int threads = 1);

VariationField discrete_gradient(const Surface& s, double p, Functional functional, int threads = 1);

// Graph slot variables, written p and q in the coefficient formulas:
// du[a][i] = d_a u^i, d2u[a][b][i] = d_ab u^i (symmetric in a, b), i < codim.
struct GraphSlots {
  int codim = 1;
  std::array<VecN<double>, 2> du{};
  HessN<double> d2u{};
};

// Immersion jet of x -> (x, u) with the given slots.
Jet2 graph_jet(const GraphSlots& x);

struct ELCoefficientsE {
  int codim = 1;
  HessN<double> a{};                // a[a][b][i]
  std::array<VecN<double>, 2> b{};  // b[a][i]
  double V = 1;                     // (1 + |q|^2)^{1/2}
};

struct ELCoefficientsW {
  int dim = 3;
  std::array<VecN<double>, 2> B{};  // B[a][k], k over ambient components
  Mat2<double> Lg_weight{};         // sqrt(det g) g^{ab}
  VecN<double> Hcal{};              // (1 + |H|^2)^{p/2 - 1} H
};

ELCoefficientsE el_coeffs_e(const GraphSlots& x, double p);
ELCoefficientsW el_coeffs_w(const Jet2& jet, double p);

// Directional derivatives of the coefficient fields, d/dt at t = 0 of the
// coefficients at x + t dir. Computed in forward mode, not by differences.
ELCoefficientsE el_coeffs_e_derivative(const GraphSlots& x, const GraphSlots& dir, double p);
ELCoefficientsW el_coeffs_w_derivative(const Jet2& jet, const Jet2& dir, double p);

// One sample for the bound certification: slots plus a unit symmetric
// direction xi in q-space.
struct BoundSample {
  GraphSlots x;
  HessN<double> xi{};
};

// Du uniform in the Frobenius ball of radius lambda_cap, |D^2 u| log-uniform
// in [1e-2, 1e3] with a uniformly random symmetric direction, xi uniform on
// the unit sphere of symmetric q-directions. Sample k depends only on
// (seed, k), so prefixes of longer runs coincide with shorter runs.
std::vector<BoundSample> draw_bound_samples(int codim, double lambda_cap, std::size_t count, std::uint64_t seed,
                                            std::size_t first = 0);

// V^{2-p} xi . (d a / d q) xi
double ellipticity_contraction(const BoundSample& s, double p);

struct EllipticityReport {
  double p = 2;
  double lambda_cap = 1;
  std::size_t samples = 0;
  double lambda_min = 0;
  std::size_t violations = 0;  // contraction <= 0
};

EllipticityReport verify_ellipticity(double p, double lambda_cap, std::span<const BoundSample> samples,
                                     int threads = 1);

// Ratios of coefficient sizes to the V-powers they are bounded by.
struct GrowthRatios {
  double a = 0;     // |a| / V^{p-1}
  double Dq_a = 0;  // |D_q a| / V^{p-2}
  double Dp_a = 0;  // |D_p a| / V^{p-1}
  double Dq_b = 0;  // |D_q b| / V^{p-1}
  double b = 0;     // |b| / V^p
  double Dp_b = 0;  // |D_p b| / V^p
  double B = 0;     // |B| / (V^{p-2} |q|^2)
  double Dp_B = 0;  // |D_p B| / (V^{p-2} |q|^2)
  double Dq_B = 0;  // |D_q B| / (V^{p-2} |q|)

  static constexpr int kCount = 9;
  static const char* name(int k);
  double& operator[](int k);
  double operator[](int k) const;
};

GrowthRatios growth_ratios(const GraphSlots& x, double p);

struct GrowthDecade {
  double q_lo = 0, q_hi = 0;
  std::size_t samples = 0;
  GrowthRatios max;
};

struct GrowthReport {
  double p = 2;
  double lambda_cap = 1;
  std::size_t samples = 0;
  GrowthRatios max;                   // fitted constants over all samples
  std::vector<GrowthDecade> decades;  // |q| in [1e-2, 1e-1), ..., [1e2, 1e3]
  bool finite = true;
  // Largest max/min spread of the per-decade maxima over the decades with
  // |q| >= 1, taken over all ratios.
  double spread = 1;
};

GrowthReport verify_growth(double p, double lambda_cap, std::span<const BoundSample> samples, int threads = 1);

struct MeanCurvatureResidual {
  std::vector<std::size_t> nodes;
  std::vector<double> residual;  // node-major, codim components
  double max_abs = 0;
};

// g^{ab} (delta_ij - g^{lm} d_l u^i d_m u^j) d_ab u^i - H^{j+2} at every
// quadrature node, with the left side built directly from stencil values.
MeanCurvatureResidual mean_curvature_residual(const GraphPatch& g);

// (int |nabla D V|^p + |D V|^p + |V|^p dmu)^{1/p} for an ambient field in the
// layout of ambient_field_jet.
double w2p_norm(const Surface& s, std::span<const double> field, double p, int threads = 1);

// Ambient-field counterpart of a dof-layout field (pads graph fields with
// zero tangential components).
std::vector<double> dof_to_ambient(const Surface& s, std::span<const double> dof_field);

struct PSNormReport {
  double surrogate = 0;
  std::size_t dictionary_size = 0;
  std::size_t best_index = 0;
  std::vector<double> best_direction;  // dof layout
};

// Lower bound on the dual norm of the first variation: the maximum of
// |DE(V)| / ||V||_{W^{2,p}} over a dictionary whose entry 0 is the discrete
// gradient and whose remaining entries are seeded low-frequency trigonometric
// fields of the node positions. Dictionaries with a common seed are nested.
PSNormReport ps_norm_surrogate(const Surface& s, double p, Functional functional, std::size_t dictionary_size,
                               std::uint64_t seed = 1, int threads = 1);
// Same, reusing a precomputed gradient.
PSNormReport ps_norm_surrogate(const Surface& s, const VariationField& grad, std::size_t dictionary_size,
                               std::uint64_t seed = 1, int threads = 1);

// Dictionary entry k >= 1 in dof layout (entry 0 is the gradient).
std::vector<double> dictionary_field(const Surface& s, std::size_t k, std::uint64_t seed);

}  // namespace pcurv
