#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pcurv/surfaces.hpp"

namespace pcurv {

enum class DescentMethod { SteepestDescent, LBFGS };
// Euclidean: plain nodal-dof gradient. Sobolev: the gradient is mapped
// through an area-weighted discrete H^2 inner product (pole-closed profiles only).
enum class DescentMetric { Euclidean, Sobolev };

struct OptimizerConfig {
  int max_iters = 5000;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double init_step = 1e-3;
  // Absolute PS tolerance; when <= 0 the tolerance is stop_ps_factor times the
  // surrogate at the initial surface.
  double stop_ps_tol = 0.0;
  double stop_ps_factor = 1e-4;
  double stop_rel_energy_tol = 1e-10;
  int energy_window = 25;
  std::uint64_t seed = 1;  // dictionary seed of the PS surrogate
  std::size_t ps_dictionary = 16;
  int ps_every = 1;
  bool renormalize_center = true;
  // Move each node along its normal space only (projected gradient); tangential
  // moves change nothing in the continuum but let nodes bunch up.
  bool normal_descent = true;
  DescentMethod method = DescentMethod::SteepestDescent;
  DescentMetric metric = DescentMetric::Euclidean;
  int lbfgs_memory = 8;
  int threads = 1;

  // Throws InvalidArgument on out-of-range settings.
  void validate() const;
};

enum class OptStatus { ConvergedPS, ConvergedEnergy, MaxIters, DegenerateStep };
const char* status_name(OptStatus s);

struct TraceRow {
  int iter = 0;
  double energy = 0;
  double step = 0;       // accepted step length (0 for the initial row)
  double ps = -1;        // PS surrogate, -1 when not evaluated this iteration
  double min_detg = 0;
  double grad_norm = 0;  // Euclidean norm over free dofs
  double slope = 0;      // <grad, direction> of the step taken from this row
};

struct OptRun {
  std::vector<TraceRow> trace;
  Surface final_surface;
  OptStatus status = OptStatus::MaxIters;
  double initial_ps = 0;
  double final_ps = 0;
  double ps_tol = 0;
};

OptRun minimize(const Surface& s, double p, Functional functional, const OptimizerConfig& cfg = {});

// Area-weighted mean distance from the area-weighted centroid.
double mean_radius(const Surface& s);

struct SweepRow {
  double p = 0;
  double energy = 0;
  double willmore = 0;
  double radius = 0;
  double final_ps = 0;
  int iterations = 0;
  OptStatus status = OptStatus::MaxIters;
  std::string error;  // non-empty when minimize threw
};

struct SweepReport {
  std::vector<SweepRow> rows;
  bool monotone = true;  // energy(p1) <= energy(p2) (1 + slack) for p1 < p2
  double slack = 1e-3;
};

SweepReport p_sweep(const std::function<Surface(double)>& initial, const std::vector<double>& ps,
                    Functional functional, const OptimizerConfig& cfg = {}, double slack = 1e-3);

// Closed-form critical radius and energy of the round-sphere family.
double sphere_critical_radius(double p, Functional functional);
double sphere_critical_energy(double p, Functional functional);

}  // namespace pcurv
