#pragma once

// Experiment battery: monotonicity ratios on closed surfaces, the
// sphere-catenoid neck scan, and the identity suite over the shape library.

#include <string>
#include <vector>

#include "pcurv/surfaces.hpp"

namespace pcurv {

struct MonotonicityOptions {
  // Sub-samples per node cell along each parameter axis.
  int subsamples = 8;
  int threads = 1;
};

struct MonotonicityReport {
  VecN<double> center{};
  double p = 2;
  double willmore = 0;
  std::vector<double> sigmas;
  std::vector<double> ball_area;    // mu(Sigma cap B_sigma)
  std::vector<double> ratios;       // sigma^-2 mu(Sigma cap B_sigma)
  std::vector<double> int_abs_h;    // int over Sigma cap B_sigma of |H|
  std::vector<double> rhs_simon;    // W/4 + int |H| / (2 sigma)
  std::vector<double> rhs_es;       // W/4 + C sigma^{(p-2)/p}
  double fitted_c = 0;
  double min_slack = 0;             // min over sigma of rhs_simon - ratio
  bool likely_self_intersecting = false;
};

// Ball-restricted area and |H| integrals by node quadrature with indicator
// weights. Every node cell is split into sub-samples whose positions are
// interpolated linearly; a profile sub-sample stands for a ring, and the
// included fraction of the ring is computed exactly. For centers on the axis
// the ring is all-or-nothing and the crossing point inside a sub-sample is
// found by linear interpolation of the squared distance.
MonotonicityReport monotonicity_scan(const Surface& s, const VecN<double>& center, const std::vector<double>& sigmas,
                                     double p, const MonotonicityOptions& opts = {});

// Minimum distance between nodes that are not grid neighbours, relative to
// the largest neighbour spacing. Small values hint at self-intersection.
double separation_ratio(const Surface& s);

struct NeckRow {
  double eps = 0;
  double ep = 0;
  double wp = 0;
  double willmore = 0;
  double area = 0;
  double c0_gap = 0;
  double c1_gap = 0;
};

struct NeckScanReport {
  double p = 3;
  int count = 0;
  std::vector<NeckRow> rows;
  double slope = 0;                // least-squares slope of log E^p vs log eps
  std::vector<double> local_slopes;  // between consecutive eps values
  double wp_spread = 1;            // max W^p / min W^p
  double max_willmore = 0;
};

// eps must be strictly decreasing within (0, 0.2], p > 2.
NeckScanReport neck_scan(const std::vector<double>& eps, double p, int count, int threads = 1);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

struct IdentityRow {
  std::string shape;
  std::string check;
  double value = 0;
  double tolerance = 0;
  bool pass = false;
  std::string error;
};

struct IdentityOptions {
  int profile_count = 256;
  int torus_count = 64;
  double p = 3;
  double scale = 2;
  std::vector<double> p_grid{2.0, 2.5, 3.0, 4.0, 5.0, 6.0};
  int threads = 1;
};

// Runs Gauss-Bonnet defect, scaling identities, p-monotonicity and cyclic
// shift invariance over the shape library, one row per (shape, check).
std::vector<IdentityRow> identity_suite(const IdentityOptions& opts = {});

}  // namespace pcurv
