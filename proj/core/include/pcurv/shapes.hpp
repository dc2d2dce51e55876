#pragma once

#include <cstdint>

#include "pcurv/surfaces.hpp"

namespace pcurv {

enum class Derivatives { Analytic, Sampled };

// Round sphere of the given radius: r = R sin t, z = -R cos t.
AxisymProfile make_sphere(double radius, int count, Derivatives derivs = Derivatives::Analytic);

// Torus of revolution, tube angle along axis 0, rotation angle along axis 1.
// Extra ambient components (dim > 3) are zero.
TorusGrid make_torus(double major, double minor, int n1, int n2, int dim = 3);

// Flat torus (cos a, sin a, cos b, sin b) / sqrt(2) in R^4.
TorusGrid make_clifford_torus(int n1, int n2);

// Catenoid r = cosh z, |z| <= half_height, as a PeriodicTube profile with
// analytic derivatives.
AxisymProfile make_catenoid_tube(int count, double half_height = 1.0);

// Geometry of the sphere-catenoid-sphere construction.
struct NeckGeometry {
  double eps = 0;
  double cap_angle = 0;        // opening angle of each removed polar cap
  double center_offset = 0;    // sphere centers at z = +-center_offset
  double junction_height = 0;  // catenoid meets the spheres at z = +-junction_height
  double total_length = 0;     // arc length of the profile curve
  double c0_gap = 0;           // position mismatch at the junction
  double c1_gap = 0;           // tangent-angle mismatch at the junction
};

// Solves the tangency condition for the cap angle by bisection and returns
// the junction data. Throws MatchingFailed when no bracket exists.
NeckGeometry neck_geometry(double eps);

// Two unit spheres with polar caps removed, joined by r = eps cosh(z / eps)
// with C^1 matching, parametrized proportionally to arc length.
AxisymProfile make_neck_family(double eps, int count);

GraphPatch make_flat_graph(int n1, int n2, double l1 = 1.0, double l2 = 1.0,
                           BoundaryCondition bc = BoundaryCondition::Periodic, int dim = 3);

// u = |x - center|^2 / 2 in the last ambient component.
GraphPatch make_paraboloid_graph(int n1, int n2, double l1, double l2, BoundaryCondition bc, int dim = 3);

// Periodic patch with a seeded band-limited height field of the given
// amplitude in every graph component.
GraphPatch make_random_graph(int n1, int n2, double amplitude, std::uint64_t seed, double l1 = 1.0,
                             double l2 = 1.0, int dim = 3);

// Adds a seeded band-limited displacement in the normal direction with
// maximum magnitude `amplitude`, halving the amplitude (up to 8 times) until
// the result is an immersion at every quadrature node.
Surface perturb(const Surface& s, double amplitude, std::uint64_t seed);

}  // namespace pcurv
