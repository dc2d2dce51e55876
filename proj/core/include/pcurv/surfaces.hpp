#pragma once

// Discrete surface representations. Every representation stores its nodal
// degrees of freedom in one flat vector and realizes the jet (f, Df, D^2 f) at
// a quadrature node through centered second-order differences, optionally on
// top of a closed-form base curve (axisymmetric profiles only).

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "pcurv/geometry.hpp"

namespace pcurv {

enum class BoundaryCondition { Periodic, DirichletFixed };
enum class ProfileClosure { Poles, PeriodicTube };

// Graph f(x) = (x, u(x)) over [0, L1] x [0, L2]. Node (i, j) sits at
// x = (i h1, j h2) with h = L/N (periodic) or L/(N-1) (Dirichlet).
// Under DirichletFixed the two outermost node rings are frozen and the
// quadrature runs over nodes 1..N-2 in each direction.
struct GraphPatch {
  int dim = 3;
  std::array<double, 2> length{1.0, 1.0};
  std::array<int, 2> count{16, 16};
  BoundaryCondition bc = BoundaryCondition::Periodic;
  std::vector<double> u;  // ((i * count[1] + j) * (dim - 2) + c)

  int codim() const { return dim - 2; }
  double spacing(int axis) const;
  double coordinate(int axis, int i) const { return i * spacing(axis); }
  std::size_t node(int i, int j) const { return static_cast<std::size_t>(i) * count[1] + j; }
  bool frozen(int i, int j) const;
};

// Doubly periodic grid over [0, 2pi)^2, node (i, j) at (i h1, j h2).
struct TorusGrid {
  int dim = 3;
  std::array<int, 2> count{32, 32};
  std::vector<double> f;  // ((i * count[1] + j) * dim + k)

  double spacing(int axis) const;
  std::size_t node(int i, int j) const { return static_cast<std::size_t>(i) * count[1] + j; }
};

// r, z and their first two derivatives in the profile parameter t.
struct ProfileJet {
  double r = 0, dr = 0, d2r = 0;
  double z = 0, dz = 0, d2z = 0;
};
using ProfileCurve = std::function<ProfileJet(double)>;

// Surface of revolution about the z axis in R^3 generated by (r(t), z(t)),
// sampled at t_j = (j + 1/2) pi / M. With an analytic curve the jet is the
// closed-form jet plus the stencil jet of (samples - reference samples), so an
// unperturbed analytic profile is exact to round-off.
class AxisymProfile {
 public:
  AxisymProfile(int count, ProfileClosure closure, std::vector<double> rz, ProfileCurve analytic = {});

  int count() const { return count_; }
  ProfileClosure closure() const { return closure_; }
  double spacing() const;
  double parameter(int j) const { return (j + 0.5) * spacing(); }
  bool analytic() const { return static_cast<bool>(analytic_); }
  const ProfileCurve& curve() const { return analytic_; }

  std::span<const double> rz() const { return rz_; }
  std::span<double> rz() { return rz_; }
  std::span<const double> reference() const { return *reference_; }
  std::span<const double> weights() const { return *weights_; }

 private:
  int count_;
  ProfileClosure closure_;
  std::vector<double> rz_;  // (r_j, z_j) interleaved
  ProfileCurve analytic_;
  std::shared_ptr<const std::vector<double>> reference_;
  std::shared_ptr<const std::vector<double>> weights_;
};

using Surface = std::variant<GraphPatch, TorusGrid, AxisymProfile>;

struct QuadratureRule {
  std::vector<std::size_t> nodes;
  std::vector<double> weights;  // multiplies sqrt(det g) at the node
  // Reference density of the parameter domain at the node; the parameter
  // area equals sum(weights * density). It is 1 except on pole-closed
  // profiles, whose parameter domain is the unit sphere (density sin t).
  std::vector<double> density;
  double parameter_area = 0.0;
};

// Nodal weights w_j for int_0^pi F(t) sin(t) dt ~ sum_j w_j F(t_j) at the
// half-offset nodes: the midpoint rule rescaled by sin(h/2) / (h/2) so that
// F = 1 is integrated exactly. w_j / sin(t_j) is the same for every node.
std::vector<double> pole_weights(int count);

int ambient_dim(const Surface& s);
std::size_t node_count(const Surface& s);
std::size_t dof_count(const Surface& s);
std::span<const double> dofs(const Surface& s);
Surface with_dofs(const Surface& s, std::span<const double> values);
// 1 for free dofs, 0 for frozen Dirichlet rings.
std::vector<char> free_dofs(const Surface& s);
std::optional<int> euler_characteristic(const Surface& s);
bool is_closed(const Surface& s);
const char* kind_name(const Surface& s);

QuadratureRule quadrature(const Surface& s);

Jet2 jet_at(const Surface& s, std::size_t node);
// Linear part of the jet map applied to a field in dof layout (no analytic
// base, ambient components the surface does not own are zero).
Jet2 field_jet(const Surface& s, std::size_t node, std::span<const double> field);
// Ambient vector fields along the surface: n components per node on grids;
// on profiles 2 components (rho, zeta) standing for the rotation-equivariant
// field rho e_r + zeta e_z.
int field_components(const Surface& s);
Jet2 ambient_field_jet(const Surface& s, std::size_t node, std::span<const double> field);
// out += scale * (d jet / d dofs)^T slots, the adjoint of field_jet.
void scatter_adjoint(const Surface& s, std::size_t node, const SlotDerivative& slots, double scale,
                     std::span<double> out);

VecN<double> node_position(const Surface& s, std::size_t node);
std::array<double, 2> node_parameter(const Surface& s, std::size_t node);

Surface scaled(const Surface& s, double lambda);
// Relabel nodes so that new node (i, j) is old node (i + s1, j + s2).
TorusGrid shifted(const TorusGrid& t, int s1, int s2);
// Field counterpart of `shifted` for dof-layout arrays on a torus.
std::vector<double> shifted_field(const TorusGrid& t, std::span<const double> field, int s1, int s2);

}  // namespace pcurv
