#include "pcurv/surfaces.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pcurv {
namespace {

constexpr double kPi = std::numbers::pi;

// Slot order of a grid stencil: value, d1, d2, d11, d12, d22.
constexpr int kSlots = 6;

struct GridStencil {
  std::array<std::size_t, 9> neighbor{};
  std::array<std::array<double, kSlots>, 9> coeff{};
};

GridStencil grid_stencil(int i, int j, std::array<int, 2> count, std::array<double, 2> h, bool periodic) {
  if (!periodic && (i < 1 || j < 1 || i > count[0] - 2 || j > count[1] - 2))
    throw StencilOutOfDomain("stencil at grid node (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") leaves the Dirichlet patch");
  auto wrap = [](int k, int n) { return ((k % n) + n) % n; };
  GridStencil st;
  const double h1 = h[0], h2 = h[1];
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) {
      const int k = (di + 1) * 3 + (dj + 1);
      const int ii = wrap(i + di, count[0]);
      const int jj = wrap(j + dj, count[1]);
      st.neighbor[k] = static_cast<std::size_t>(ii) * count[1] + jj;
      auto& c = st.coeff[k];
      c.fill(0.0);
      if (di == 0 && dj == 0) {
        c[0] = 1.0;
        c[3] = -2.0 / (h1 * h1);
        c[5] = -2.0 / (h2 * h2);
      }
      if (dj == 0 && di != 0) {
        c[1] = di / (2.0 * h1);
        c[3] = 1.0 / (h1 * h1);
      }
      if (di == 0 && dj != 0) {
        c[2] = dj / (2.0 * h2);
        c[5] = 1.0 / (h2 * h2);
      }
      if (di != 0 && dj != 0) c[4] = di * dj / (4.0 * h1 * h2);
    }
  return st;
}

// Applies the grid stencil to `ncomp` interleaved components of `field`,
// writing ambient components [offset, offset + ncomp) of the jet.
void apply_grid_stencil(const GridStencil& st, std::span<const double> field, int ncomp, int offset, Jet2& jet) {
  for (int k = 0; k < 9; ++k) {
    const double* v = field.data() + st.neighbor[k] * ncomp;
    const auto& c = st.coeff[k];
    for (int m = 0; m < ncomp; ++m) {
      const double x = v[m];
      const int a = offset + m;
      jet.f[a] += c[0] * x;
      jet.df[0][a] += c[1] * x;
      jet.df[1][a] += c[2] * x;
      jet.d2f[0][0][a] += c[3] * x;
      jet.d2f[0][1][a] += c[4] * x;
      jet.d2f[1][1][a] += c[5] * x;
    }
  }
  for (int m = 0; m < ncomp; ++m) jet.d2f[1][0][offset + m] = jet.d2f[0][1][offset + m];
}

void scatter_grid_stencil(const GridStencil& st, const SlotDerivative& slots, double scale, int ncomp, int offset,
                          std::span<double> out) {
  for (int k = 0; k < 9; ++k) {
    double* o = out.data() + st.neighbor[k] * ncomp;
    const auto& c = st.coeff[k];
    for (int m = 0; m < ncomp; ++m) {
      const int a = offset + m;
      const double mixed = slots.d_d2f[0][1][a] + slots.d_d2f[1][0][a];
      o[m] += scale * (c[1] * slots.d_df[0][a] + c[2] * slots.d_df[1][a] + c[3] * slots.d_d2f[0][0][a] +
                       c[4] * mixed + c[5] * slots.d_d2f[1][1][a]);
    }
  }
}

// 1-D stencil along an axisymmetric profile. Ghost nodes across a pole are
// reflections: r is odd and z even in t about t = 0 and t = pi.
struct ProfileStencil {
  std::array<std::size_t, 3> neighbor{};
  std::array<double, 3> sign_r{1, 1, 1};
  std::array<double, 3> sign_z{1, 1, 1};
  double h = 0;
};

ProfileStencil profile_stencil(const AxisymProfile& p, int j) {
  const int m = p.count();
  ProfileStencil st;
  st.h = p.spacing();
  st.neighbor = {static_cast<std::size_t>(j - 1), static_cast<std::size_t>(j), static_cast<std::size_t>(j + 1)};
  if (p.closure() == ProfileClosure::PeriodicTube) {
    st.neighbor[0] = static_cast<std::size_t>((j - 1 + m) % m);
    st.neighbor[2] = static_cast<std::size_t>((j + 1) % m);
    return st;
  }
  if (j == 0) {
    st.neighbor[0] = 0;
    st.sign_r[0] = -1.0;
  }
  if (j == m - 1) {
    st.neighbor[2] = static_cast<std::size_t>(m - 1);
    st.sign_r[2] = -1.0;
  }
  return st;
}

// Stencil jet of rz - base (base may be empty).
ProfileJet profile_field_jet(const ProfileStencil& st, std::span<const double> rz,
                             std::span<const double> base = {}) {
  std::array<double, 3> r{}, z{};
  for (int k = 0; k < 3; ++k) {
    const std::size_t n = st.neighbor[k];
    r[k] = st.sign_r[k] * (base.empty() ? rz[2 * n] : rz[2 * n] - base[2 * n]);
    z[k] = st.sign_z[k] * (base.empty() ? rz[2 * n + 1] : rz[2 * n + 1] - base[2 * n + 1]);
  }
  const double h = st.h;
  ProfileJet pj;
  pj.r = r[1];
  pj.dr = (r[2] - r[0]) / (2.0 * h);
  pj.d2r = (r[2] - 2.0 * r[1] + r[0]) / (h * h);
  pj.z = z[1];
  pj.dz = (z[2] - z[0]) / (2.0 * h);
  pj.d2z = (z[2] - 2.0 * z[1] + z[0]) / (h * h);
  return pj;
}

// Jet of the surface of revolution at angle 0:
// f = (r, 0, z), d_t f = (r', 0, z'), d_theta f = (0, r, 0),
// d_tt f = (r'', 0, z''), d_t d_theta f = (0, r', 0), d_theta theta f = (-r, 0, 0).
Jet2 revolution_jet(const ProfileJet& pj) {
  Jet2 jet;
  jet.dim = 3;
  jet.f[0] = pj.r;
  jet.f[2] = pj.z;
  jet.df[0][0] = pj.dr;
  jet.df[0][2] = pj.dz;
  jet.df[1][1] = pj.r;
  jet.d2f[0][0][0] = pj.d2r;
  jet.d2f[0][0][2] = pj.d2z;
  jet.d2f[0][1][1] = pj.dr;
  jet.d2f[1][0][1] = pj.dr;
  jet.d2f[1][1][0] = -pj.r;
  return jet;
}

void add_jet(Jet2& a, const Jet2& b) {
  for (int k = 0; k < kMaxDim; ++k) {
    a.f[k] += b.f[k];
    for (int x = 0; x < 2; ++x) {
      a.df[x][k] += b.df[x][k];
      for (int y = 0; y < 2; ++y) a.d2f[x][y][k] += b.d2f[x][y][k];
    }
  }
}

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

std::array<int, 2> grid_index(std::size_t node, int count1) {
  return {static_cast<int>(node / count1), static_cast<int>(node % count1)};
}

}  // namespace

// ---------------------------------------------------------------------------

double GraphPatch::spacing(int axis) const {
  return bc == BoundaryCondition::Periodic ? length[axis] / count[axis] : length[axis] / (count[axis] - 1);
}

bool GraphPatch::frozen(int i, int j) const {
  if (bc == BoundaryCondition::Periodic) return false;
  return i < 2 || j < 2 || i > count[0] - 3 || j > count[1] - 3;
}

double TorusGrid::spacing(int axis) const { return 2.0 * kPi / count[axis]; }

AxisymProfile::AxisymProfile(int count, ProfileClosure closure, std::vector<double> rz, ProfileCurve analytic)
    : count_(count), closure_(closure), rz_(std::move(rz)), analytic_(std::move(analytic)) {
  if (count_ < 4) throw InvalidArgument("axisymmetric profile needs at least 4 nodes");
  if (rz_.size() != 2 * static_cast<std::size_t>(count_))
    throw ShapeMismatch("profile sample vector has the wrong length");
  std::vector<double> ref(rz_.size(), 0.0);
  if (analytic_) {
    for (int j = 0; j < count_; ++j) {
      const ProfileJet pj = analytic_(parameter(j));
      ref[2 * j] = pj.r;
      ref[2 * j + 1] = pj.z;
    }
  }
  reference_ = std::make_shared<const std::vector<double>>(std::move(ref));
  if (closure_ == ProfileClosure::Poles) {
    weights_ = std::make_shared<const std::vector<double>>(pole_weights(count_));
  } else {
    weights_ = std::make_shared<const std::vector<double>>(static_cast<std::size_t>(count_), spacing());
  }
}

double AxisymProfile::spacing() const { return kPi / count_; }

std::vector<double> pole_weights(int count) {
  // sum_j sin(t_j) = 1 / sin(h / 2) at the half-offset nodes, so these
  // weights integrate sin t exactly.
  const double h = kPi / count;
  std::vector<double> w(count);
  for (int j = 0; j < count; ++j) w[j] = 2.0 * std::sin(0.5 * h) * std::sin((j + 0.5) * h);
  return w;
}

int ambient_dim(const Surface& s) {
  return std::visit(Overloaded{[](const GraphPatch& g) { return g.dim; }, [](const TorusGrid& t) { return t.dim; },
                               [](const AxisymProfile&) { return 3; }},
                    s);
}

std::size_t node_count(const Surface& s) {
  return std::visit(
      Overloaded{[](const GraphPatch& g) { return static_cast<std::size_t>(g.count[0]) * g.count[1]; },
                 [](const TorusGrid& t) { return static_cast<std::size_t>(t.count[0]) * t.count[1]; },
                 [](const AxisymProfile& a) { return static_cast<std::size_t>(a.count()); }},
      s);
}

std::span<const double> dofs(const Surface& s) {
  return std::visit(Overloaded{[](const GraphPatch& g) { return std::span<const double>(g.u); },
                               [](const TorusGrid& t) { return std::span<const double>(t.f); },
                               [](const AxisymProfile& a) { return a.rz(); }},
                    s);
}

std::size_t dof_count(const Surface& s) { return dofs(s).size(); }

Surface with_dofs(const Surface& s, std::span<const double> values) {
  if (values.size() != dof_count(s)) throw ShapeMismatch("dof vector has the wrong length");
  Surface out = s;
  std::visit(Overloaded{[&](GraphPatch& g) { g.u.assign(values.begin(), values.end()); },
                        [&](TorusGrid& t) { t.f.assign(values.begin(), values.end()); },
                        [&](AxisymProfile& a) { std::copy(values.begin(), values.end(), a.rz().begin()); }},
             out);
  return out;
}

std::vector<char> free_dofs(const Surface& s) {
  std::vector<char> mask(dof_count(s), 1);
  if (const auto* g = std::get_if<GraphPatch>(&s)) {
    for (int i = 0; i < g->count[0]; ++i)
      for (int j = 0; j < g->count[1]; ++j)
        if (g->frozen(i, j))
          for (int c = 0; c < g->codim(); ++c) mask[g->node(i, j) * g->codim() + c] = 0;
  }
  return mask;
}

std::optional<int> euler_characteristic(const Surface& s) {
  return std::visit(Overloaded{[](const GraphPatch&) -> std::optional<int> { return std::nullopt; },
                               [](const TorusGrid&) -> std::optional<int> { return 0; },
                               [](const AxisymProfile& a) -> std::optional<int> {
                                 return a.closure() == ProfileClosure::Poles ? 2 : 0;
                               }},
                    s);
}

bool is_closed(const Surface& s) { return euler_characteristic(s).has_value(); }

const char* kind_name(const Surface& s) {
  return std::visit(Overloaded{[](const GraphPatch&) { return "graph"; }, [](const TorusGrid&) { return "torus"; },
                               [](const AxisymProfile&) { return "axisym"; }},
                    s);
}

QuadratureRule quadrature(const Surface& s) {
  QuadratureRule q;
  std::visit(Overloaded{
                 [&](const GraphPatch& g) {
                   const int lo = g.bc == BoundaryCondition::Periodic ? 0 : 1;
                   const double w = g.spacing(0) * g.spacing(1);
                   for (int i = lo; i < g.count[0] - lo; ++i)
                     for (int j = lo; j < g.count[1] - lo; ++j) {
                       q.nodes.push_back(g.node(i, j));
                       q.weights.push_back(w);
                       q.density.push_back(1.0);
                     }
                   q.parameter_area = (g.count[0] - 2 * lo) * g.spacing(0) * (g.count[1] - 2 * lo) * g.spacing(1);
                 },
                 [&](const TorusGrid& t) {
                   const double w = t.spacing(0) * t.spacing(1);
                   const std::size_t n = static_cast<std::size_t>(t.count[0]) * t.count[1];
                   q.nodes.resize(n);
                   for (std::size_t i = 0; i < n; ++i) q.nodes[i] = i;
                   q.weights.assign(n, w);
                   q.density.assign(n, 1.0);
                   q.parameter_area = 4.0 * kPi * kPi;
                 },
                 [&](const AxisymProfile& a) {
                   const auto w = a.weights();
                   for (int j = 0; j < a.count(); ++j) {
                     q.nodes.push_back(static_cast<std::size_t>(j));
                     if (a.closure() == ProfileClosure::Poles) {
                       const double st = std::sin(a.parameter(j));
                       q.weights.push_back(2.0 * kPi * w[j] / st);
                       q.density.push_back(st);
                     } else {
                       q.weights.push_back(2.0 * kPi * w[j]);
                       q.density.push_back(1.0);
                     }
                   }
                   q.parameter_area = a.closure() == ProfileClosure::Poles ? 4.0 * kPi : 2.0 * kPi * kPi;
                 }},
             s);
  return q;
}

Jet2 field_jet(const Surface& s, std::size_t node, std::span<const double> field) {
  if (field.size() != dof_count(s)) throw ShapeMismatch("field does not match the surface dof layout");
  return std::visit(Overloaded{
                        [&](const GraphPatch& g) {
                          const auto [i, j] = grid_index(node, g.count[1]);
                          const auto st = grid_stencil(i, j, g.count, {g.spacing(0), g.spacing(1)},
                                                       g.bc == BoundaryCondition::Periodic);
                          Jet2 jet;
                          jet.dim = g.dim;
                          apply_grid_stencil(st, field, g.codim(), 2, jet);
                          return jet;
                        },
                        [&](const TorusGrid& t) {
                          const auto [i, j] = grid_index(node, t.count[1]);
                          const auto st = grid_stencil(i, j, t.count, {t.spacing(0), t.spacing(1)}, true);
                          Jet2 jet;
                          jet.dim = t.dim;
                          apply_grid_stencil(st, field, t.dim, 0, jet);
                          return jet;
                        },
                        [&](const AxisymProfile& a) {
                          const auto st = profile_stencil(a, static_cast<int>(node));
                          return revolution_jet(profile_field_jet(st, field));
                        }},
                    s);
}

int field_components(const Surface& s) { return std::holds_alternative<AxisymProfile>(s) ? 2 : ambient_dim(s); }

Jet2 ambient_field_jet(const Surface& s, std::size_t node, std::span<const double> field) {
  if (field.size() != node_count(s) * field_components(s))
    throw ShapeMismatch("field does not match the surface node layout");
  if (const auto* g = std::get_if<GraphPatch>(&s)) {
    const auto [i, j] = grid_index(node, g->count[1]);
    const auto st =
        grid_stencil(i, j, g->count, {g->spacing(0), g->spacing(1)}, g->bc == BoundaryCondition::Periodic);
    Jet2 jet;
    jet.dim = g->dim;
    apply_grid_stencil(st, field, g->dim, 0, jet);
    return jet;
  }
  return field_jet(s, node, field);
}

Jet2 jet_at(const Surface& s, std::size_t node) {
  if (node >= node_count(s)) throw StencilOutOfDomain("node index out of range");
  return std::visit(Overloaded{
                        [&](const GraphPatch& g) {
                          Jet2 jet = field_jet(s, node, g.u);
                          const auto [i, j] = grid_index(node, g.count[1]);
                          jet.f[0] = g.coordinate(0, i);
                          jet.f[1] = g.coordinate(1, j);
                          jet.df[0][0] = 1.0;
                          jet.df[1][1] = 1.0;
                          return jet;
                        },
                        [&](const TorusGrid& t) { return field_jet(s, node, t.f); },
                        [&](const AxisymProfile& a) {
                          if (!a.analytic()) return field_jet(s, node, a.rz());
                          const int j = static_cast<int>(node);
                          Jet2 jet = revolution_jet(a.curve()(a.parameter(j)));
                          add_jet(jet, revolution_jet(profile_field_jet(profile_stencil(a, j), a.rz(), a.reference())));
                          return jet;
                        }},
                    s);
}

void scatter_adjoint(const Surface& s, std::size_t node, const SlotDerivative& slots, double scale,
                     std::span<double> out) {
  if (out.size() != dof_count(s)) throw ShapeMismatch("gradient buffer does not match the surface dof layout");
  std::visit(Overloaded{
                 [&](const GraphPatch& g) {
                   const auto [i, j] = grid_index(node, g.count[1]);
                   const auto st = grid_stencil(i, j, g.count, {g.spacing(0), g.spacing(1)},
                                                g.bc == BoundaryCondition::Periodic);
                   scatter_grid_stencil(st, slots, scale, g.codim(), 2, out);
                 },
                 [&](const TorusGrid& t) {
                   const auto [i, j] = grid_index(node, t.count[1]);
                   const auto st = grid_stencil(i, j, t.count, {t.spacing(0), t.spacing(1)}, true);
                   scatter_grid_stencil(st, slots, scale, t.dim, 0, out);
                 },
                 [&](const AxisymProfile& a) {
                   const auto st = profile_stencil(a, static_cast<int>(node));
                   // Adjoint of revolution_jet.
                   const double adj_r = slots.d_df[1][1] - slots.d_d2f[1][1][0];
                   const double adj_dr = slots.d_df[0][0] + slots.d_d2f[0][1][1] + slots.d_d2f[1][0][1];
                   const double adj_d2r = slots.d_d2f[0][0][0];
                   const double adj_dz = slots.d_df[0][2];
                   const double adj_d2z = slots.d_d2f[0][0][2];
                   const double h = st.h;
                   const std::array<double, 3> cd{-1.0 / (2.0 * h), 0.0, 1.0 / (2.0 * h)};
                   const std::array<double, 3> cdd{1.0 / (h * h), -2.0 / (h * h), 1.0 / (h * h)};
                   for (int k = 0; k < 3; ++k) {
                     const double cv = k == 1 ? 1.0 : 0.0;
                     out[2 * st.neighbor[k]] += scale * st.sign_r[k] * (adj_r * cv + adj_dr * cd[k] + adj_d2r * cdd[k]);
                     out[2 * st.neighbor[k] + 1] += scale * st.sign_z[k] * (adj_dz * cd[k] + adj_d2z * cdd[k]);
                   }
                 }},
             s);
}

VecN<double> node_position(const Surface& s, std::size_t node) {
  return std::visit(Overloaded{[&](const GraphPatch& g) {
                                 VecN<double> x{};
                                 const auto [i, j] = grid_index(node, g.count[1]);
                                 x[0] = g.coordinate(0, i);
                                 x[1] = g.coordinate(1, j);
                                 for (int c = 0; c < g.codim(); ++c) x[2 + c] = g.u[node * g.codim() + c];
                                 return x;
                               },
                               [&](const TorusGrid& t) {
                                 VecN<double> x{};
                                 for (int k = 0; k < t.dim; ++k) x[k] = t.f[node * t.dim + k];
                                 return x;
                               },
                               [&](const AxisymProfile& a) {
                                 VecN<double> x{};
                                 x[0] = a.rz()[2 * node];
                                 x[2] = a.rz()[2 * node + 1];
                                 return x;
                               }},
                    s);
}

std::array<double, 2> node_parameter(const Surface& s, std::size_t node) {
  return std::visit(Overloaded{[&](const GraphPatch& g) {
                                 const auto [i, j] = grid_index(node, g.count[1]);
                                 return std::array<double, 2>{g.coordinate(0, i), g.coordinate(1, j)};
                               },
                               [&](const TorusGrid& t) {
                                 const auto [i, j] = grid_index(node, t.count[1]);
                                 return std::array<double, 2>{i * t.spacing(0), j * t.spacing(1)};
                               },
                               [&](const AxisymProfile& a) {
                                 return std::array<double, 2>{a.parameter(static_cast<int>(node)), 0.0};
                               }},
                    s);
}

Surface scaled(const Surface& s, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("scale factor must be positive");
  return std::visit(Overloaded{[&](const GraphPatch& g) -> Surface {
                                 GraphPatch out = g;
                                 out.length = {g.length[0] * lambda, g.length[1] * lambda};
                                 for (double& x : out.u) x *= lambda;
                                 return out;
                               },
                               [&](const TorusGrid& t) -> Surface {
                                 TorusGrid out = t;
                                 for (double& x : out.f) x *= lambda;
                                 return out;
                               },
                               [&](const AxisymProfile& a) -> Surface {
                                 std::vector<double> rz(a.rz().begin(), a.rz().end());
                                 for (double& x : rz) x *= lambda;
                                 ProfileCurve curve;
                                 if (a.analytic()) {
                                   curve = [base = a.curve(), lambda](double t) {
                                     ProfileJet pj = base(t);
                                     pj.r *= lambda, pj.dr *= lambda, pj.d2r *= lambda;
                                     pj.z *= lambda, pj.dz *= lambda, pj.d2z *= lambda;
                                     return pj;
                                   };
                                 }
                                 return AxisymProfile(a.count(), a.closure(), std::move(rz), std::move(curve));
                               }},
                    s);
}

std::vector<double> shifted_field(const TorusGrid& t, std::span<const double> field, int s1, int s2) {
  if (field.size() != t.f.size()) throw ShapeMismatch("field does not match the torus dof layout");
  std::vector<double> out(field.size());
  const int n1 = t.count[0], n2 = t.count[1];
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const int oi = ((i + s1) % n1 + n1) % n1;
      const int oj = ((j + s2) % n2 + n2) % n2;
      for (int k = 0; k < t.dim; ++k) out[t.node(i, j) * t.dim + k] = field[t.node(oi, oj) * t.dim + k];
    }
  return out;
}

TorusGrid shifted(const TorusGrid& t, int s1, int s2) {
  TorusGrid out = t;
  out.f = shifted_field(t, t.f, s1, s2);
  return out;
}

}  // namespace pcurv
