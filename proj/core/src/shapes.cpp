#include "pcurv/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pcurv/rng.hpp"

namespace pcurv {
namespace {

constexpr double kPi = std::numbers::pi;

AxisymProfile sample_profile(int count, ProfileClosure closure, const ProfileCurve& curve, bool keep_curve) {
  std::vector<double> rz(2 * static_cast<std::size_t>(count));
  const double h = kPi / count;
  for (int j = 0; j < count; ++j) {
    const ProfileJet pj = curve((j + 0.5) * h);
    rz[2 * j] = pj.r;
    rz[2 * j + 1] = pj.z;
  }
  return AxisymProfile(count, closure, std::move(rz), keep_curve ? curve : ProfileCurve{});
}

bool immersed(const Surface& s) {
  for (std::size_t node : quadrature(s).nodes) {
    try {
      (void)curvature_data(jet_at(s, node));
    } catch (const DegenerateJet&) {
      return false;
    }
  }
  return true;
}

void normalize_max(std::vector<double>& v, int stride) {
  double peak = 0.0;
  for (std::size_t i = 0; i < v.size(); i += stride) {
    double s = 0.0;
    for (int k = 0; k < stride; ++k) s += v[i + k] * v[i + k];
    peak = std::max(peak, std::sqrt(s));
  }
  if (peak > 0.0)
    for (double& x : v) x /= peak;
}

// Unit-peak displacement field in dof layout.
std::vector<double> displacement_field(const Surface& s, std::uint64_t seed) {
  CounterRng rng(seed, 0x9e7u);
  std::vector<double> field(dof_count(s), 0.0);

  if (const auto* a = std::get_if<AxisymProfile>(&s)) {
    constexpr int kModes = 7;
    std::array<double, kModes> coef{}, phase{};
    for (int k = 0; k < kModes; ++k) {
      coef[k] = rng.uniform(-1.0, 1.0) / (1.0 + k);
      phase[k] = rng.uniform(0.0, 2.0 * kPi);
    }
    const bool poles = a->closure() == ProfileClosure::Poles;
    for (int j = 0; j < a->count(); ++j) {
      const double t = a->parameter(j);
      double eta = 0.0;
      for (int k = 0; k < kModes; ++k) eta += poles ? coef[k] * std::cos(k * t) : coef[k] * std::cos(2 * k * t + phase[k]);
      const Jet2 jet = jet_at(s, static_cast<std::size_t>(j));
      const double dr = jet.df[0][0], dz = jet.df[0][2];
      const double w = std::hypot(dr, dz);
      field[2 * j] = eta * dz / w;
      field[2 * j + 1] = -eta * dr / w;
    }
    normalize_max(field, 2);
    return field;
  }

  if (const auto* t = std::get_if<TorusGrid>(&s)) {
    constexpr int kBand = 2;
    struct Mode {
      int k, l;
      double phase;
      VecN<double> c;
    };
    std::vector<Mode> modes;
    for (int k = -kBand; k <= kBand; ++k)
      for (int l = -kBand; l <= kBand; ++l) {
        Mode m{k, l, rng.uniform(0.0, 2.0 * kPi), {}};
        for (int d = 0; d < t->dim; ++d) m.c[d] = rng.normal() / (1.0 + k * k + l * l);
        modes.push_back(m);
      }
    for (int i = 0; i < t->count[0]; ++i)
      for (int j = 0; j < t->count[1]; ++j) {
        const std::size_t node = t->node(i, j);
        const double a1 = i * t->spacing(0), a2 = j * t->spacing(1);
        VecN<double> v{};
        for (const Mode& m : modes) {
          const double c = std::cos(m.k * a1 + m.l * a2 + m.phase);
          for (int d = 0; d < t->dim; ++d) v[d] += m.c[d] * c;
        }
        const CurvatureData cd = curvature_data(jet_at(s, node));
        for (int d = 0; d < t->dim; ++d) {
          double p = 0.0;
          for (int e = 0; e < t->dim; ++e) p += cd.pperp[d][e] * v[e];
          field[node * t->dim + d] = p;
        }
      }
    normalize_max(field, t->dim);
    return field;
  }

  const auto& g = std::get<GraphPatch>(s);
  constexpr int kBand = 3;
  const int nc = g.codim();
  for (int c = 0; c < nc; ++c) {
    CounterRng comp = rng.split(static_cast<std::uint64_t>(c) + 1);
    for (int k = 0; k <= kBand; ++k)
      for (int l = -kBand; l <= kBand; ++l) {
        const double amp = comp.normal() / (1.0 + k * k + l * l);
        const double phase = comp.uniform(0.0, 2.0 * kPi);
        for (int i = 0; i < g.count[0]; ++i)
          for (int j = 0; j < g.count[1]; ++j) {
            const double x1 = g.coordinate(0, i) / g.length[0], x2 = g.coordinate(1, j) / g.length[1];
            field[g.node(i, j) * nc + c] += amp * std::cos(2.0 * kPi * (k * x1 + l * x2) + phase);
          }
      }
  }
  if (g.bc == BoundaryCondition::DirichletFixed) {
    for (int i = 0; i < g.count[0]; ++i)
      for (int j = 0; j < g.count[1]; ++j) {
        double window = 0.0;
        if (!g.frozen(i, j)) {
          const double s1 = std::sin(kPi * (i - 1) / (g.count[0] - 3));
          const double s2 = std::sin(kPi * (j - 1) / (g.count[1] - 3));
          window = s1 * s1 * s2 * s2;
        }
        for (int c = 0; c < nc; ++c) field[g.node(i, j) * nc + c] *= window;
      }
  }
  // Graph amplitudes are measured per component.
  normalize_max(field, 1);
  return field;
}

}  // namespace

AxisymProfile make_sphere(double radius, int count, Derivatives derivs) {
  if (!(radius > 0.0)) throw InvalidArgument("sphere radius must be positive");
  ProfileCurve curve = [radius](double t) {
    const double s = std::sin(t), c = std::cos(t);
    return ProfileJet{radius * s, radius * c, -radius * s, -radius * c, radius * s, radius * c};
  };
  return sample_profile(count, ProfileClosure::Poles, curve, derivs == Derivatives::Analytic);
}

TorusGrid make_torus(double major, double minor, int n1, int n2, int dim) {
  if (!(minor > 0.0) || !(major > minor)) throw InvalidArgument("torus needs 0 < a < R");
  if (dim < kMinDim || dim > kMaxDim) throw InvalidArgument("ambient dimension out of range");
  if (n1 < 8 || n2 < 8) throw InvalidArgument("torus grid needs at least 8 nodes per direction");
  TorusGrid t;
  t.dim = dim;
  t.count = {n1, n2};
  t.f.assign(static_cast<std::size_t>(n1) * n2 * dim, 0.0);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const double a = i * t.spacing(0), b = j * t.spacing(1);
      const double rho = major + minor * std::cos(a);
      double* x = t.f.data() + t.node(i, j) * dim;
      x[0] = rho * std::cos(b);
      x[1] = rho * std::sin(b);
      x[2] = minor * std::sin(a);
    }
  return t;
}

TorusGrid make_clifford_torus(int n1, int n2) {
  if (n1 < 8 || n2 < 8) throw InvalidArgument("torus grid needs at least 8 nodes per direction");
  TorusGrid t;
  t.dim = 4;
  t.count = {n1, n2};
  t.f.assign(static_cast<std::size_t>(n1) * n2 * 4, 0.0);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const double a = i * t.spacing(0), b = j * t.spacing(1);
      double* x = t.f.data() + t.node(i, j) * 4;
      x[0] = s * std::cos(a);
      x[1] = s * std::sin(a);
      x[2] = s * std::cos(b);
      x[3] = s * std::sin(b);
    }
  return t;
}

AxisymProfile make_catenoid_tube(int count, double half_height) {
  if (!(half_height > 0.0)) throw InvalidArgument("catenoid half height must be positive");
  const double k = 2.0 * half_height / kPi;  // dz/dt
  ProfileCurve curve = [half_height, k](double t) {
    const double z = -half_height + k * t;
    const double ch = std::cosh(z), sh = std::sinh(z);
    return ProfileJet{ch, k * sh, k * k * ch, z, k, 0.0};
  };
  return sample_profile(count, ProfileClosure::PeriodicTube, curve, true);
}

NeckGeometry neck_geometry(double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("neck scale must be positive");
  // Tangency of r = eps cosh(z / eps) with a unit circle at opening angle phi
  // requires sin^2(phi) / eps^2 - cot^2(phi) = 1. The cap is kept on the lower
  // quarter of each sphere, phi in (0, pi/4].
  auto residual = [eps](double phi) {
    const double s = std::sin(phi), c = std::cos(phi);
    return s * s / (eps * eps) - (c * c) / (s * s) - 1.0;
  };
  double lo = 1e-12, hi = kPi / 4.0;
  if (!(residual(lo) < 0.0 && residual(hi) > 0.0))
    throw MatchingFailed("neck tangency equation has no root in (0, pi/4] for eps = " + std::to_string(eps));
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) < 0.0 ? lo : hi) = mid;
  }
  NeckGeometry ng;
  ng.eps = eps;
  ng.cap_angle = 0.5 * (lo + hi);
  const double s = std::sin(ng.cap_angle), c = std::cos(ng.cap_angle);
  ng.junction_height = eps * std::asinh(c / s);
  ng.center_offset = ng.junction_height + c;
  ng.total_length = 2.0 * (kPi - ng.cap_angle) + 2.0 * eps * c / s;

  // Junction residuals: the lower sphere at its cap boundary against the
  // catenoid at its lower end.
  const double sphere_r = std::sin(kPi - ng.cap_angle);
  const double sphere_z = -ng.center_offset - std::cos(kPi - ng.cap_angle);
  const double cat_z = -ng.junction_height;
  const double cat_r = eps * std::cosh(cat_z / eps);
  ng.c0_gap = std::hypot(sphere_r - cat_r, sphere_z - cat_z);
  const double sphere_angle = std::atan2(std::sin(kPi - ng.cap_angle), std::cos(kPi - ng.cap_angle));
  // Catenoid tangent (dr/ds, dz/ds) = (tanh(z/eps), 1/cosh(z/eps)).
  const double cat_angle = std::atan2(1.0 / std::cosh(cat_z / eps), std::tanh(cat_z / eps));
  ng.c1_gap = std::abs(sphere_angle - cat_angle);
  return ng;
}

AxisymProfile make_neck_family(double eps, int count) {
  if (count < 512) throw InvalidArgument("neck family needs at least 512 profile nodes");
  const NeckGeometry ng = neck_geometry(eps);
  const double s1 = kPi - ng.cap_angle;                // end of the lower sphere arc
  const double half = eps / std::tan(ng.cap_angle);    // half arc length of the neck
  const double s2 = s1 + 2.0 * half;                   // start of the upper sphere arc
  const double speed = ng.total_length / kPi;           // ds/dt
  const double c = ng.center_offset;
  const double phi0 = ng.cap_angle;

  ProfileCurve curve = [=](double t) {
    const double s = speed * t;
    double r, dr, d2r, z, dz, d2z;  // derivatives in arc length
    if (s <= s1) {
      r = std::sin(s), dr = std::cos(s), d2r = -std::sin(s);
      z = -c - std::cos(s), dz = std::sin(s), d2z = std::cos(s);
    } else if (s < s2) {
      const double sig = s - s1 - half;
      const double rr = std::sqrt(eps * eps + sig * sig);
      r = rr, dr = sig / rr, d2r = eps * eps / (rr * rr * rr);
      z = eps * std::asinh(sig / eps), dz = eps / rr, d2z = -eps * sig / (rr * rr * rr);
    } else {
      const double phi = phi0 + (s - s2);
      r = std::sin(phi), dr = std::cos(phi), d2r = -std::sin(phi);
      z = c - std::cos(phi), dz = std::sin(phi), d2z = std::cos(phi);
    }
    return ProfileJet{r, speed * dr, speed * speed * d2r, z, speed * dz, speed * speed * d2z};
  };
  return sample_profile(count, ProfileClosure::Poles, curve, true);
}

GraphPatch make_flat_graph(int n1, int n2, double l1, double l2, BoundaryCondition bc, int dim) {
  if (n1 < 8 || n2 < 8) throw InvalidArgument("graph patch needs at least 8 nodes per direction");
  if (dim < kMinDim || dim > kMaxDim) throw InvalidArgument("ambient dimension out of range");
  if (!(l1 > 0.0) || !(l2 > 0.0)) throw InvalidArgument("graph patch side lengths must be positive");
  GraphPatch g;
  g.dim = dim;
  g.length = {l1, l2};
  g.count = {n1, n2};
  g.bc = bc;
  g.u.assign(static_cast<std::size_t>(n1) * n2 * (dim - 2), 0.0);
  return g;
}

GraphPatch make_paraboloid_graph(int n1, int n2, double l1, double l2, BoundaryCondition bc, int dim) {
  GraphPatch g = make_flat_graph(n1, n2, l1, l2, bc, dim);
  const double c1 = g.coordinate(0, n1 / 2), c2 = g.coordinate(1, n2 / 2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const double x1 = g.coordinate(0, i) - c1, x2 = g.coordinate(1, j) - c2;
      g.u[g.node(i, j) * g.codim() + g.codim() - 1] = 0.5 * (x1 * x1 + x2 * x2);
    }
  return g;
}

GraphPatch make_random_graph(int n1, int n2, double amplitude, std::uint64_t seed, double l1, double l2, int dim) {
  GraphPatch g = make_flat_graph(n1, n2, l1, l2, BoundaryCondition::Periodic, dim);
  const auto field = displacement_field(g, seed);
  for (std::size_t i = 0; i < g.u.size(); ++i) g.u[i] = amplitude * field[i];
  return g;
}

Surface perturb(const Surface& s, double amplitude, std::uint64_t seed) {
  if (amplitude == 0.0) return s;
  const auto field = displacement_field(s, seed);
  const auto base = dofs(s);
  std::vector<double> next(base.size());
  double amp = amplitude;
  for (int attempt = 0; attempt <= 8; ++attempt, amp *= 0.5) {
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = base[i] + amp * field[i];
    Surface out = with_dofs(s, next);
    if (immersed(out)) return out;
  }
  throw PerturbationDegenerate("perturbation stays degenerate after 8 halvings");
}

}  // namespace pcurv
