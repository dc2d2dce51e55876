#include "pcurv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pcurv/energy.hpp"
#include "pcurv/parallel.hpp"
#include "pcurv/shapes.hpp"
#include "pcurv/variation.hpp"

namespace pcurv {
namespace {

struct SubSample {
  double weight = 0;  // share of w sqrt(det g)
  double abs_h = 0;
  // profile: meridian point (r, z) and the segment ends for on-axis centers
  std::array<double, 2> rz{}, rz_lo{}, rz_hi{};
  VecN<double> x{};  // torus: ambient position
};

std::vector<SubSample> profile_subsamples(const AxisymProfile& a, std::span<const NodeSample> samples, int s) {
  const int m = a.count();
  const auto rz = a.rz();
  const bool tube = a.closure() == ProfileClosure::PeriodicTube;
  auto node = [&](int j) -> std::array<double, 2> {
    if (tube) {
      const int k = (j % m + m) % m;
      return {rz[2 * k], rz[2 * k + 1]};
    }
    if (j < 0) return {-rz[0], rz[1]};
    if (j >= m) return {-rz[2 * (m - 1)], rz[2 * (m - 1) + 1]};
    return {rz[2 * j], rz[2 * j + 1]};
  };
  auto lerp = [](const std::array<double, 2>& p, const std::array<double, 2>& q, double u) {
    return std::array<double, 2>{p[0] + u * (q[0] - p[0]), p[1] + u * (q[1] - p[1])};
  };
  std::vector<SubSample> out;
  out.reserve(samples.size() * s);
  for (const auto& ns : samples) {
    const int j = static_cast<int>(ns.node);
    const auto c = node(j);
    const auto lo = lerp(c, node(j - 1), 0.5);
    const auto hi = lerp(c, node(j + 1), 0.5);
    // position at cell coordinate u in [-1/2, 1/2], piecewise linear through the node
    auto at = [&](double u) { return u < 0 ? lerp(c, lo, -2.0 * u) : lerp(c, hi, 2.0 * u); };
    // the area element of a ring grows like its radius, so the cell's share
    // is split in proportion to the interpolated r
    const std::size_t first = out.size();
    double rsum = 0;
    for (int k = 0; k < s; ++k) {
      SubSample x;
      x.abs_h = std::sqrt(std::max(ns.normH2, 0.0));
      const double u0 = -0.5 + static_cast<double>(k) / s;
      const double u1 = -0.5 + static_cast<double>(k + 1) / s;
      x.rz = at(0.5 * (u0 + u1));
      x.rz_lo = at(u0);
      x.rz_hi = at(u1);
      rsum += std::abs(x.rz[0]);
      out.push_back(x);
    }
    for (std::size_t k = first; k < out.size(); ++k)
      out[k].weight = rsum > 0 ? ns.weight * ns.sqrtdetg * std::abs(out[k].rz[0]) / rsum : ns.weight * ns.sqrtdetg / s;
  }
  return out;
}

std::vector<SubSample> torus_subsamples(const TorusGrid& t, std::span<const NodeSample> samples, int s) {
  const int n1 = t.count[0], n2 = t.count[1], n = t.dim;
  auto pos = [&](int i, int j) {
    const std::size_t k = t.node((i % n1 + n1) % n1, (j % n2 + n2) % n2);
    VecN<double> x{};
    for (int c = 0; c < n; ++c) x[c] = t.f[k * n + c];
    return x;
  };
  std::vector<SubSample> out;
  out.reserve(samples.size() * s * s);
  for (const auto& ns : samples) {
    const int i = static_cast<int>(ns.node) / n2;
    const int j = static_cast<int>(ns.node) % n2;
    for (int a = 0; a < s; ++a) {
      for (int b = 0; b < s; ++b) {
        const double u = -0.5 + (a + 0.5) / s;
        const double v = -0.5 + (b + 0.5) / s;
        const int di = u < 0 ? -1 : 1, dj = v < 0 ? -1 : 1;
        const double au = std::abs(u), av = std::abs(v);
        const auto p00 = pos(i, j), p10 = pos(i + di, j), p01 = pos(i, j + dj), p11 = pos(i + di, j + dj);
        SubSample x;
        x.weight = ns.weight * ns.sqrtdetg / (s * s);
        x.abs_h = std::sqrt(std::max(ns.normH2, 0.0));
        for (int c = 0; c < n; ++c)
          x.x[c] = (1 - au) * (1 - av) * p00[c] + au * (1 - av) * p10[c] + (1 - au) * av * p01[c] + au * av * p11[c];
        out.push_back(x);
      }
    }
  }
  return out;
}

// Included fraction of a profile sub-sample for the ball |x - c| <= sigma,
// c = (rho, 0, cz) after rotating about the axis.
double ring_fraction(const SubSample& x, double rho, double cz, double sigma) {
  const double s2 = sigma * sigma;
  const double r = std::abs(x.rz[0]);
  if (rho * r > 1e-12 * (s2 + 1e-300)) {
    const double dz = x.rz[1] - cz;
    const double kappa = (r * r + rho * rho + dz * dz - s2) / (2.0 * r * rho);
    if (kappa <= -1.0) return 1.0;
    if (kappa >= 1.0) return 0.0;
    return std::acos(kappa) / std::numbers::pi;
  }
  auto d2 = [&](const std::array<double, 2>& q) {
    const double dz = q[1] - cz;
    return q[0] * q[0] + rho * rho + dz * dz;
  };
  const double a = d2(x.rz_lo) - s2, b = d2(x.rz_hi) - s2;
  if (a <= 0 && b <= 0) return 1.0;
  if (a > 0 && b > 0) return 0.0;
  return a <= 0 ? a / (a - b) : b / (b - a);
}

}  // namespace

MonotonicityReport monotonicity_scan(const Surface& s, const VecN<double>& center, const std::vector<double>& sigmas,
                                     double p, const MonotonicityOptions& opts) {
  if (!is_closed(s)) throw NotClosed(std::string("monotonicity needs a closed surface, got ") + kind_name(s));
  if (opts.subsamples < 1) throw InvalidArgument("subsamples must be at least 1");
  for (double sg : sigmas)
    if (!(sg > 0.0)) throw InvalidArgument("sigma must be positive");
  const auto samples = sample_nodes(s, opts.threads);

  MonotonicityReport r;
  r.center = center;
  r.p = p;
  r.sigmas = sigmas;
  {
    std::vector<double> t(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) t[k] = samples[k].weight * samples[k].sqrtdetg * samples[k].normH2;
    r.willmore = 0.25 * pairwise_sum(t);
  }

  const bool profile = std::holds_alternative<AxisymProfile>(s);
  const auto subs = profile ? profile_subsamples(std::get<AxisymProfile>(s), samples, opts.subsamples)
                            : torus_subsamples(std::get<TorusGrid>(s), samples, opts.subsamples);
  const int n = ambient_dim(s);
  const double rho = profile ? std::hypot(center[0], center[1]) : 0.0;

  const std::size_t ns = sigmas.size();
  r.ball_area.assign(ns, 0.0);
  r.ratios.assign(ns, 0.0);
  r.int_abs_h.assign(ns, 0.0);
  r.rhs_simon.assign(ns, 0.0);
  r.rhs_es.assign(ns, 0.0);
  parallel_for(ns, opts.threads, [&](std::size_t q) {
    const double sg = sigmas[q];
    std::vector<double> area(subs.size()), h(subs.size());
    for (std::size_t k = 0; k < subs.size(); ++k) {
      double frac;
      if (profile) {
        frac = ring_fraction(subs[k], rho, center[2], sg);
      } else {
        double d2 = 0;
        for (int c = 0; c < n; ++c) d2 += (subs[k].x[c] - center[c]) * (subs[k].x[c] - center[c]);
        frac = d2 <= sg * sg ? 1.0 : 0.0;
      }
      area[k] = frac * subs[k].weight;
      h[k] = area[k] * subs[k].abs_h;
    }
    r.ball_area[q] = pairwise_sum(area);
    r.int_abs_h[q] = pairwise_sum(h);
    r.ratios[q] = r.ball_area[q] / (sg * sg);
    r.rhs_simon[q] = 0.25 * r.willmore + r.int_abs_h[q] / (2.0 * sg);
  });

  const double e = (p - 2.0) / p;
  double c = 0.0;
  for (std::size_t q = 0; q < ns; ++q) c = std::max(c, (r.ratios[q] - 0.25 * r.willmore) / std::pow(sigmas[q], e));
  r.fitted_c = c;
  r.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < ns; ++q) {
    r.rhs_es[q] = 0.25 * r.willmore + c * std::pow(sigmas[q], e);
    r.min_slack = std::min(r.min_slack, r.rhs_simon[q] - r.ratios[q]);
  }
  if (ns == 0) r.min_slack = 0;
  r.likely_self_intersecting = separation_ratio(s) < 0.5;
  return r;
}

double separation_ratio(const Surface& s) {
  if (std::holds_alternative<GraphPatch>(s)) throw NotClosed("separation check needs a closed surface");
  std::vector<std::array<int, 2>> idx;
  std::vector<VecN<double>> x;
  int n1 = 0, n2 = 1;
  bool wrap1 = true;
  if (const auto* a = std::get_if<AxisymProfile>(&s)) {
    n1 = a->count();
    wrap1 = a->closure() == ProfileClosure::PeriodicTube;
  } else {
    const auto& t = std::get<TorusGrid>(s);
    n1 = t.count[0];
    n2 = t.count[1];
  }
  const std::size_t nodes = node_count(s);
  if (nodes > 20000) return std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < nodes; ++k) {
    x.push_back(node_position(s, k));
    idx.push_back({static_cast<int>(k) / n2, static_cast<int>(k) % n2});
  }
  auto gap = [](int a, int b, int count, bool wrap) {
    int d = std::abs(a - b);
    if (wrap) d = std::min(d, count - d);
    return d;
  };
  auto dist = [&](std::size_t a, std::size_t b) {
    double d2 = 0;
    for (int c = 0; c < kMaxDim; ++c) d2 += (x[a][c] - x[b][c]) * (x[a][c] - x[b][c]);
    return std::sqrt(d2);
  };
  double spacing = 0, closest = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < nodes; ++a) {
    for (std::size_t b = a + 1; b < nodes; ++b) {
      const int g1 = gap(idx[a][0], idx[b][0], n1, wrap1);
      const int g2 = gap(idx[a][1], idx[b][1], n2, true);
      if (std::max(g1, g2) <= 1) {
        if (g1 + g2 == 1) spacing = std::max(spacing, dist(a, b));
      } else if (std::max(g1, g2) > 2) {
        closest = std::min(closest, dist(a, b));
      }
    }
  }
  return spacing > 0 ? closest / spacing : std::numeric_limits<double>::infinity();
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  if (!(sxx > 0)) throw InvalidArgument("slope fit needs distinct abscissae");
  return sxy / sxx;
}

NeckScanReport neck_scan(const std::vector<double>& eps, double p, int count, int threads) {
  if (eps.size() < 2) throw InvalidArgument("neck scan needs at least two eps values");
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0 && eps[k] <= 0.2)) throw InvalidArgument("eps must lie in (0, 0.2]");
    if (k > 0 && !(eps[k] < eps[k - 1])) throw InvalidArgument("eps values must be strictly decreasing");
  }
  if (!(p > 2.0)) throw InvalidArgument("neck scan needs p > 2");
  NeckScanReport r;
  r.p = p;
  r.count = count;
  std::vector<double> lx, ly;
  for (double e : eps) {
    const NeckGeometry geo = neck_geometry(e);
    const Surface s = make_neck_family(e, count);
    const auto ep = energy_ep(s, p, {threads, false});
    const auto wp = energy_wp(s, p, {threads, false});
    NeckRow row;
    row.eps = e;
    row.ep = ep.value;
    row.wp = wp.value;
    row.willmore = ep.willmore;
    row.area = ep.area;
    row.c0_gap = geo.c0_gap;
    row.c1_gap = geo.c1_gap;
    r.rows.push_back(row);
    lx.push_back(std::log(e));
    ly.push_back(std::log(ep.value));
  }
  r.slope = fit_slope(lx, ly);
  for (std::size_t k = 1; k < lx.size(); ++k) r.local_slopes.push_back((ly[k] - ly[k - 1]) / (lx[k] - lx[k - 1]));
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& row : r.rows) {
    lo = std::min(lo, row.wp);
    hi = std::max(hi, row.wp);
    r.max_willmore = std::max(r.max_willmore, row.willmore);
  }
  r.wp_spread = hi / lo;
  return r;
}

std::vector<IdentityRow> identity_suite(const IdentityOptions& o) {
  struct Named {
    std::string name;
    Surface surface;
    double gb_tol_abs;  // < 0: relative 1e-3 (1 + W); 0: not a closed surface, skipped
  };
  std::vector<Named> shapes;
  std::vector<IdentityRow> rows;
  auto add_shape = [&](const std::string& name, auto make, double tol) {
    try {
      shapes.push_back({name, make(), tol});
    } catch (const Error& e) {
      rows.push_back({name, "construct", 0, 0, false, e.what()});
    }
  };
  add_shape("sphere", [&] { return Surface(make_sphere(1.0, o.profile_count)); }, 1e-6);
  add_shape("sphere-sampled", [&] { return Surface(make_sphere(1.0, o.profile_count, Derivatives::Sampled)); }, -1);
  add_shape("torus", [&] { return Surface(make_torus(2.0, 1.0, o.torus_count, o.torus_count)); }, -1);
  add_shape("clifford-torus", [&] { return Surface(make_clifford_torus(o.torus_count, o.torus_count)); }, -1);
  // the tube is periodic in t but has boundary circles, so Gauss-Bonnet is skipped
  add_shape("catenoid-tube", [&] { return Surface(make_catenoid_tube(o.profile_count)); }, 0);
  add_shape("neck", [&] { return Surface(make_neck_family(0.1, 4 * o.profile_count)); }, -1);

  for (const auto& sh : shapes) {
    auto run = [&](const std::string& check, double tol, auto body) {
      IdentityRow row{sh.name, check, 0, tol, false, ""};
      try {
        row.value = body();
        row.pass = row.value <= tol;
      } catch (const Error& e) {
        row.error = e.what();
      }
      rows.push_back(row);
    };
    const Surface& s = sh.surface;
    if (sh.gb_tol_abs != 0) {
      // tolerance depends on W, so compute it inside
      IdentityRow row{sh.name, "gb_defect", 0, 0, false, ""};
      try {
        const auto w = willmore(s, o.threads);
        row.value = std::abs(w.gauss_bonnet_defect);
        row.tolerance = sh.gb_tol_abs > 0 ? sh.gb_tol_abs : 1e-3 * (1.0 + w.willmore);
        row.pass = row.value <= row.tolerance;
      } catch (const Error& e) {
        row.error = e.what();
      }
      rows.push_back(row);
    }
    run("scaling_willmore", 1e-12, [&] { return scaling_check(s, o.scale, o.p).willmore; });
    run("scaling_energy", 1e-12, [&] { return scaling_check(s, o.scale, o.p).energy; });
    for (Functional f : {Functional::Ep, Functional::Wp}) {
      run(f == Functional::Ep ? "p_monotone_ep" : "p_monotone_wp", 0.0, [&] {
        // largest relative decrease between consecutive grid points
        double worst = 0, prev = -1;
        std::vector<double> grid = o.p_grid;
        std::sort(grid.begin(), grid.end());
        for (double p : grid) {
          const double v = energy(s, p, f, {o.threads, false}).value;
          if (prev >= 0) worst = std::max(worst, (prev - v) / v);
          prev = v;
        }
        return worst;
      });
    }
    if (const auto* t = std::get_if<TorusGrid>(&s)) {
      const TorusGrid moved = shifted(*t, 3, 5);
      run("cyclic_shift_energy", 1e-13, [&] {
        const double a = energy_ep(s, o.p, {o.threads, false}).value;
        const double b = energy_ep(moved, o.p, {o.threads, false}).value;
        return std::abs(a - b) / std::abs(a);
      });
      run("cyclic_shift_ps", 1e-13, [&] {
        const double a = ps_norm_surrogate(s, o.p, Functional::Ep, 8, 1, o.threads).surrogate;
        const double b = ps_norm_surrogate(moved, o.p, Functional::Ep, 8, 1, o.threads).surrogate;
        return std::abs(a - b) / std::abs(a);
      });
    }
  }
  return rows;
}

}  // namespace pcurv
