// Acceptance run: one PASS/FAIL line per criterion. `--only k` runs a single
// criterion; the exit code is nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pcurv/diagnostics.hpp"
#include "pcurv/energy.hpp"
#include "pcurv/optimize.hpp"
#include "pcurv/shapes.hpp"
#include "pcurv/variation.hpp"

using namespace pcurv;
using oracle::kPi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "!") + what;
  }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}
std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// ---------------------------------------------------------------------------

Outcome c1() {
  Outcome o;
  const auto s = make_sphere(1.0, 256);
  double worst = 0;
  for (double p : {2.5, 3.0, 4.0}) {
    worst = std::max(worst, rel(energy_ep(s, p).value, kPi * std::pow(3.0, p / 2)));
    worst = std::max(worst, rel(energy_wp(s, p).value, kPi * std::pow(5.0, p / 2)));
  }
  o.require(worst <= 1e-6, fmt("max rel err %.2e (tol 1e-6)", worst));
  return o;
}

Outcome c2() {
  Outcome o;
  const auto ws = willmore(make_sphere(1.0, 256));
  o.require(std::abs(ws.gauss_bonnet_defect) <= 1e-6, fmt("sphere defect %.2e (tol 1e-6)", std::abs(ws.gauss_bonnet_defect)));
  const auto wt = willmore(make_torus(2.0, 1.0, 64, 64));
  const double bound = 1e-3 * (1 + wt.willmore);
  o.require(std::abs(wt.gauss_bonnet_defect) <= bound,
            fmt("torus N=64 defect %.2e (tol %.2e)", std::abs(wt.gauss_bonnet_defect), bound));

  std::vector<double> d;
  for (int n : {32, 64, 128}) d.push_back(std::abs(willmore(perturb(make_torus(2, 1, n, n), 0.1, 3)).gauss_bonnet_defect));
  const double r1 = d[0] / d[1], r2 = d[1] / d[2];
  o.require(r1 >= 3.5 && r2 >= 3.5, fmt("perturbed torus reductions %.2f, ", r1) + fmt("%.2f (>= 3.5)", r2));

  std::vector<double> e;
  for (int m : {64, 128, 256}) e.push_back(std::abs(willmore(make_sphere(1, m, Derivatives::Sampled)).gauss_bonnet_defect));
  const double s1 = e[0] / e[1], s2 = e[1] / e[2];
  o.require(s1 >= 3.5 && s2 >= 3.5, fmt("sampled sphere reductions %.2f, ", s1) + fmt("%.2f (>= 3.5)", s2));
  return o;
}

Outcome c3() {
  Outcome o;
  const double step = 1e-6;
  double worst = 0;
  for (std::uint64_t patch = 0; patch < 5; ++patch) {
    const int dim = 3 + static_cast<int>(patch % 2);
    const Surface s = make_random_graph(12, 12, 0.1, 100 + patch, 1.0, 1.0, dim);
    const auto base = dofs(s);
    for (double p : {2.5, 3.0, 4.0})
      for (auto fn : {Functional::Ep, Functional::Wp}) {
        const auto g = discrete_gradient(s, p, fn);
        double gmax = 0;
        for (double v : g.grad) gmax = std::max(gmax, std::abs(v));
        std::vector<double> x(base.begin(), base.end());
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double keep = x[i];
          x[i] = keep + step;
          const double ep = energy(with_dofs(s, x), p, fn).value;
          x[i] = keep - step;
          const double em = energy(with_dofs(s, x), p, fn).value;
          x[i] = keep;
          const double fd = (ep - em) / (2 * step);
          const double scale = std::max({std::abs(fd), std::abs(g.grad[i]), 1e-3 * gmax});
          worst = std::max(worst, std::abs(g.grad[i] - fd) / scale);
        }
      }
  }
  o.require(worst <= 1e-5, fmt("max rel err %.2e over 5 patches x 3 p x 2 functionals (tol 1e-5)", worst));
  return o;
}

Outcome c4() {
  Outcome o;
  std::size_t violations = 0;
  bool finite = true;
  double spread = 1, lambda_min = 1e300;
  for (double p : {2.1, 3.0, 4.0, 6.0})
    for (double cap : {0.3, 1.0}) {
      const auto samples = draw_bound_samples(1, cap, 10000, 7);
      const auto e = verify_ellipticity(p, cap, samples);
      const auto g = verify_growth(p, cap, samples);
      violations += e.violations;
      lambda_min = std::min(lambda_min, e.lambda_min);
      finite = finite && g.finite;
      spread = std::max(spread, g.spread);
    }
  o.require(violations == 0, fmt("ellipticity violations %.0f, ", double(violations)) + fmt("lambda_min %.3e", lambda_min));
  o.require(finite, finite ? "growth maxima finite" : "growth maxima not finite");
  o.require(spread <= 2.0, fmt("max decade spread %.3f (<= 2)", spread));
  return o;
}

Outcome c5() {
  Outcome o;
  OptimizerConfig cfg;
  cfg.metric = DescentMetric::Sobolev;
  cfg.max_iters = 2000;
  for (double p : {2.5, 3.0, 4.0})
    for (auto fn : {Functional::Ep, Functional::Wp}) {
      const auto run = minimize(perturb(make_sphere(1.0, 1024), 0.05, 11), p, fn, cfg);
      const double r_want = fn == Functional::Ep ? std::sqrt(p - 2) : std::sqrt(2 * p - 4);
      // pi p^{p/2} (p-2)^{1-p/2} and pi (2p)^{p/2} (2p-4)^{1-p/2}
      const double k = fn == Functional::Ep ? p : 2 * p;
      const double e_want = kPi * std::pow(k, p / 2) * std::pow(k - 2 * (k / p), 1 - p / 2);
      const double r_err = rel(mean_radius(run.final_surface), r_want);
      const double e_err = rel(run.trace.back().energy, e_want);
      const double fall = run.initial_ps / run.final_ps;
      const std::string tag = std::string(fn == Functional::Ep ? "Ep" : "Wp") + fmt(" p=%g", p);
      o.require(r_err <= 1e-2, tag + fmt(" radius err %.1e", r_err));
      o.require(e_err <= 5e-3, tag + fmt(" energy err %.1e", e_err));
      o.require(fall >= 1e4, tag + fmt(" ps fall %.1e", fall) + " " + status_name(run.status));
    }
  return o;
}

Outcome c6() {
  Outcome o;
  const std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
  const auto rep = neck_scan(eps, 3.0, 2048);
  double wmax = 0;
  for (const auto& r : rep.rows) wmax = std::max(wmax, r.willmore);
  const double finest = rep.rows.back().willmore;
  o.require(wmax < 8 * kPi, fmt("max W/8pi %.4f (< 1)", wmax / (8 * kPi)));
  o.require(finest >= 0.98 * 8 * kPi, fmt("finest W/8pi %.4f (>= 0.98)", finest / (8 * kPi)));
  o.require(rep.wp_spread <= 1.2, fmt("W^p spread %.4f (<= 1.2)", rep.wp_spread));
  o.require(std::abs(rep.slope - (2 - 3.0)) <= 0.15, fmt("E^p slope %.3f (want -1 +- 0.15)", rep.slope));
  return o;
}

Outcome c7() {
  Outcome o;
  std::vector<double> sig;
  for (int k = 1; k < 100; ++k) sig.push_back(0.02 * k);
  const auto sphere = make_sphere(1.0, 1024);
  double worst = 0;
  for (VecN<double> c : {VecN<double>{0, 0, -1}, VecN<double>{1, 0, 0}, VecN<double>{0.6, 0, 0.8}}) {
    const auto r = monotonicity_scan(sphere, c, sig, 3.0);
    for (double v : r.ratios) worst = std::max(worst, std::abs(v - kPi));
  }
  o.require(worst <= 1e-3, fmt("sphere |ratio - pi| %.2e (tol 1e-3)", worst));

  const std::vector<double> radii{0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0};
  const std::vector<std::pair<std::string, Surface>> shapes{
      {"sphere", Surface(sphere)},
      {"torus(2,1)", Surface(make_torus(2, 1, 64, 64))},
      {"torus(3,1)+perturb", perturb(make_torus(3, 1, 64, 64), 0.1, 5)},
  };
  double slack = 1e300;
  for (const auto& [name, s] : shapes) {
    CounterRng rng(2024);
    for (int k = 0; k < 10; ++k) {
      const auto node = static_cast<std::size_t>(rng.uniform() * node_count(s));
      const auto c = node_position(s, node);
      slack = std::min(slack, monotonicity_scan(s, c, radii, 3.0).min_slack);
    }
  }
  o.require(slack >= -2e-3, fmt("min Simon slack %.3e over 3 shapes x 10 centers x 8 radii (>= -2e-3)", slack));
  return o;
}

Outcome c8() {
  Outcome o;
  double sc_w = 0, sc_e = 0;
  const std::vector<Surface> shapes{make_sphere(1, 256), make_torus(2, 1, 64, 64), make_clifford_torus(48, 48),
                                    perturb(make_torus(2, 1, 48, 48), 0.1, 2)};
  for (const auto& s : shapes)
    for (double lambda : {0.5, 2.0, 3.0}) {
      const auto r = scaling_check(s, lambda, 3.0);
      sc_w = std::max(sc_w, r.willmore);
      sc_e = std::max(sc_e, r.energy);
    }
  o.require(sc_w <= 1e-12, fmt("W scale residual %.1e", sc_w));
  o.require(sc_e <= 1e-12, fmt("E^p scaling residual %.1e", sc_e));

  const auto t = std::get<TorusGrid>(perturb(make_torus(2, 1, 48, 48), 0.1, 9));
  const auto sh = shifted(t, 3, 5);
  double de = 0, dp = 0;
  for (auto fn : {Functional::Ep, Functional::Wp}) {
    de = std::max(de, rel(energy(sh, 3.0, fn).value, energy(t, 3.0, fn).value));
    dp = std::max(dp, rel(ps_norm_surrogate(sh, 3.0, fn, 16).surrogate, ps_norm_surrogate(t, 3.0, fn, 16).surrogate));
  }
  o.require(de <= 1e-13, fmt("shift energy %.1e", de));
  o.require(dp <= 1e-13, fmt("shift ps %.1e", dp));

  bool mono = true;
  for (const auto& s : shapes) {
    double pe = 0, pw = 0;
    for (double p : {2.0, 2.5, 3.0, 4.0, 5.0, 6.0}) {
      const double e = energy_ep(s, p).value, w = energy_wp(s, p).value;
      mono = mono && e >= pe && w >= pw;
      pe = e, pw = w;
    }
  }
  o.require(mono, mono ? "p-monotone on 6-point grid" : "p-monotonicity violated");
  return o;
}

Outcome c9() {
  Outcome o;
  double mc = 0;
  const std::vector<GraphPatch> patches{
      make_flat_graph(16, 16), make_paraboloid_graph(16, 16, 1, 1, BoundaryCondition::DirichletFixed),
      make_paraboloid_graph(12, 12, 1, 1, BoundaryCondition::DirichletFixed, 5), make_random_graph(16, 16, 0.2, 1),
      make_random_graph(16, 12, 0.1, 2, 1, 2, 4), make_random_graph(12, 12, 0.1, 3, 1, 1, 6)};
  for (const auto& g : patches) mc = std::max(mc, mean_curvature_residual(g).max_abs);
  o.require(mc <= 1e-10, fmt("mean-curvature residual %.1e (tol 1e-10)", mc));

  // constant field on the unit sphere: norm = area^{1/p}
  double w2 = 0;
  const auto sphere = make_sphere(1.0, 256);
  std::vector<double> ez(2 * 256, 0.0);
  for (int j = 0; j < 256; ++j) ez[2 * j + 1] = 1.0;
  for (double p : {2.0, 3.0, 4.0}) w2 = std::max(w2, rel(w2p_norm(sphere, ez, p), std::pow(4 * kPi, 1 / p)));
  // linear field x1 e1 on a flat Dirichlet patch: |DV| = 1, no Hessian
  const auto flat = make_flat_graph(16, 16, 1, 1, BoundaryCondition::DirichletFixed);
  std::vector<double> lin(3 * 256, 0.0);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) lin[3 * flat.node(i, j)] = flat.coordinate(0, i);
  const auto q = quadrature(flat);
  for (double p : {2.0, 3.0}) {
    double total = 0;
    for (std::size_t k = 0; k < q.nodes.size(); ++k)
      total += q.weights[k] * (1 + std::pow(std::abs(node_position(flat, q.nodes[k])[0]), p));
    w2 = std::max(w2, rel(w2p_norm(flat, lin, p), std::pow(total, 1 / p)));
  }
  o.require(w2 <= 1e-12, fmt("w2p closed forms %.1e (tol 1e-12)", w2));

  // DE(f)[e] / (|grad| |e|) for ambient translations e
  double tr = 0;
  const std::vector<Surface> shapes{perturb(make_torus(2, 1, 32, 32), 0.1, 4), make_random_graph(16, 16, 0.1, 5),
                                    perturb(make_sphere(1, 128), 0.05, 6)};
  for (const auto& s : shapes) {
    const bool profile = std::holds_alternative<AxisymProfile>(s);
    const int comps = profile ? 2 : static_cast<int>(dof_count(s) / node_count(s));
    for (auto fn : {Functional::Ep, Functional::Wp}) {
      const auto g = discrete_gradient(s, 3.0, fn);
      double gn = 0;
      for (double v : g.grad) gn += v * v;
      for (int c = profile ? 1 : 0; c < comps; ++c) {
        std::vector<double> e(dof_count(s), 0.0);
        for (std::size_t k = c; k < e.size(); k += comps) e[k] = 1.0;
        const double scale = std::sqrt(gn) * std::sqrt(double(node_count(s)));
        tr = std::max(tr, std::abs(first_variation(s, 3.0, fn, e)) / scale);
      }
    }
  }
  o.require(tr <= 1e-12, fmt("translation invariance %.1e (tol 1e-12)", tr));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only K]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<Criterion> all{
      {1, "sphere closed forms", 1, c1},
      {2, "Gauss-Bonnet identity", 10, c2},
      {3, "gradient consistency", 30, c3},
      {4, "ellipticity/growth certification", 60, c4},
      {5, "critical spheres", 300, c5},
      {6, "catenoid-neck sharpness", 120, c6},
      {7, "monotonicity", 60, c7},
      {8, "exact discrete symmetries", 10, c8},
      {9, "algebraic identities", 60, c9},
  };
  bool ok = true;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.require(secs < c.budget_s, fmt("%.2f s (budget %.0f s)", secs, c.budget_s));
    std::printf("%s %d %s: %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str());
    std::fflush(stdout);
    ok = ok && out.pass;
  }
  return ok ? 0 : 1;
}
