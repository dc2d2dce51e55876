#include "pcurv/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "pcurv/energy.hpp"
#include "pcurv/geometry.hpp"
#include "pcurv/parallel.hpp"
#include "pcurv/variation.hpp"

namespace pcurv {
namespace {

constexpr double kStepDetG = 1e-12;
constexpr double kMinStep = 1e-16;

struct Evaluation {
  bool ok = false;
  double energy = 0;
  double min_detg = 0;
};

Evaluation evaluate(const Surface& s, double p, Functional functional, int threads) {
  Evaluation e;
  std::vector<NodeSample> samples;
  try {
    samples = sample_nodes(s, threads);
  } catch (const DegenerateJet&) {
    return e;
  }
  double m = std::numeric_limits<double>::infinity();
  for (const auto& x : samples) m = std::min(m, x.sqrtdetg * x.sqrtdetg);
  e.min_detg = m;
  if (!(m > kStepDetG)) return e;
  e.energy = energy_value(samples, p, functional);
  e.ok = std::isfinite(e.energy);
  return e;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> t(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) t[k] = a[k] * b[k];
  return pairwise_sum(t);
}

// Translates a closed surface so its area-weighted centroid is the origin.
Surface recenter(const Surface& s) {
  if (!is_closed(s)) return s;
  const auto samples = sample_nodes(s);
  const int n = ambient_dim(s);
  std::vector<double> w(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) w[k] = samples[k].weight * samples[k].sqrtdetg;
  const double area = pairwise_sum(w);
  VecN<double> c{};
  std::vector<double> t(samples.size());
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < samples.size(); ++k) t[k] = w[k] * node_position(s, samples[k].node)[i];
    c[i] = pairwise_sum(t) / area;
  }
  std::vector<double> x(dofs(s).begin(), dofs(s).end());
  if (std::holds_alternative<AxisymProfile>(s)) {
    for (std::size_t j = 1; j < x.size(); j += 2) x[j] -= c[2];
  } else {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] -= c[j % n];
  }
  return with_dofs(s, x);
}

// Projects a dof-layout gradient onto the normal space node by node. Graph
// dofs are already normal-type heights and pass through unchanged.
void project_normal(const Surface& s, std::vector<double>& g) {
  if (std::holds_alternative<GraphPatch>(s)) return;
  const bool profile = std::holds_alternative<AxisymProfile>(s);
  const std::size_t nodes = node_count(s);
  const int n = ambient_dim(s);
  for (std::size_t k = 0; k < nodes; ++k) {
    const auto cd = curvature_data(jet_at(s, k));
    if (profile) {
      // dofs (r, z) sit at ambient rows 0 and 2 of the angle-0 meridian
      double* v = &g[2 * k];
      const double a = cd.pperp[0][0] * v[0] + cd.pperp[0][2] * v[1];
      const double b = cd.pperp[2][0] * v[0] + cd.pperp[2][2] * v[1];
      v[0] = a;
      v[1] = b;
    } else {
      double* v = &g[n * k];
      VecN<double> w{};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w[i] += cd.pperp[i][j] * v[j];
      for (int i = 0; i < n; ++i) v[i] = w[i];
    }
  }
}

// Solves A x = b in place for a symmetric positive definite matrix with two
// off-diagonals: diag[k] = A(k,k), off1[k] = A(k,k+1), off2[k] = A(k,k+2).
void solve_pentadiagonal(std::vector<double> diag, std::vector<double> off1, std::vector<double> off2,
                         std::vector<double>& b) {
  const std::size_t m = diag.size();
  // LDL^T with unit lower band l1, l2
  std::vector<double> l1(m, 0.0), l2(m, 0.0), d(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    double dk = diag[k];
    if (k >= 1) dk -= l1[k - 1] * l1[k - 1] * d[k - 1];
    if (k >= 2) dk -= l2[k - 2] * l2[k - 2] * d[k - 2];
    d[k] = dk;
    if (k + 1 < m) {
      double a = off1[k];
      if (k >= 1) a -= l2[k - 1] * l1[k - 1] * d[k - 1];
      l1[k] = a / dk;
    }
    if (k + 2 < m) l2[k] = off2[k] / dk;
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (k >= 1) b[k] -= l1[k - 1] * b[k - 1];
    if (k >= 2) b[k] -= l2[k - 2] * b[k - 2];
  }
  for (std::size_t k = 0; k < m; ++k) b[k] /= d[k];
  for (std::size_t k = m; k-- > 0;) {
    if (k + 1 < m) b[k] -= l1[k] * b[k + 1];
    if (k + 2 < m) b[k] -= l2[k] * b[k + 2];
  }
}

// Applies (h D2^T R D2 + h R)^{-1} componentwise on a pole-closed profile,
// where D2 is the reflected second difference and R = diag(r). This is a
// discrete H^2 metric weighted like the area element, so pole nodes are not
// over-stiff and the step size no longer scales like h^4.
void sobolev_precondition(const AxisymProfile& a, std::vector<double>& g) {
  if (a.closure() != ProfileClosure::Poles)
    throw InvalidArgument("the Sobolev descent metric needs a pole-closed profile");
  const std::size_t m = static_cast<std::size_t>(a.count());
  const double h = a.spacing();
  const auto rz = a.rz();
  std::vector<double> r(m);
  for (std::size_t k = 0; k < m; ++k) r[k] = std::abs(rz[2 * k]);
  for (int comp = 0; comp < 2; ++comp) {
    const double ghost = comp == 0 ? -1.0 : 1.0;  // r odd, z even across the poles
    // D2 rows: (x_{k-1} - 2 x_k + x_{k+1}) / h^2 with ghosts folded in.
    auto d2 = [&](std::size_t row, std::size_t col) -> double {
      double v = 0;
      if (col == row) v = -2.0;
      if (col + 1 == row || col == row + 1) v = 1.0;
      if (row == 0 && col == 0) v += ghost;
      if (row == m - 1 && col == m - 1) v += ghost;
      return v / (h * h);
    };
    std::vector<double> diag(m, 0.0), off1(m, 0.0), off2(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t row = (k >= 1 ? k - 1 : 0); row <= std::min(m - 1, k + 1); ++row) {
        diag[k] += h * r[row] * d2(row, k) * d2(row, k);
        if (k + 1 < m) off1[k] += h * r[row] * d2(row, k) * d2(row, k + 1);
        if (k + 2 < m) off2[k] += h * r[row] * d2(row, k) * d2(row, k + 2);
      }
      diag[k] += h * r[k];
    }
    std::vector<double> b(m);
    for (std::size_t k = 0; k < m; ++k) b[k] = g[2 * k + comp];
    solve_pentadiagonal(diag, off1, off2, b);
    for (std::size_t k = 0; k < m; ++k) g[2 * k + comp] = b[k];
  }
}

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iters < 0) throw InvalidArgument("max_iters must be non-negative");
  if (!(armijo_c > 0.0 && armijo_c <= 0.5)) throw InvalidArgument("armijo_c must lie in (0, 1/2]");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) throw InvalidArgument("backtrack_factor must lie in (0, 1)");
  if (!(init_step > 0.0)) throw InvalidArgument("init_step must be positive");
  if (!(stop_ps_factor > 0.0)) throw InvalidArgument("stop_ps_factor must be positive");
  if (!(stop_rel_energy_tol >= 0.0)) throw InvalidArgument("stop_rel_energy_tol must be non-negative");
  if (energy_window < 1) throw InvalidArgument("energy_window must be at least 1");
  if (ps_dictionary < 1) throw InvalidArgument("ps_dictionary must be at least 1");
  if (ps_every < 1) throw InvalidArgument("ps_every must be at least 1");
  if (metric == DescentMetric::Sobolev && method == DescentMethod::LBFGS)
    throw InvalidArgument("the Sobolev metric is only available with steepest descent");
  if (lbfgs_memory < 1) throw InvalidArgument("lbfgs_memory must be at least 1");
}

const char* status_name(OptStatus s) {
  switch (s) {
    case OptStatus::ConvergedPS: return "ConvergedPS";
    case OptStatus::ConvergedEnergy: return "ConvergedEnergy";
    case OptStatus::MaxIters: return "MaxIters";
    case OptStatus::DegenerateStep: return "DegenerateStep";
  }
  return "?";
}

OptRun minimize(const Surface& initial, double p, Functional functional, const OptimizerConfig& cfg) {
  cfg.validate();
  if (cfg.metric == DescentMetric::Sobolev) {
    const auto* a = std::get_if<AxisymProfile>(&initial);
    if (!a || a->closure() != ProfileClosure::Poles)
      throw InvalidArgument("the Sobolev descent metric needs a pole-closed profile");
  }
  Surface x = cfg.renormalize_center ? recenter(initial) : initial;
  Evaluation cur = evaluate(x, p, functional, cfg.threads);
  if (!cur.ok) throw DegenerateJet(cur.min_detg);

  OptRun run;
  VariationField g = discrete_gradient(x, p, functional, cfg.threads);
  run.initial_ps = ps_norm_surrogate(x, g, cfg.ps_dictionary, cfg.seed, cfg.threads).surrogate;
  run.ps_tol = cfg.stop_ps_tol > 0 ? cfg.stop_ps_tol : cfg.stop_ps_factor * run.initial_ps;
  run.final_ps = run.initial_ps;

  std::deque<std::pair<std::vector<double>, std::vector<double>>> memory;  // (s, y) pairs
  double step = cfg.init_step;
  const std::size_t n = g.grad.size();
  std::vector<double> xs(dofs(x).begin(), dofs(x).end());

  for (int iter = 0;; ++iter) {
    TraceRow row;
    row.iter = iter;
    row.energy = cur.energy;
    row.min_detg = cur.min_detg;
    row.grad_norm = std::sqrt(dot(g.grad, g.grad));
    if (iter == 0) {
      row.ps = run.initial_ps;
    } else if (iter % cfg.ps_every == 0) {
      row.ps = ps_norm_surrogate(x, g, cfg.ps_dictionary, cfg.seed, cfg.threads).surrogate;
      run.final_ps = row.ps;
    }
    if (row.ps >= 0 && row.ps <= run.ps_tol) {
      run.trace.push_back(row);
      run.status = OptStatus::ConvergedPS;
      break;
    }
    const int w = cfg.energy_window;
    if (static_cast<int>(run.trace.size()) >= w) {
      const double old = run.trace[run.trace.size() - w].energy;
      if ((old - cur.energy) <= cfg.stop_rel_energy_tol * std::abs(cur.energy)) {
        run.trace.push_back(row);
        run.status = OptStatus::ConvergedEnergy;
        break;
      }
    }
    if (iter >= cfg.max_iters) {
      run.trace.push_back(row);
      run.status = OptStatus::MaxIters;
      break;
    }

    // Search direction.
    std::vector<double> pg = g.grad;
    if (cfg.normal_descent) project_normal(x, pg);
    std::vector<double> d(n);
    for (std::size_t k = 0; k < n; ++k) d[k] = -pg[k];
    if (cfg.metric == DescentMetric::Sobolev) {
      sobolev_precondition(std::get<AxisymProfile>(x), d);
      if (cfg.normal_descent) project_normal(x, d);
    }
    double alpha0 = step;
    if (cfg.method == DescentMethod::LBFGS && !memory.empty()) {
      std::vector<double> q = pg;
      std::vector<double> a(memory.size());
      for (std::size_t m = memory.size(); m-- > 0;) {
        const auto& [sv, yv] = memory[m];
        a[m] = dot(sv, q) / dot(yv, sv);
        for (std::size_t k = 0; k < n; ++k) q[k] -= a[m] * yv[k];
      }
      const auto& [sl, yl] = memory.back();
      const double gamma = dot(sl, yl) / dot(yl, yl);
      for (double& v : q) v *= gamma;
      for (std::size_t m = 0; m < memory.size(); ++m) {
        const auto& [sv, yv] = memory[m];
        const double b = dot(yv, q) / dot(yv, sv);
        for (std::size_t k = 0; k < n; ++k) q[k] += sv[k] * (a[m] - b);
      }
      for (std::size_t k = 0; k < n; ++k) d[k] = -q[k];
      if (cfg.normal_descent) project_normal(x, d);
      alpha0 = 1.0;
      if (!(dot(d, g.grad) < 0)) {
        memory.clear();
        for (std::size_t k = 0; k < n; ++k) d[k] = -pg[k];
        alpha0 = step;
      }
    }
    const double slope = dot(g.grad, d);
    row.slope = slope;

    // Armijo backtracking; degenerate trial surfaces are rejected like
    // insufficient decrease.
    double alpha = alpha0;
    Surface trial = x;
    Evaluation next;
    std::vector<double> xt(n);
    for (;;) {
      for (std::size_t k = 0; k < n; ++k) xt[k] = xs[k] + alpha * d[k];
      trial = with_dofs(x, xt);
      next = evaluate(trial, p, functional, cfg.threads);
      if (next.ok && next.energy <= cur.energy + cfg.armijo_c * alpha * slope) break;
      alpha *= cfg.backtrack_factor;
      if (alpha < kMinStep) break;
    }
    if (alpha < kMinStep) {
      run.trace.push_back(row);
      run.status = OptStatus::DegenerateStep;
      break;
    }
    run.trace.push_back(row);
    run.trace.back().step = alpha;

    if (cfg.renormalize_center) {
      trial = recenter(trial);
      next = evaluate(trial, p, functional, cfg.threads);
    }
    VariationField gn = discrete_gradient(trial, p, functional, cfg.threads);
    std::vector<double> xn(dofs(trial).begin(), dofs(trial).end());
    if (cfg.method == DescentMethod::LBFGS) {
      std::vector<double> pgn = gn.grad;
      if (cfg.normal_descent) project_normal(trial, pgn);
      std::vector<double> sv(n), yv(n);
      for (std::size_t k = 0; k < n; ++k) {
        sv[k] = xn[k] - xs[k];
        yv[k] = pgn[k] - pg[k];
      }
      if (dot(sv, yv) > 1e-300) {
        memory.emplace_back(std::move(sv), std::move(yv));
        if (static_cast<int>(memory.size()) > cfg.lbfgs_memory) memory.pop_front();
      }
    } else {
      step = alpha / cfg.backtrack_factor;
    }
    x = std::move(trial);
    xs = std::move(xn);
    g = std::move(gn);
    cur = next;
  }
  // Trace rows carry the step taken *from* the row; shift so each row holds
  // the step that produced it.
  for (std::size_t k = run.trace.size(); k-- > 1;) run.trace[k].step = run.trace[k - 1].step;
  if (!run.trace.empty()) run.trace[0].step = 0;
  run.final_surface = x;
  return run;
}

double mean_radius(const Surface& s) {
  const auto samples = sample_nodes(s);
  const int n = ambient_dim(s);
  std::vector<double> w(samples.size()), t(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) w[k] = samples[k].weight * samples[k].sqrtdetg;
  const double area = pairwise_sum(w);
  VecN<double> c{};
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < samples.size(); ++k) t[k] = w[k] * node_position(s, samples[k].node)[i];
    c[i] = pairwise_sum(t) / area;
  }
  // On profiles the centroid lies on the axis and every node stands for a ring.
  if (std::holds_alternative<AxisymProfile>(s)) c[0] = c[1] = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto x = node_position(s, samples[k].node);
    double d2 = 0;
    for (int i = 0; i < n; ++i) d2 += (x[i] - c[i]) * (x[i] - c[i]);
    t[k] = w[k] * std::sqrt(d2);
  }
  return pairwise_sum(t) / area;
}

SweepReport p_sweep(const std::function<Surface(double)>& initial, const std::vector<double>& ps,
                    Functional functional, const OptimizerConfig& cfg, double slack) {
  for (double p : ps)
    if (!(p > 2.0 && p <= 6.0)) throw InvalidArgument("p grid must lie in (2, 6]");
  SweepReport r;
  r.slack = slack;
  for (double p : ps) {
    SweepRow row;
    row.p = p;
    try {
      const OptRun run = minimize(initial(p), p, functional, cfg);
      row.energy = run.trace.back().energy;
      row.final_ps = run.final_ps;
      row.iterations = run.trace.back().iter;
      row.status = run.status;
      row.willmore = energy_wp(run.final_surface, 2.0, {cfg.threads, false}).willmore;
      row.radius = mean_radius(run.final_surface);
    } catch (const Error& e) {
      row.error = e.what();
    }
    r.rows.push_back(row);
  }
  std::vector<std::size_t> order(r.rows.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return r.rows[a].p < r.rows[b].p; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& lo = r.rows[order[k - 1]];
    const auto& hi = r.rows[order[k]];
    if (!lo.error.empty() || !hi.error.empty()) continue;
    if (lo.energy > hi.energy * (1.0 + slack)) r.monotone = false;
  }
  return r;
}

double sphere_critical_radius(double p, Functional functional) {
  if (!(p > 2.0)) throw InvalidArgument("the sphere family has a critical radius only for p > 2");
  return functional == Functional::Ep ? std::sqrt(p - 2.0) : std::sqrt(2.0 * p - 4.0);
}

double sphere_critical_energy(double p, Functional functional) {
  const double r = sphere_critical_radius(p, functional);
  const double k = functional == Functional::Ep ? 2.0 : 4.0;
  return std::numbers::pi * r * r * std::pow(1.0 + k / (r * r), 0.5 * p);
}

}  // namespace pcurv
