#include "pcurv/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "pcurv/diagnostics.hpp"
#include "pcurv/energy.hpp"
#include "pcurv/mesh_io.hpp"
#include "pcurv/optimize.hpp"
#include "pcurv/rng.hpp"
#include "pcurv/shapes.hpp"
#include "pcurv/variation.hpp"

#ifndef PCURV_VERSION
#define PCURV_VERSION "0.0.0"
#endif

namespace pcurv::cli {
namespace {

using fmt = std::string (*)(double);
const fmt num = format_double;

struct Common {
  std::string out = "-";
  int threads = 1;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out,-o", c.out, "CSV output path ('-' for standard output)")->capture_default_str();
  sub->add_option("--threads", c.threads, "worker threads (PCURV_THREADS overrides)")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();
  sub->add_option("--seed", c.seed, "seed for every random choice of the command")->capture_default_str();
}

// Outputs are collected first and written only after the command succeeded
// far enough to produce them.
struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;
  std::string stdout_text;
  void emit(const std::string& path, std::string text) {
    if (path == "-")
      stdout_text += text;
    else
      files.emplace_back(path, std::move(text));
  }
};

std::string timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(e, &end, 10);
    if (end != e && *end == '\0') t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Context {
  std::string command;
  std::string config_echo;
  int threads = 1;
  std::uint64_t seed = 1;

  std::string header() const {
    std::ostringstream h;
    h << "# pcurv " << PCURV_VERSION << '\n';
    h << "# command: " << command << '\n';
    h << "# seed: " << seed << '\n';
    h << "# threads: " << threads << '\n';
    h << "# timestamp: " << timestamp() << '\n';
    h << "# config-begin\n";
    std::istringstream in(config_echo);
    for (std::string line; std::getline(in, line);) h << "# " << line << '\n';
    h << "# config-end\n";
    return h.str();
  }
};

Functional parse_functional(const std::string& s) { return s == "Wp" ? Functional::Wp : Functional::Ep; }
std::vector<Functional> functionals(const std::string& s) {
  if (s == "both") return {Functional::Ep, Functional::Wp};
  return {parse_functional(s)};
}
std::size_t pick(CounterRng r, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(r.uniform() * static_cast<double>(n)));
}

const char* fname(Functional f) { return f == Functional::Ep ? "Ep" : "Wp"; }

// ---- energy ----------------------------------------------------------------

struct EnergyArgs {
  Common c;
  std::string shape = "sphere:r=1,M=256";
  std::vector<double> p{4.0};
};

void cmd_energy(const EnergyArgs& a, const Context& ctx, Outputs& o) {
  const Surface s = parse_shape(a.shape);
  std::ostringstream b;
  b << "shape,kind,p,N,value_Ep,value_Wp,area,willmore,intA2,intH2,gb_defect,euler_characteristic\n";
  for (double p : a.p) {
    const auto ep = energy_ep(s, p, {ctx.threads, false});
    const auto wp = energy_wp(s, p, {ctx.threads, false});
    b << '"' << a.shape << "\"," << kind_name(s) << ',' << num(p) << ',' << node_count(s) << ',' << num(ep.value) << ',' << num(wp.value)
      << ',' << num(ep.area) << ',' << num(ep.willmore) << ',' << num(ep.intA2) << ',' << num(ep.intH2) << ',';
    if (const auto chi = euler_characteristic(s)) {
      const double defect = ep.willmore - 0.25 * ep.intA2 - std::numbers::pi * *chi;
      b << num(defect) << ',' << *chi;
    } else {
      b << ',';
    }
    b << '\n';
  }
  o.emit(a.c.out, ctx.header() + b.str());
}

// ---- gradcheck -------------------------------------------------------------

struct GradcheckArgs {
  Common c;
  std::string shape = "graph-random:N=12,amp=0.1";
  std::vector<double> p{2.5, 3.0, 4.0};
  std::string functional = "both";
  std::string mode = "dof";
  int samples = 10;
  double step = 1e-5;
  double tol = 1e-5;
};

void cmd_gradcheck(const GradcheckArgs& a, const Context& ctx, Outputs& o) {
  const Surface s = parse_shape(a.shape);
  if (a.samples < 1) throw InvalidArgument("samples must be positive");
  if (!(a.step > 0)) throw InvalidArgument("step must be positive");
  const auto mask = free_dofs(s);
  std::vector<std::size_t> free;
  for (std::size_t k = 0; k < mask.size(); ++k)
    if (mask[k]) free.push_back(k);
  const std::vector<double> x0(dofs(s).begin(), dofs(s).end());
  std::ostringstream b;
  b << "functional,p,mode,index,analytic,central_difference,rel_error,pass\n";
  for (Functional f : functionals(a.functional)) {
    for (double p : a.p) {
      const VariationField g = discrete_gradient(s, p, f, ctx.threads);
      double gmax = 0;
      for (double v : g.grad) gmax = std::max(gmax, std::abs(v));
      CounterRng rng(a.c.seed);
      for (int k = 0; k < a.samples; ++k) {
        std::vector<double> phi(x0.size(), 0.0);
        std::size_t index = 0;
        if (a.mode == "dof") {
          index = free[pick(rng.split(static_cast<std::uint64_t>(k)), free.size())];
          phi[index] = 1.0;
        } else {
          index = static_cast<std::size_t>(k);
          auto r = rng.split(static_cast<std::uint64_t>(k));
          for (std::size_t j : free) phi[j] = r.normal();
        }
        auto e_at = [&](double t) {
          std::vector<double> x = x0;
          for (std::size_t j = 0; j < x.size(); ++j) x[j] += t * phi[j];
          return energy(with_dofs(s, x), p, f, {ctx.threads, false}).value;
        };
        const double fd = (e_at(a.step) - e_at(-a.step)) / (2.0 * a.step);
        double an = 0;
        for (std::size_t j = 0; j < phi.size(); ++j) an += g.grad[j] * phi[j];
        // exact zeros of the gradient are compared against a small floor
        const double scale = std::max({std::abs(an), std::abs(fd), 1e-3 * gmax, 1e-300});
        const double rel = std::abs(an - fd) / scale;
        b << fname(f) << ',' << num(p) << ',' << a.mode << ',' << index << ',' << num(an) << ',' << num(fd) << ','
          << num(rel) << ',' << (rel <= a.tol ? 1 : 0) << '\n';
      }
    }
  }
  o.emit(a.c.out, ctx.header() + b.str());
}

// ---- verify-bounds ---------------------------------------------------------

struct BoundsArgs {
  Common c;
  std::vector<double> p{2.1, 3.0, 4.0, 6.0};
  std::vector<double> lambda_cap{0.3, 1.0};
  std::size_t samples = 10000;
  int codim = 1;
};

void cmd_bounds(const BoundsArgs& a, const Context& ctx, Outputs& o) {
  std::ostringstream b;
  b << "p,lambda_cap,samples,lambda_min,violations,finite,spread";
  for (int k = 0; k < GrowthRatios::kCount; ++k) b << ",max_" << GrowthRatios::name(k);
  b << '\n';
  for (double lam : a.lambda_cap) {
    const auto samples = draw_bound_samples(a.codim, lam, a.samples, a.c.seed);
    for (double p : a.p) {
      const auto el = verify_ellipticity(p, lam, samples, ctx.threads);
      const auto gr = verify_growth(p, lam, samples, ctx.threads);
      b << num(p) << ',' << num(lam) << ',' << el.samples << ',' << num(el.lambda_min) << ',' << el.violations << ','
        << (gr.finite ? 1 : 0) << ',' << num(gr.spread);
      for (int k = 0; k < GrowthRatios::kCount; ++k) b << ',' << num(gr.max[k]);
      b << '\n';
    }
  }
  o.emit(a.c.out, ctx.header() + b.str());
}

// ---- optimizer flags -------------------------------------------------------

struct OptArgs {
  int max_iters = 5000;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double init_step = 1e-3;
  double stop_ps_tol = 0.0;
  double stop_ps_factor = 1e-4;
  double stop_rel_energy = 1e-10;
  int energy_window = 25;
  std::size_t ps_dictionary = 16;
  int ps_every = 1;
  bool recenter = true;
  bool normal_descent = true;
  std::string method = "sd";
  std::string metric = "euclidean";
  int lbfgs_memory = 8;

  OptimizerConfig config(std::uint64_t seed, int threads) const {
    OptimizerConfig c;
    c.max_iters = max_iters;
    c.armijo_c = armijo_c;
    c.backtrack_factor = backtrack;
    c.init_step = init_step;
    c.stop_ps_tol = stop_ps_tol;
    c.stop_ps_factor = stop_ps_factor;
    c.stop_rel_energy_tol = stop_rel_energy;
    c.energy_window = energy_window;
    c.seed = seed;
    c.ps_dictionary = ps_dictionary;
    c.ps_every = ps_every;
    c.renormalize_center = recenter;
    c.normal_descent = normal_descent;
    c.method = method == "lbfgs" ? DescentMethod::LBFGS : DescentMethod::SteepestDescent;
    c.metric = metric == "sobolev" ? DescentMetric::Sobolev : DescentMetric::Euclidean;
    c.lbfgs_memory = lbfgs_memory;
    c.threads = threads;
    c.validate();
    return c;
  }
};

void add_opt(CLI::App* sub, OptArgs& a) {
  sub->add_option("--max-iters", a.max_iters)->capture_default_str();
  sub->add_option("--armijo-c", a.armijo_c)->capture_default_str();
  sub->add_option("--backtrack", a.backtrack)->capture_default_str();
  sub->add_option("--init-step", a.init_step)->capture_default_str();
  sub->add_option("--stop-ps-tol", a.stop_ps_tol, "absolute PS tolerance (<= 0: factor times initial)")
      ->capture_default_str();
  sub->add_option("--stop-ps-factor", a.stop_ps_factor)->capture_default_str();
  sub->add_option("--stop-rel-energy", a.stop_rel_energy)->capture_default_str();
  sub->add_option("--energy-window", a.energy_window)->capture_default_str();
  sub->add_option("--ps-dictionary", a.ps_dictionary)->capture_default_str();
  sub->add_option("--ps-every", a.ps_every)->capture_default_str();
  sub->add_option("--recenter", a.recenter)->capture_default_str();
  sub->add_option("--normal-descent", a.normal_descent)->capture_default_str();
  sub->add_option("--method", a.method)->check(CLI::IsMember({"sd", "lbfgs"}))->capture_default_str();
  sub->add_option("--metric", a.metric)->check(CLI::IsMember({"euclidean", "sobolev"}))->capture_default_str();
  sub->add_option("--lbfgs-memory", a.lbfgs_memory)->capture_default_str();
}

// ---- minimize --------------------------------------------------------------

struct MinimizeArgs {
  Common c;
  OptArgs opt;
  std::string shape = "sphere:r=1,M=256,perturb=0.05";
  double p = 4.0;
  std::string functional = "Ep";
  std::string mesh;
};

int cmd_minimize(const MinimizeArgs& a, const Context& ctx, Outputs& o) {
  const Surface s = parse_shape(a.shape);
  const OptimizerConfig cfg = a.opt.config(a.c.seed, ctx.threads);
  const Functional f = parse_functional(a.functional);
  const OptRun run = minimize(s, a.p, f, cfg);
  std::ostringstream b;
  b << "iter,energy,step,ps,min_detg,grad_norm,slope\n";
  for (const auto& r : run.trace)
    b << r.iter << ',' << num(r.energy) << ',' << num(r.step) << ',' << num(r.ps) << ',' << num(r.min_detg) << ','
      << num(r.grad_norm) << ',' << num(r.slope) << '\n';
  b << "# status: " << status_name(run.status) << '\n';
  b << "# initial_ps: " << num(run.initial_ps) << '\n';
  b << "# final_ps: " << num(run.final_ps) << '\n';
  b << "# ps_tol: " << num(run.ps_tol) << '\n';
  b << "# mean_radius: " << num(mean_radius(run.final_surface)) << '\n';
  o.emit(a.c.out, ctx.header() + b.str());
  if (!a.mesh.empty()) {
    std::ostringstream m;
    m << ctx.header();
    write_polygon_mesh(m, run.final_surface);
    o.emit(a.mesh, m.str());
  }
  return run.status == OptStatus::DegenerateStep ? kExitNumerical : kExitOk;
}

// ---- p-sweep ---------------------------------------------------------------

struct SweepArgs {
  Common c;
  OptArgs opt;
  std::string shape = "sphere:r=1,M=256,perturb=0.05";
  std::vector<double> p{2.5, 3.0, 4.0};
  std::string functional = "Ep";
  double slack = 1e-3;
};

int cmd_sweep(const SweepArgs& a, const Context& ctx, Outputs& o) {
  const Surface s = parse_shape(a.shape);
  const OptimizerConfig cfg = a.opt.config(a.c.seed, ctx.threads);
  const Functional f = parse_functional(a.functional);
  const SweepReport r = p_sweep([&](double) { return s; }, a.p, f, cfg, a.slack);
  std::ostringstream b;
  b << "p,energy,closed_form,willmore,radius,final_ps,iterations,status,error\n";
  bool failed = false;
  for (const auto& row : r.rows) {
    b << num(row.p) << ',' << num(row.energy) << ',' << num(sphere_critical_energy(row.p, f)) << ','
      << num(row.willmore) << ',' << num(row.radius) << ',' << num(row.final_ps) << ',' << row.iterations << ','
      << (row.error.empty() ? status_name(row.status) : "Error") << ",\"" << row.error << "\"\n";
    failed = failed || !row.error.empty() || row.status == OptStatus::DegenerateStep;
  }
  b << "# monotone: " << (r.monotone ? 1 : 0) << '\n';
  o.emit(a.c.out, ctx.header() + b.str());
  return failed ? kExitNumerical : kExitOk;
}

// ---- monotonicity ----------------------------------------------------------

struct MonotonicityArgs {
  Common c;
  std::string shape = "sphere:r=1,M=1024";
  std::vector<double> center{0.0, 0.0, 1.0};
  int random_centers = 0;
  std::vector<double> sigma{0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.6, 1.9};
  double p = 3.0;
  int subsamples = 8;
};

void cmd_monotonicity(const MonotonicityArgs& a, const Context& ctx, Outputs& o) {
  const Surface s = parse_shape(a.shape);
  const int n = ambient_dim(s);
  std::vector<VecN<double>> centers;
  if (a.random_centers > 0) {
    // centers at random surface nodes
    CounterRng rng(a.c.seed);
    for (int k = 0; k < a.random_centers; ++k) {
      const std::size_t node = pick(rng.split(static_cast<std::uint64_t>(k)), node_count(s));
      VecN<double> x = node_position(s, node);
      if (std::holds_alternative<AxisymProfile>(s)) {
        const double th = 2.0 * std::numbers::pi * rng.split(static_cast<std::uint64_t>(k) + 1000003).uniform();
        const double r = x[0];
        x[0] = r * std::cos(th);
        x[1] = r * std::sin(th);
      }
      centers.push_back(x);
    }
  } else {
    if (static_cast<int>(a.center.size()) != n)
      throw InvalidArgument("center needs " + std::to_string(n) + " coordinates");
    VecN<double> x{};
    for (int k = 0; k < n; ++k) x[k] = a.center[k];
    centers.push_back(x);
  }
  std::ostringstream b;
  b << "center_id";
  for (int k = 0; k < n; ++k) b << ",c" << k;
  b << ",sigma,ball_area,ratio,int_abs_h,rhs_simon,rhs_es,slack,fitted_c,willmore\n";
  MonotonicityOptions mo;
  mo.subsamples = a.subsamples;
  mo.threads = ctx.threads;
  for (std::size_t id = 0; id < centers.size(); ++id) {
    const auto r = monotonicity_scan(s, centers[id], a.sigma, a.p, mo);
    for (std::size_t q = 0; q < a.sigma.size(); ++q) {
      b << id;
      for (int k = 0; k < n; ++k) b << ',' << num(centers[id][k]);
      b << ',' << num(a.sigma[q]) << ',' << num(r.ball_area[q]) << ',' << num(r.ratios[q]) << ','
        << num(r.int_abs_h[q]) << ',' << num(r.rhs_simon[q]) << ',' << num(r.rhs_es[q]) << ','
        << num(r.rhs_simon[q] - r.ratios[q]) << ',' << num(r.fitted_c) << ',' << num(r.willmore) << '\n';
    }
  }
  o.emit(a.c.out, ctx.header() + b.str());
}

// ---- neck ------------------------------------------------------------------

struct NeckArgs {
  Common c;
  double p = 3.0;
  std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
  int count = 2048;
  std::string mesh_dir;
};

void cmd_neck(const NeckArgs& a, const Context& ctx, Outputs& o) {
  const NeckScanReport r = neck_scan(a.eps, a.p, a.count, ctx.threads);
  std::ostringstream b;
  b << "eps,Ep,Wp,willmore,willmore_over_8pi,area,c0_gap,c1_gap,local_slope,slope,wp_spread\n";
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    b << num(row.eps) << ',' << num(row.ep) << ',' << num(row.wp) << ',' << num(row.willmore) << ','
      << num(row.willmore / (8.0 * std::numbers::pi)) << ',' << num(row.area) << ',' << num(row.c0_gap) << ','
      << num(row.c1_gap) << ',' << (k == 0 ? std::string() : num(r.local_slopes[k - 1])) << ',' << num(r.slope)
      << ',' << num(r.wp_spread) << '\n';
  }
  o.emit(a.c.out, ctx.header() + b.str());
  if (!a.mesh_dir.empty()) {
    for (double e : a.eps) {
      std::ostringstream m;
      m << ctx.header();
      write_polygon_mesh(m, make_neck_family(e, a.count));
      o.emit((std::filesystem::path(a.mesh_dir) / ("neck_eps_" + num(e) + ".obj")).string(), m.str());
    }
  }
}

// ---- suite -----------------------------------------------------------------

struct SuiteArgs {
  Common c;
  int profile_count = 256;
  int torus_count = 64;
  double p = 3.0;
};

int cmd_suite(const SuiteArgs& a, const Context& ctx, Outputs& o) {
  IdentityOptions io;
  io.profile_count = a.profile_count;
  io.torus_count = a.torus_count;
  io.p = a.p;
  io.threads = ctx.threads;
  const auto rows = identity_suite(io);
  std::ostringstream b;
  b << "shape,check,value,tolerance,pass,error\n";
  bool ok = true;
  for (const auto& r : rows) {
    b << r.shape << ',' << r.check << ',' << num(r.value) << ',' << num(r.tolerance) << ',' << (r.pass ? 1 : 0) << ",\""
      << r.error << "\"\n";
    ok = ok && (r.pass || !r.error.empty());
  }
  o.emit(a.c.out, ctx.header() + b.str());
  return ok ? kExitOk : kExitNumerical;
}

// ---- dump-mesh -------------------------------------------------------------

struct DumpArgs {
  Common c;
  std::string shape = "sphere:r=1,M=64";
  int segments = 64;
  std::string table;
};

void cmd_dump(const DumpArgs& a, const Context& ctx, Outputs& o) {
  const Surface s = parse_shape(a.shape);
  MeshOptions mo;
  mo.revolve_segments = a.segments;
  std::ostringstream m;
  m << ctx.header();
  write_polygon_mesh(m, s, mo);
  o.emit(a.c.out, m.str());
  if (!a.table.empty()) {
    std::ostringstream t;
    t << ctx.header();
    write_node_table(t, s, ctx.threads);
    o.emit(a.table, t.str());
  }
}

bool is_number(const std::string& v) {
  if (v.empty()) return false;
  char* end = nullptr;
  std::strtod(v.c_str(), &end);
  return *end == '\0';
}

std::string toml_scalar(const std::string& v) { return is_number(v) ? v : "\"" + v + "\""; }

// Effective settings of the chosen subcommand as a TOML section that
// --config reads back.
std::string echo_config(const CLI::App* sub) {
  std::ostringstream e;
  e << '[' << sub->get_name() << "]\n";
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string key = opt->get_single_name();
    if (key == "help" || opt->get_lnames().empty()) continue;
    std::vector<std::string> values;
    if (opt->count() > 0) {
      values = opt->results();
    } else {
      std::string d = opt->get_default_str();
      if (!d.empty() && d.front() == '[' && d.back() == ']') d = d.substr(1, d.size() - 2);
      if (opt->get_items_expected_max() > 1) {
        std::stringstream ss(d);
        for (std::string item; std::getline(ss, item, ',');) values.push_back(item);
      } else {
        values.push_back(d);
      }
    }
    e << key << '=';
    if (opt->get_items_expected_max() > 1) {
      e << '[';
      for (std::size_t k = 0; k < values.size(); ++k) e << (k ? "," : "") << toml_scalar(values[k]);
      e << ']';
    } else {
      e << toml_scalar(values.empty() ? std::string() : values.back());
    }
    e << '\n';
  }
  return e.str();
}

int threads_from_env(int fallback) {
  const char* e = std::getenv("PCURV_THREADS");
  if (!e || !*e) return fallback;
  char* end = nullptr;
  const long v = std::strtol(e, &end, 10);
  if (end == e || *end != '\0' || v < 1 || v > 1024)
    throw InvalidArgument(std::string("PCURV_THREADS must be an integer in [1, 1024], got '") + e + "'");
  return static_cast<int>(v);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature functionals E^p and W^p on discretized surfaces", "pcurv"};
  app.set_version_flag("--version", std::string("pcurv ") + PCURV_VERSION);
  app.set_config("--config", "", "TOML configuration file; flags override its values");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);
  app.fallthrough();

  EnergyArgs energy_a;
  auto* energy_c = app.add_subcommand("energy", "E^p and W^p of a shape");
  add_common(energy_c, energy_a.c);
  energy_c->add_option("--shape", energy_a.shape)->capture_default_str();
  energy_c->add_option("--p", energy_a.p)->delimiter(',')->capture_default_str();

  GradcheckArgs grad_a;
  auto* grad_c = app.add_subcommand("gradcheck", "discrete gradient against central differences");
  add_common(grad_c, grad_a.c);
  grad_c->add_option("--shape", grad_a.shape)->capture_default_str();
  grad_c->add_option("--p", grad_a.p)->delimiter(',')->capture_default_str();
  grad_c->add_option("--functional", grad_a.functional)->check(CLI::IsMember({"Ep", "Wp", "both"}))->capture_default_str();
  grad_c->add_option("--mode", grad_a.mode)->check(CLI::IsMember({"dof", "direction"}))->capture_default_str();
  grad_c->add_option("--samples", grad_a.samples)->capture_default_str();
  grad_c->add_option("--step", grad_a.step)->capture_default_str();
  grad_c->add_option("--tol", grad_a.tol)->capture_default_str();

  BoundsArgs bounds_a;
  auto* bounds_c = app.add_subcommand("verify-bounds", "sampled ellipticity and growth certification");
  add_common(bounds_c, bounds_a.c);
  bounds_c->add_option("--p", bounds_a.p)->delimiter(',')->capture_default_str();
  bounds_c->add_option("--lambda-cap", bounds_a.lambda_cap)->delimiter(',')->capture_default_str();
  bounds_c->add_option("--samples", bounds_a.samples)->capture_default_str();
  bounds_c->add_option("--codim", bounds_a.codim)->check(CLI::Range(1, kMaxDim - 2))->capture_default_str();

  MinimizeArgs min_a;
  auto* min_c = app.add_subcommand("minimize", "Armijo descent with a PS-surrogate stopping rule");
  add_common(min_c, min_a.c);
  add_opt(min_c, min_a.opt);
  min_c->add_option("--shape", min_a.shape)->capture_default_str();
  min_c->add_option("--p", min_a.p)->capture_default_str();
  min_c->add_option("--functional", min_a.functional)->check(CLI::IsMember({"Ep", "Wp"}))->capture_default_str();
  min_c->add_option("--mesh", min_a.mesh, "polygon dump of the final surface")->capture_default_str();

  SweepArgs sweep_a;
  auto* sweep_c = app.add_subcommand("p-sweep", "attained minima over a p grid");
  add_common(sweep_c, sweep_a.c);
  add_opt(sweep_c, sweep_a.opt);
  sweep_c->add_option("--shape", sweep_a.shape)->capture_default_str();
  sweep_c->add_option("--p", sweep_a.p)->delimiter(',')->capture_default_str();
  sweep_c->add_option("--functional", sweep_a.functional)->check(CLI::IsMember({"Ep", "Wp"}))->capture_default_str();
  sweep_c->add_option("--slack", sweep_a.slack)->capture_default_str();

  MonotonicityArgs mono_a;
  auto* mono_c = app.add_subcommand("monotonicity", "area ratios in balls against the monotonicity bounds");
  add_common(mono_c, mono_a.c);
  mono_c->add_option("--shape", mono_a.shape)->capture_default_str();
  mono_c->add_option("--center", mono_a.center)->delimiter(',')->capture_default_str();
  mono_c->add_option("--random-centers", mono_a.random_centers, "use this many seeded surface points as centers")
      ->capture_default_str();
  mono_c->add_option("--sigma", mono_a.sigma)->delimiter(',')->capture_default_str();
  mono_c->add_option("--p", mono_a.p)->capture_default_str();
  mono_c->add_option("--subsamples", mono_a.subsamples)->capture_default_str();

  NeckArgs neck_a;
  auto* neck_c = app.add_subcommand("neck", "sphere-catenoid-sphere degeneration scan");
  add_common(neck_c, neck_a.c);
  neck_c->add_option("--p", neck_a.p)->capture_default_str();
  neck_c->add_option("--eps", neck_a.eps)->delimiter(',')->capture_default_str();
  neck_c->add_option("--M", neck_a.count)->capture_default_str();
  neck_c->add_option("--mesh-dir", neck_a.mesh_dir, "write one polygon dump per eps here")->capture_default_str();

  SuiteArgs suite_a;
  auto* suite_c = app.add_subcommand("suite", "identity checks over the shape library");
  add_common(suite_c, suite_a.c);
  suite_c->add_option("--M", suite_a.profile_count)->capture_default_str();
  suite_c->add_option("--N", suite_a.torus_count)->capture_default_str();
  suite_c->add_option("--p", suite_a.p)->capture_default_str();

  DumpArgs dump_a;
  auto* dump_c = app.add_subcommand("dump-mesh", "polygon mesh and node table of a shape");
  add_common(dump_c, dump_a.c);
  dump_c->add_option("--shape", dump_a.shape)->capture_default_str();
  dump_c->add_option("--segments", dump_a.segments)->capture_default_str();
  dump_c->add_option("--table", dump_a.table, "CSV node table path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  CLI::App* sub = app.get_subcommands().front();
  Context ctx;
  ctx.command = sub->get_name();
  ctx.config_echo = echo_config(sub);
  Outputs o;
  int code = kExitOk;
  try {
    auto with = [&](const Common& c) {
      ctx.threads = threads_from_env(c.threads);
      ctx.seed = c.seed;
    };
    if (sub == energy_c) {
      with(energy_a.c);
      cmd_energy(energy_a, ctx, o);
    } else if (sub == grad_c) {
      with(grad_a.c);
      cmd_gradcheck(grad_a, ctx, o);
    } else if (sub == bounds_c) {
      with(bounds_a.c);
      cmd_bounds(bounds_a, ctx, o);
    } else if (sub == min_c) {
      with(min_a.c);
      code = cmd_minimize(min_a, ctx, o);
    } else if (sub == sweep_c) {
      with(sweep_a.c);
      code = cmd_sweep(sweep_a, ctx, o);
    } else if (sub == mono_c) {
      with(mono_a.c);
      cmd_monotonicity(mono_a, ctx, o);
    } else if (sub == neck_c) {
      with(neck_a.c);
      cmd_neck(neck_a, ctx, o);
    } else if (sub == suite_c) {
      with(suite_a.c);
      code = cmd_suite(suite_a, ctx, o);
    } else {
      with(dump_a.c);
      cmd_dump(dump_a, ctx, o);
    }
  } catch (const Error& e) {
    err << "pcurv " << ctx.command << ": " << e.what() << '\n';
    return e.numerical() ? kExitNumerical : kExitValidation;
  } catch (const std::exception& e) {
    err << "pcurv " << ctx.command << ": " << e.what() << '\n';
    return kExitNumerical;
  }

  for (const auto& [path, text] : o.files) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text) || !(f.flush())) {
      err << "pcurv " << ctx.command << ": cannot write " << path << '\n';
      return kExitValidation;
    }
  }
  out << o.stdout_text;
  if (code == kExitNumerical) err << "pcurv " << ctx.command << ": numerical failure, see status in the output\n";
  return code;
}

}  // namespace pcurv::cli
