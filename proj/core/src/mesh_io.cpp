#include "pcurv/mesh_io.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "pcurv/energy.hpp"

namespace pcurv {
namespace {

void vertex(std::ostream& out, const double* x, int n) {
  out << 'v';
  for (int k = 0; k < n; ++k) out << ' ' << format_double(x[k]);
  out << '\n';
}

void quad(std::ostream& out, std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  // a-b-c-d counter-clockwise in parameter space, 1-based output
  out << "f " << a + 1 << ' ' << b + 1 << ' ' << c + 1 << '\n';
  out << "f " << a + 1 << ' ' << c + 1 << ' ' << d + 1 << '\n';
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_polygon_mesh(std::ostream& out, const Surface& s, const MeshOptions& opts) {
  if (opts.revolve_segments < 3) throw InvalidArgument("revolve_segments must be at least 3");
  if (const auto* g = std::get_if<GraphPatch>(&s)) {
    const int n1 = g->count[0], n2 = g->count[1], c = g->codim();
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        std::vector<double> x{g->coordinate(0, i), g->coordinate(1, j)};
        for (int k = 0; k < c; ++k) x.push_back(g->u[g->node(i, j) * c + k]);
        vertex(out, x.data(), g->dim);
      }
    for (int i = 0; i + 1 < n1; ++i)
      for (int j = 0; j + 1 < n2; ++j) quad(out, g->node(i, j), g->node(i + 1, j), g->node(i + 1, j + 1), g->node(i, j + 1));
    return;
  }
  if (const auto* t = std::get_if<TorusGrid>(&s)) {
    const int n1 = t->count[0], n2 = t->count[1];
    for (std::size_t k = 0; k < node_count(s); ++k) vertex(out, &t->f[k * t->dim], t->dim);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        const int i1 = (i + 1) % n1, j1 = (j + 1) % n2;
        quad(out, t->node(i, j), t->node(i1, j), t->node(i1, j1), t->node(i, j1));
      }
    return;
  }
  const auto& a = std::get<AxisymProfile>(s);
  const int m = a.count(), q = opts.revolve_segments;
  const auto rz = a.rz();
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < q; ++k) {
      const double th = 2.0 * std::numbers::pi * k / q;
      const double x[3] = {rz[2 * j] * std::cos(th), rz[2 * j] * std::sin(th), rz[2 * j + 1]};
      vertex(out, x, 3);
    }
  auto id = [q](int j, int k) { return static_cast<std::size_t>(j) * q + (k % q); };
  const bool tube = a.closure() == ProfileClosure::PeriodicTube;
  for (int j = 0; j + 1 < m + (tube ? 1 : 0); ++j)
    for (int k = 0; k < q; ++k) quad(out, id(j, k), id((j + 1) % m, k), id((j + 1) % m, k + 1), id(j, k + 1));
  if (!tube) {
    // pole vertices on the axis close the two end rings with fans
    const std::size_t south = static_cast<std::size_t>(m) * q, north = south + 1;
    const double ps[3] = {0.0, 0.0, rz[1]}, pn[3] = {0.0, 0.0, rz[2 * (m - 1) + 1]};
    vertex(out, ps, 3);
    vertex(out, pn, 3);
    for (int k = 0; k < q; ++k) {
      out << "f " << south + 1 << ' ' << id(0, k + 1) + 1 << ' ' << id(0, k) + 1 << '\n';
      out << "f " << north + 1 << ' ' << id(m - 1, k) + 1 << ' ' << id(m - 1, k + 1) + 1 << '\n';
    }
  }
}

void write_node_table(std::ostream& out, const Surface& s, int threads) {
  const auto samples = sample_nodes(s, threads);
  const int n = ambient_dim(s);
  out << "node,t1,t2";
  for (int k = 0; k < n; ++k) out << ",f" << k;
  out << ",sqrt_detg,weight,normA2,normH2\n";
  for (const auto& x : samples) {
    const auto t = node_parameter(s, x.node);
    const auto f = node_position(s, x.node);
    out << x.node << ',' << format_double(t[0]) << ',' << format_double(t[1]);
    for (int k = 0; k < n; ++k) out << ',' << format_double(f[k]);
    out << ',' << format_double(x.sqrtdetg) << ',' << format_double(x.weight) << ',' << format_double(x.normA2) << ','
        << format_double(x.normH2) << '\n';
  }
}

}  // namespace pcurv
