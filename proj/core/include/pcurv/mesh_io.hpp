#pragma once

// Plain-text exports: a polygon mesh ("v x y z ..." vertex lines, "f a b c"
// triangle lines with 1-based vertex indices, row-major grid triangulation)
// and a CSV table of per-node curvature data.

#include <ostream>
#include <string>

#include "pcurv/surfaces.hpp"

namespace pcurv {

struct MeshOptions {
  // Copies of an axisymmetric profile around the axis.
  int revolve_segments = 64;
};

void write_polygon_mesh(std::ostream& out, const Surface& s, const MeshOptions& opts = {});

// Columns: node, t1, t2, f0..f{n-1}, sqrt_detg, weight, normA2, normH2. One
// row per quadrature node.
void write_node_table(std::ostream& out, const Surface& s, int threads = 1);

// Shortest round-trip decimal form of a double ("%.17g").
std::string format_double(double x);

}  // namespace pcurv
