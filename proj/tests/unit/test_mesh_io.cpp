#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "pcurv/mesh_io.hpp"
#include "pcurv/shapes.hpp"

using namespace pcurv;

namespace {

struct Counts {
  std::size_t v = 0, f = 0, max_index = 0, min_index = ~std::size_t{0};
};

Counts count_mesh(const std::string& text) {
  Counts c;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") ++c.v;
    if (tag == "f") {
      ++c.f;
      std::size_t a;
      while (ls >> a) c.max_index = std::max(c.max_index, a), c.min_index = std::min(c.min_index, a);
    }
  }
  return c;
}

std::string mesh_of(const Surface& s, int segments = 64) {
  std::ostringstream out;
  write_polygon_mesh(out, s, {segments});
  return out.str();
}

}  // namespace

TEST(MeshIO, TorusWraps) {
  const auto c = count_mesh(mesh_of(make_torus(2, 1, 10, 12)));
  EXPECT_EQ(c.v, 120u);
  EXPECT_EQ(c.f, 240u);
  EXPECT_EQ(c.min_index, 1u);
  EXPECT_EQ(c.max_index, 120u);
}

TEST(MeshIO, GraphDoesNotWrap) {
  const auto c = count_mesh(mesh_of(make_flat_graph(8, 9)));
  EXPECT_EQ(c.v, 72u);
  EXPECT_EQ(c.f, 2u * 7 * 8);
}

TEST(MeshIO, ProfileIsRevolvedWithPoleFans) {
  const auto c = count_mesh(mesh_of(make_sphere(1, 16), 10));
  EXPECT_EQ(c.v, 16u * 10 + 2);
  EXPECT_EQ(c.f, 2u * 15 * 10 + 2 * 10);
  EXPECT_EQ(c.max_index, c.v);
}

TEST(MeshIO, NodeTableHasOneRowPerQuadratureNode) {
  const auto s = make_torus(2, 1, 8, 8);
  std::ostringstream out;
  write_node_table(out, s);
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header, "node,t1,t2,f0,f1,f2,sqrt_detg,weight,normA2,normH2");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, quadrature(s).nodes.size());
}

TEST(MeshIO, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 12345.678901234567, 0.0})
    EXPECT_EQ(std::stod(format_double(x)), x);
}
