#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "syskit/error.hpp"
#include "syskit/fixtures.hpp"
#include "syskit/geodesic.hpp"
#include "syskit/mesh.hpp"

using namespace syskit;

namespace {

const char* kTetra =
    "MMESH 1\n4 6 4 0\nv 0\nv 1\nv 2\nv 3\n"
    "e 0 0 1 1\ne 1 0 2 1\ne 2 0 3 1\ne 3 1 2 1\ne 4 1 3 1\ne 5 2 3 1\n"
    "f 0 0 1 2\nf 1 0 3 1\nf 2 1 3 2\nf 3 0 2 3\n";

TriMesh parse(const std::string& s) {
  std::istringstream in(s);
  return read_mesh(in);
}

ErrorCode code_of(const std::string& s) {
  try {
    parse(s);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

// All-pairs edge-graph distances by Floyd-Warshall.
std::vector<std::vector<double>> all_pairs(const TriMesh& m) {
  const auto n = static_cast<std::size_t>(m.vertex_count());
  std::vector<std::vector<double>> d(n, std::vector<double>(n, INFINITY));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : m.edges()) {
    d[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] = e.length;
    d[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = e.length;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

}  // namespace

TEST_CASE("load tetrahedron") {
  auto m = parse(kTetra);
  CHECK(m.genus() == 0);
  CHECK(m.is_closed());
  CHECK(m.area() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(m.euler_characteristic() == 2);
}

TEST_CASE("load errors") {
  CHECK(code_of("MMESH 1\n3 3 1 0\nv 0\nv 1\nv 2\ne 0 0 1 1\ne 1 1 2 1\ne 2 2 0 3\nf 0 0 1 2\n") ==
        ErrorCode::TriangleInequality);
  CHECK(code_of("MESH 1\n") == ErrorCode::Parse);
  CHECK(code_of("MMESH 1\n3 2 1 0\nv 0\nv 1\nv 2\ne 0 0 1 1\ne 1 1 2 1\nf 0 0 1 2\n") == ErrorCode::Parse);
  // Three faces on one edge.
  CHECK(code_of("MMESH 1\n5 7 3 0\nv 0\nv 1\nv 2\nv 3\nv 4\n"
                "e 0 0 1 1\ne 1 0 2 1\ne 2 1 2 1\ne 3 0 3 1\ne 4 1 3 1\ne 5 0 4 1\ne 6 1 4 1\n"
                "f 0 0 1 2\nf 1 0 1 3\nf 2 0 1 4\n") == ErrorCode::Nonmanifold);
  try {
    load_mesh("/nonexistent/file.mmesh");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
  }
}

TEST_CASE("round trip is exact on decimal strings") {
  auto m = parse(kTetra);
  std::ostringstream out;
  write_mesh(m, out);
  auto again = parse(out.str());
  std::ostringstream out2;
  write_mesh(again, out2);
  CHECK(out.str() == out2.str());
  auto t = flat_torus(4);
  std::ostringstream a, b;
  write_mesh(t, a);
  write_mesh(parse(a.str()), b);
  CHECK(a.str() == b.str());
}

TEST_CASE("fixtures have the expected topology") {
  auto t = flat_torus(4);
  CHECK(t.genus() == 1);
  CHECK(t.vertex_count() == 16);
  CHECK(t.area() == doctest::Approx(16));
  CHECK(icosphere(0).face_count() == 20);
  CHECK(icosphere(0).genus() == 0);
  CHECK(genus2_surface().genus() == 2);
  CHECK(pinched_genus2(0.2).genus() == 2);
  CHECK(hairy_torus(3, 0.1).genus() == 4);
  CHECK(hairy_torus(0, 0.1).genus() == 1);
  auto ms = marked_sphere(8);
  CHECK(ms.marks().size() == 8);
  CHECK(ms.genus() == 0);
  for (const auto& mesh : {t, genus2_surface(), pinched_genus2(0.2), hairy_torus(2, 0.4)}) {
    CHECK(mesh.is_closed());
    CHECK(mesh.component_count() == 1);
    CHECK(mesh.euler_characteristic() % 2 == 0);
    CHECK(mesh.euler_characteristic() <= 2);
  }
}

TEST_CASE("midpoint refinement keeps the metric") {
  for (const auto& m : {flat_torus(4), genus2_surface(6, 1), icosphere(1)}) {
    auto r = refine_midpoint(m);
    CHECK(r.area() == doctest::Approx(m.area()).epsilon(1e-12));
    CHECK(r.genus() == m.genus());
    CHECK(r.vertex_count() == m.vertex_count() + m.edge_count());
    CHECK(r.face_count() == 4 * m.face_count());
    // Distances between original vertices cannot increase.
    auto d0 = mesh_dijkstra(m, {0}).dist;
    auto d1 = mesh_dijkstra(r, {0}).dist;
    for (int v = 0; v < m.vertex_count(); ++v) CHECK(d1[static_cast<std::size_t>(v)] <= d0[static_cast<std::size_t>(v)] + 1e-12);
  }
}

TEST_CASE("geodesic distance") {
  auto tetra = parse(kTetra);
  CHECK(geodesic_distance(tetra, 0, 0)[2] == doctest::Approx(1));
  auto t = flat_torus(4);
  CHECK(geodesic_distance(t, 0, 0)[1] == doctest::Approx(1));
  // Vertex (2,1) from (0,0): edge path 1 + sqrt 2; straight line sqrt 5.
  const int target = 2 + 4 * 1;
  double prev = INFINITY;
  for (int s = 0; s <= 3; ++s) {
    const double d = geodesic_distance(t, 0, s)[static_cast<std::size_t>(target)];
    CHECK(d <= prev + 1e-12);
    CHECK(d >= std::sqrt(5.0) - 1e-12);
    prev = d;
  }
  CHECK(geodesic_distance(t, 0, 0)[target] == doctest::Approx(1 + std::sqrt(2.0)));
  CHECK(prev < 1 + std::sqrt(2.0) - 1e-3);
}

TEST_CASE("disk packing") {
  auto t = flat_torus(8);
  CHECK(maximal_disk_packing(t, 100.0).size() == 1);
  CHECK(maximal_disk_packing(t, 0.5).size() == 64);
  // Independent farthest-point scan on all-pairs distances.
  const auto d = all_pairs(t);
  std::vector<int> centers{0};
  while (true) {
    int best = -1;
    double best_d = -1;
    for (int v = 0; v < 64; ++v) {
      double md = INFINITY;
      for (int c : centers) md = std::min(md, d[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)]);
      if (md > best_d) {
        best_d = md;
        best = v;
      }
    }
    if (best_d < 2.0) break;
    centers.push_back(best);
  }
  auto got = maximal_disk_packing(t, 1.0);
  CHECK(got == centers);
  CHECK(got.size() == 14);
  // Maximality: every vertex lies within 2 r0 of a center.
  for (int v = 0; v < 64; ++v) {
    double md = INFINITY;
    for (int c : got) md = std::min(md, d[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)]);
    CHECK(md < 2.0);
  }
  CHECK_THROWS_AS(maximal_disk_packing(t, 1.0, {0, 1}), Error);
}

TEST_CASE("voronoi cells") {
  auto t = flat_torus(8);
  auto one = voronoi_cells(t, {5});
  for (int o : one.owner) CHECK(o == 0);
  CHECK(one.links.empty());
  // Antipodal centers: tie vertices go to the lower id.
  auto two = voronoi_cells(t, {0, 4 + 8 * 4});
  int count0 = 0;
  for (int o : two.owner) count0 += o == 0;
  CHECK(count0 >= 32);
  auto centers = maximal_disk_packing(t, 1.0);
  auto vp = voronoi_cells(t, centers);
  const auto d = all_pairs(t);
  // A crossing edge has both ends within 2 r0 of their centers.
  for (const auto& link : vp.links)
    CHECK(d[static_cast<std::size_t>(centers[static_cast<std::size_t>(link.i)])][static_cast<std::size_t>(centers[static_cast<std::size_t>(link.j)])] <= 4.0 + t.max_edge_length() + 1e-12);
  // Cells are connected through their own shortest-path trees.
  for (int v = 0; v < t.vertex_count(); ++v) {
    int at = v;
    while (vp.pred_edge[static_cast<std::size_t>(at)] >= 0) {
      const int next = t.other_end(vp.pred_edge[static_cast<std::size_t>(at)], at);
      CHECK(vp.owner[static_cast<std::size_t>(next)] == vp.owner[static_cast<std::size_t>(v)]);
      at = next;
    }
    CHECK(at == centers[static_cast<std::size_t>(vp.owner[static_cast<std::size_t>(v)])]);
  }
}

TEST_CASE("disk regularity") {
  auto t = flat_torus(8);
  CHECK(disk_regularity_check(t, 0.5).pass());
  CHECK(disk_regularity_check(t, 0.0).pass());
  auto thin = hairy_torus(1, 0.04);
  auto r = disk_regularity_check(thin, 1.0);
  CHECK_FALSE(r.pass());
  CHECK(disk_regularity_check(hairy_torus(1, 0.04), 0.005).pass());
  // Packing bound on a regular mesh.
  const double r0 = 1.0;
  REQUIRE(disk_regularity_check(t, r0).pass());
  CHECK(maximal_disk_packing(t, r0).size() <= 2 * t.area() / (r0 * r0));
}

TEST_CASE("packing with chord distances recovers the square lattice") {
  // Edge-graph distances favour one diagonal, so the farthest-point scan
  // packs 14 disks; chord distances are flat and give the 4 x 4 lattice.
  auto t = flat_torus(8);
  for (int s = 1; s <= 3; ++s) CHECK(maximal_disk_packing(t, 1.0, {}, s).size() == 16);
  auto lattice = maximal_disk_packing(t, 1.0, {}, 1);
  auto vp = voronoi_cells(t, lattice);
  const auto d = all_pairs(t);
  for (const auto& link : vp.links)
    CHECK(d[static_cast<std::size_t>(lattice[static_cast<std::size_t>(link.i)])][static_cast<std::size_t>(lattice[static_cast<std::size_t>(link.j)])] <= 4.0 + 1e-12);
}
