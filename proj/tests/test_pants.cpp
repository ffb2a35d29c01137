#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "doctest.h"
#include "syskit/error.hpp"
#include "syskit/fixtures.hpp"
#include "syskit/homology.hpp"
#include "syskit/pants.hpp"
#include "syskit/surgery.hpp"
#include "syskit/z2.hpp"

using namespace syskit;

namespace {

TriMesh unit_tetrahedron() {
  std::istringstream in(
      "MMESH 1\n4 6 4 0\n"
      "v 0 0 0 0\nv 1 1 0 0\nv 2 0.5 0.8660254037844386 0\nv 3 0.5 0.28867513459481287 0.816496580927726\n"
      "e 0 0 1 1\ne 1 0 2 1\ne 2 0 3 1\ne 3 1 2 1\ne 4 1 3 1\ne 5 2 3 1\n"
      "f 0 0 2 1\nf 1 0 1 3\nf 2 1 2 3\nf 3 2 0 3\n");
  return read_mesh(in);
}

std::vector<double> linear_height(const TriMesh& m, double a, double b, double c) {
  std::vector<double> f;
  for (const auto& p : m.coords()) f.push_back(a * p[0] + b * p[1] + c * p[2]);
  return f;
}

int rank_of(const TriMesh& m, const std::vector<MeshLoop>& loops) {
  const auto basis = tree_cotree_basis(m);
  Z2Basis span(static_cast<std::size_t>(basis.dim));
  int rank = 0;
  for (const auto& l : loops) rank += span.insert(homology_class(m, basis, l));
  return rank;
}

void check_structure(const PantsDecomposition& d, int genus, int marks) {
  CHECK(d.valid());
  CHECK(d.validation.loops_simple);
  CHECK(d.validation.loops_vertex_disjoint);
  CHECK(d.validation.marks_off_loops);
  CHECK(static_cast<int>(d.loops.size()) == 3 * genus - 3 + marks);
  CHECK(d.provenance.size() == d.loops.size());
  for (const auto& c : d.validation.components) {
    CHECK(c.type == PieceType::Pants);
    CHECK(c.boundaries + c.marks == 3);
  }
  double total = 0.0;
  for (const auto& l : d.loops) total += l.length;
  CHECK(d.total_length == doctest::Approx(total));
}

void check_audits(const std::vector<Audit>& audits) {
  for (const auto& a : audits) {
    CAPTURE(a.name);
    CHECK_FALSE(a.anchor.empty());
    if (a.applicable) CHECK(a.pass);
  }
}

}  // namespace

TEST_CASE("nesting depth uses the floor of log2") {
  CHECK(nesting_depth(4) == 3);
  CHECK(nesting_depth(7) == 3);
  CHECK(nesting_depth(8) == 4);
  CHECK(nesting_depth(64) == 7);
  CHECK_THROWS_AS(nesting_depth(0), Error);
}

TEST_CASE("reeb graph shapes") {
  SUBCASE("sphere height is a single arc") {
    auto s = icosphere(2);
    auto g = reeb_graph(s, height_function(s, "z"));
    CHECK(g.nodes.size() == 2);
    CHECK(g.arcs.size() == 1);
    CHECK(g.betti() == 0);
  }
  SUBCASE("vertical torus is a cycle") {
    auto t = flat_torus(8);
    for (const char* kind : {"x", "y", "z"}) {
      auto g = reeb_graph(t, height_function(t, kind));
      CHECK(g.betti() == 1);
    }
  }
  SUBCASE("genus two has two cycles") {
    auto m = genus2_surface(8, 3);
    for (const char* kind : {"x", "y", "z", "dist"}) {
      auto g = reeb_graph(m, height_function(m, kind));
      CAPTURE(kind);
      CHECK(g.betti() == 2);
    }
  }
  SUBCASE("arc loops follow their levels") {
    auto t = flat_torus(8);
    auto g = reeb_graph(t, height_function(t, "z"));
    for (const auto& a : g.arcs) {
      CHECK(a.loop.size() >= 3);
      CHECK(a.mid > g.nodes[static_cast<std::size_t>(a.lower)].value);
      CHECK(a.mid < g.nodes[static_cast<std::size_t>(a.upper)].value);
    }
  }
  SUBCASE("non-finite values are rejected") {
    auto t = flat_torus(4);
    std::vector<double> f(16, 0.0);
    f[3] = std::numeric_limits<double>::quiet_NaN();
    try {
      reeb_graph(t, f);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonFiniteValues);
    }
  }
}

TEST_CASE("sweep width") {
  SUBCASE("tetrahedron height stays below the base perimeter") {
    auto t = unit_tetrahedron();
    const double w = sweep_width(t, height_function(t, "z"));
    CHECK(w < 3.0);
    CHECK(w > 3.0 - 1e-9);
  }
  SUBCASE("tilted tetrahedron matches exact plane sections") {
    auto t = unit_tetrahedron();
    CHECK(sweep_width(t, linear_height(t, 0.3, 0.1, 1.0)) == doctest::Approx(2.6787266464439072555).epsilon(1e-9));
  }
  SUBCASE("row index on a torus cuts two meridians") {
    const int n = 8;
    auto t = flat_torus(n);
    std::vector<double> f;
    for (int v = 0; v < t.vertex_count(); ++v) f.push_back(v / n);
    CHECK(sweep_width(t, f) == doctest::Approx(2.0 * n));
  }
  SUBCASE("constant values stay finite") {
    auto t = flat_torus(4);
    const double w = sweep_width(t, std::vector<double>(16, 1.0));
    CHECK(std::isfinite(w));
    CHECK(w > 0.0);
  }
}

TEST_CASE("reeb pants decompositions") {
  SUBCASE("torus without marks is a degenerate cylinder") {
    auto t = flat_torus(8);
    auto d = reeb_pants_decomposition(t, height_function(t, "z"));
    CHECK(d.loops.size() == 1);
    CHECK_FALSE(d.valid());
    CHECK(d.degenerate());
    REQUIRE(d.validation.components.size() == 1);
    CHECK(d.validation.components[0].type == PieceType::Cylinder);
  }
  SUBCASE("sphere with four marks splits two and two") {
    auto s = marked_sphere(4);
    auto d = reeb_pants_decomposition(s, height_function(s, "x"));
    check_structure(d, 0, 4);
    REQUIRE(d.validation.components.size() == 2);
    for (const auto& c : d.validation.components) CHECK(c.marks == 2);
  }
  SUBCASE("genus two gives two pants") {
    auto m = genus2_surface(8, 3);
    auto d = reeb_pants_decomposition(m, height_function(m, "x"));
    check_structure(d, 2, 0);
    CHECK(d.validation.components.size() == 2);
  }
  SUBCASE("loops are bounded by the sweep width") {
    std::vector<std::pair<TriMesh, std::string>> cases;
    cases.emplace_back(marked_sphere(6), "z");
    auto g = genus2_surface(8, 3);
    g.set_marks(farthest_point_marks(g, 3));
    cases.emplace_back(g, "x");
    auto t = flat_torus(8);
    t.set_marks(farthest_point_marks(t, 4));
    cases.emplace_back(t, "z");
    for (const auto& [m, kind] : cases) {
      const auto f = height_function(m, kind);
      const double width = sweep_width(m, f);
      auto d = reeb_pants_decomposition(m, f);
      check_structure(d, m.genus(), static_cast<int>(m.marks().size()));
      check_audits(d.audits);
      for (const auto& l : d.loops) CHECK(l.length <= width * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("independent loops from a decomposition") {
  SUBCASE("torus keeps its single loop") {
    auto t = flat_torus(8);
    auto d = reeb_pants_decomposition(t, height_function(t, "z"));
    auto loops = extract_independent_from_pants(d.mesh, d.loops);
    REQUIRE(loops.size() == 1);
    CHECK(loops[0].edges == d.loops[0].edges);
  }
  SUBCASE("genus two keeps two of three") {
    auto m = genus2_surface(8, 3);
    auto d = reeb_pants_decomposition(m, height_function(m, "x"));
    auto loops = extract_independent_from_pants(d.mesh, d.loops);
    CHECK(loops.size() == 2);
    CHECK(rank_of(d.mesh, loops) == 2);
  }
  SUBCASE("sphere gives nothing") {
    auto s = icosphere(1);
    CHECK(extract_independent_from_pants(s, {}).empty());
  }
  SUBCASE("separating loops alone are rank deficient") {
    auto m = genus2_surface(8, 3);
    try {
      extract_independent_from_pants(m, {genus2_waist(m)});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::RankDeficit);
    }
  }
}

TEST_CASE("marked sphere decomposition") {
  SUBCASE("four marks need one loop") {
    auto r = marked_sphere_decomposition(marked_sphere(4));
    CHECK(r.kappa == 3);
    check_structure(r.decomposition, 0, 4);
    CHECK(r.order.size() == 4);
    CHECK(r.r0 == doctest::Approx(r.ell / 4.0));
  }
  SUBCASE("audits hold across sizes") {
    for (int n : {4, 5, 7, 8, 16, 32}) {
      CAPTURE(n);
      auto r = marked_sphere_decomposition(marked_sphere(n));
      check_structure(r.decomposition, 0, n);
      check_audits(r.decomposition.audits);
      CHECK(r.decomposition.audits.size() == 4);
      CHECK(r.graph_length <= 12.0 * (r.centers - 2) * r.r0);
      CHECK(r.gamma_length <= 2.0 * r.tree_length);
      CHECK(std::set<int>(r.order.begin(), r.order.end()).size() == static_cast<std::size_t>(n));
      CHECK(r.delta_corridor >= 0.0);
    }
  }
  SUBCASE("errors") {
    auto check_code = [](const TriMesh& m, ErrorCode code, double ell = 0.0) {
      MarkedSphereOptions o;
      o.ell = ell;
      try {
        marked_sphere_decomposition(m, o);
        FAIL("expected an error");
      } catch (const Error& e) {
        CHECK(e.code() == code);
      }
    };
    auto t = flat_torus(6);
    t.set_marks({0, 10, 20, 30});
    check_code(t, ErrorCode::NotSphere);
    auto s = icosphere(2);
    s.set_marks(farthest_point_marks(s, 3));
    check_code(s, ErrorCode::TooFewMarks);
    check_code(marked_sphere(4), ErrorCode::MarksTooClose, 100.0);
  }
}

TEST_CASE("genus surface decomposition") {
  SUBCASE("sphere with four marks delegates to the sphere stage") {
    auto r = genus_surface_decomposition(marked_sphere(4));
    check_structure(r.decomposition, 0, 4);
    for (const auto& p : r.decomposition.provenance) CHECK(p == "sphere stage");
  }
  SUBCASE("torus with one mark needs one loop") {
    auto t = flat_torus(8);
    t.set_marks({0});
    auto r = genus_surface_decomposition(t);
    check_structure(r.decomposition, 1, 1);
    REQUIRE(r.decomposition.validation.components.size() == 1);
    CHECK(r.decomposition.validation.components[0].euler == 0);
  }
  SUBCASE("pinched waist is cut first") {
    auto r = genus_surface_decomposition(pinched_genus2(0.2));
    check_structure(r.decomposition, 2, 0);
    CHECK(r.decomposition.provenance[0] == "short loop");
    REQUIRE(r.signatures.size() == 3);
    CHECK(r.signatures[0] == "(2,0)");
    CHECK(r.signatures[1] == "(1,1)");
    CHECK(r.signatures[2] == "(1,1)");
  }
  SUBCASE("closed fixtures") {
    std::vector<TriMesh> cases{genus2_surface(8, 3), hairy_torus(2, 0.1)};
    auto marked = genus2_surface(8, 3);
    marked.set_marks(farthest_point_marks(marked, 3));
    cases.push_back(marked);
    for (const auto& m : cases) {
      GenusOptions o;
      o.c_g = 100.0;
      auto r = genus_surface_decomposition(m, o);
      check_structure(r.decomposition, m.genus(), static_cast<int>(m.marks().size()));
      CHECK(r.steps <= 4 * r.genus + 2 * r.marks);
      for (const auto& a : r.decomposition.audits)
        if (a.name == "loop count") CHECK(a.pass);
    }
  }
  SUBCASE("torus without marks is degenerate") {
    auto r = genus_surface_decomposition(flat_torus(8));
    CHECK(r.decomposition.degenerate());
    CHECK(r.decomposition.loops.size() == 1);
  }
  SUBCASE("open surfaces are rejected") {
    auto t = flat_torus(6);
    std::vector<int> row;
    for (int i = 0; i < 6; ++i) row.push_back(t.find_edge(i, (i + 1) % 6));
    auto open = cut_along(t, row).mesh;
    try {
      genus_surface_decomposition(open);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotClosed);
    }
  }
}

TEST_CASE("hyperelliptic lifts") {
  SUBCASE("four branch points give a torus") {
    auto f = hyperelliptic_fixture(1);
    auto r = lift_through_double_cover(f.sphere, f.cocycle);
    CHECK(r.cover_genus == 1);
    CHECK(r.cover.mesh.euler_characteristic() == 0);
    CHECK(r.decomposition.degenerate());
    check_audits(r.audits);
  }
  SUBCASE("genus two and three covers") {
    for (int g : {2, 3}) {
      auto f = hyperelliptic_fixture(g);
      auto r = lift_through_double_cover(f.sphere, f.cocycle);
      CHECK(r.cover_genus == g);
      CHECK(r.cover.mesh.euler_characteristic() == 2 * 2 - (2 * g + 2));
      check_structure(r.decomposition, g, 0);
      check_audits(r.audits);
      CHECK(r.lifted_count >= static_cast<int>(r.base.decomposition.loops.size()));
    }
  }
  SUBCASE("lifts of loops around one and two branch points") {
    auto f = hyperelliptic_fixture(2);
    auto cover = build_double_cover(f.sphere, f.cocycle);
    const int mark = f.sphere.marks()[0];
    std::vector<int> ring;
    for (int id : f.sphere.vertex_edges(mark)) ring.push_back(f.sphere.other_end(id, mark));
    // Link of the mark in cyclic order.
    std::vector<int> walk{ring[0]};
    std::set<int> used{ring[0]};
    while (walk.size() < ring.size()) {
      for (int v : ring)
        if (!used.count(v) && f.sphere.find_edge(walk.back(), v) >= 0) {
          walk.push_back(v);
          used.insert(v);
          break;
        }
    }
    walk.push_back(walk.front());
    auto link = loop_from_vertices(f.sphere, walk);
    auto lifts = lift_loop(cover, f.sphere, link);
    REQUIRE(lifts.size() == 1);
    CHECK(lifts[0].length == doctest::Approx(2.0 * link.length));
    auto base = marked_sphere_decomposition(f.sphere);
    for (const auto& l : base.decomposition.loops) {
      auto up = lift_loop(cover, f.sphere, l);
      double total = 0.0;
      for (const auto& u : up) total += u.length;
      CHECK(total == doctest::Approx(2.0 * l.length));
    }
  }
  SUBCASE("trivial holonomy at a mark is bad branch data") {
    auto f = hyperelliptic_fixture(2);
    for (const std::vector<int>& cocycle : {std::vector<int>{}, std::vector<int>(f.cocycle.begin() + 1, f.cocycle.end())}) {
      try {
        build_double_cover(f.sphere, cocycle);
        FAIL("expected an error");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadBranchData);
      }
    }
  }
}
