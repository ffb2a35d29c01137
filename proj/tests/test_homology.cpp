#include <random>

#include "doctest.h"
#include "syskit/error.hpp"
#include "syskit/fixtures.hpp"
#include "syskit/geodesic.hpp"
#include "syskit/homology.hpp"

using namespace syskit;

namespace {

// Same combinatorics with every length scaled by a random factor in
// [1 - amp, 1 + amp], re-drawn until every face is a valid triangle.
TriMesh jitter(const TriMesh& m, std::mt19937_64& rng, double amp) {
  std::uniform_real_distribution<double> u(1 - amp, 1 + amp);
  while (true) {
    std::vector<MeshEdge> edges = m.edges();
    for (auto& e : edges) {
      e.length *= u(rng);
      e.length_text.clear();
    }
    try {
      return TriMesh::from_faces(m.vertex_count(), edges, m.faces(), m.marks());
    } catch (const Error&) {
    }
  }
}

MeshLoop row_loop(const TriMesh& t, int n, int j) {
  std::vector<int> walk;
  for (int i = 0; i <= n; ++i) walk.push_back(i % n + n * j);
  return loop_from_vertices(t, walk);
}

MeshLoop column_loop(const TriMesh& t, int n, int i) {
  std::vector<int> walk;
  for (int j = 0; j <= n; ++j) walk.push_back(i + n * (j % n));
  return loop_from_vertices(t, walk);
}

}  // namespace

TEST_CASE("signature edge counts") {
  CHECK(tree_cotree_basis(icosphere(1)).dim == 0);
  CHECK(tree_cotree_basis(flat_torus(4)).dim == 2);
  CHECK(tree_cotree_basis(genus2_surface()).dim == 4);
  CHECK(tree_cotree_basis(hairy_torus(3, 0.2)).dim == 8);
}

TEST_CASE("classes of basic loops") {
  auto t = flat_torus(5);
  auto b = tree_cotree_basis(t);
  for (int f = 0; f < t.face_count(); ++f) {
    const auto& face = t.face(f);
    auto loop = loop_from_vertices(t, {face.v[0], face.v[1], face.v[2]});
    CHECK(homology_class(t, b, loop).is_zero());
  }
  auto row = row_loop(t, 5, 0);
  auto col = column_loop(t, 5, 0);
  CHECK(rank_z2({homology_class(t, b, row), homology_class(t, b, col)}) == 2);
  // Parallel rows are homologous.
  CHECK(homology_class(t, b, row) == homology_class(t, b, row_loop(t, 5, 3)));
  MeshLoop twice = row;
  twice.edges.insert(twice.edges.end(), row.edges.begin(), row.edges.end());
  CHECK(homology_class(t, b, twice).is_zero());
  // Additivity over concatenation at a shared vertex.
  MeshLoop both = row;
  both.edges.insert(both.edges.end(), col.edges.begin(), col.edges.end());
  CHECK(homology_class(t, b, both) == (homology_class(t, b, row) ^ homology_class(t, b, col)));
  MeshLoop broken = row;
  broken.edges.pop_back();
  CHECK_THROWS_AS(homology_class(t, b, broken), Error);
}

TEST_CASE("signature loops form a basis") {
  for (const auto& m : {flat_torus(4), genus2_surface(6, 1), hairy_torus(2, 0.3)}) {
    auto b = tree_cotree_basis(m);
    std::vector<Z2Vector> cls;
    for (int i = 0; i < b.dim; ++i) cls.push_back(homology_class(m, b, signature_loop(m, b, i)));
    CHECK(rank_z2(cls) == static_cast<std::size_t>(b.dim));
  }
}

TEST_CASE("oracle on fixtures") {
  for (int n : {3, 4, 6}) CHECK(shortest_nontrivial_loop_oracle(flat_torus(n)).length == doctest::Approx(n));
  try {
    shortest_nontrivial_loop_oracle(icosphere(1));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoNontrivialClass);
  }
  try {
    shortest_nontrivial_loop_oracle(hairy_torus(3, 0.2));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GenusTooLarge);
  }
  // Genus 2: handle meridians have length n; the waist square has 4 * hole.
  auto g2 = genus2_surface(8, 3);
  CHECK(shortest_nontrivial_loop_oracle(g2).length == doctest::Approx(8));
  auto r = shortest_nontrivial_loop_oracle(hairy_torus(1, 0.2));
  CHECK(r.length == doctest::Approx(0.2));
}

TEST_CASE("product search agrees with tree-plus-edge search") {
  std::mt19937_64 rng(19);
  const TriMesh bases[] = {flat_torus(4), flat_torus(5), genus2_surface(6, 1), hairy_torus(1, 3.0)};
  for (int trial = 0; trial < 12; ++trial) {
    auto m = jitter(bases[trial % 4], rng, trial % 4 == 3 ? 0.03 : 0.15);
    auto b = tree_cotree_basis(m);
    auto slow = product_graph_search(m, b);
    auto fast = shortest_loop_outside(m, b);
    REQUIRE(slow);
    REQUIRE(fast);
    CHECK(slow->length == doctest::Approx(fast->length).epsilon(1e-12));
    CHECK_FALSE(fast->cls.is_zero());
    CHECK(homology_class(m, b, fast->loop) == fast->cls);
    // Outside the span of the first answer.
    Z2Basis span(static_cast<std::size_t>(b.dim));
    span.insert(slow->cls);
    LoopConstraints c;
    c.span = &span;
    auto slow2 = product_graph_search(m, b, c);
    auto fast2 = shortest_loop_outside(m, b, c);
    REQUIRE(slow2);
    REQUIRE(fast2);
    CHECK(slow2->length == doctest::Approx(fast2->length).epsilon(1e-12));
    CHECK_FALSE(span.contains(fast2->cls));
    CHECK(fast2->length >= fast->length - 1e-12);
  }
}

TEST_CASE("blocked vertices restrict the search") {
  auto t = flat_torus(5);
  auto b = tree_cotree_basis(t);
  std::vector<char> blocked(static_cast<std::size_t>(t.vertex_count()), 0);
  for (int v : row_loop(t, 5, 0).vertices(t)) blocked[static_cast<std::size_t>(v)] = 1;
  LoopConstraints c;
  c.blocked_vertices = &blocked;
  auto r = product_graph_search(t, b, c);
  REQUIRE(r);
  CHECK(r->length == doctest::Approx(5));
  for (int v : r->loop.vertices(t)) CHECK_FALSE(blocked[static_cast<std::size_t>(v)]);
  auto f = shortest_loop_outside(t, b, c);
  REQUIRE(f);
  CHECK(f->length == doctest::Approx(5));
}
