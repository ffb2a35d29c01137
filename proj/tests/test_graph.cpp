#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "syskit/dsu.hpp"
#include "syskit/error.hpp"
#include "syskit/graph.hpp"

using namespace syskit;

namespace {

WeightedGraph triangle() {
  WeightedGraph g(3);
  g.add_edge(0, 1, 1);
  g.add_edge(1, 2, 1);
  g.add_edge(2, 0, 1);
  return g;
}

WeightedGraph k4() {
  WeightedGraph g(4);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) g.add_edge(a, b, 1);
  return g;
}

// Shortest simple cycle by enumerating edge subsets where every vertex has
// degree 0 or 2 and the used edges form one component.
double brute_systole(const WeightedGraph& g) {
  const int m = g.edge_count();
  double best = INFINITY;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> deg(static_cast<std::size_t>(g.vertex_count()), 0);
    DisjointSets dsu(static_cast<std::size_t>(g.vertex_count()));
    double len = 0;
    int used = 0;
    for (int i = 0; i < m; ++i) {
      if (!(mask >> i & 1u)) continue;
      const auto& e = g.edge(i);
      deg[static_cast<std::size_t>(e.u)]++;
      deg[static_cast<std::size_t>(e.v)]++;
      dsu.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v));
      len += e.length;
      ++used;
    }
    bool ok = true;
    std::size_t root = SIZE_MAX;
    for (int v = 0; v < g.vertex_count() && ok; ++v) {
      const int d = deg[static_cast<std::size_t>(v)];
      if (d == 0) continue;
      if (d != 2) ok = false;
      const std::size_t r = dsu.find(static_cast<std::size_t>(v));
      if (root == SIZE_MAX) root = r; else if (r != root) ok = false;
    }
    (void)used;
    if (ok) best = std::min(best, len);
  }
  return best;
}

double brute_mst(const WeightedGraph& g) {
  const int m = g.edge_count();
  double best = INFINITY;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) != g.vertex_count() - 1) continue;
    DisjointSets dsu(static_cast<std::size_t>(g.vertex_count()));
    bool acyclic = true;
    double len = 0;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1u) {
        acyclic &= dsu.unite(static_cast<std::size_t>(g.edge(i).u), static_cast<std::size_t>(g.edge(i).v));
        len += g.edge(i).length;
      }
    if (acyclic) best = std::min(best, len);
  }
  return best;
}

WeightedGraph random_connected(std::mt19937_64& rng, int max_v, int max_extra) {
  std::uniform_int_distribution<int> nv(1, max_v);
  std::uniform_real_distribution<double> len(0.1, 10.0);
  const int v = nv(rng);
  WeightedGraph g(v);
  for (int i = 1; i < v; ++i) g.add_edge(std::uniform_int_distribution<int>(0, i - 1)(rng), i, len(rng));
  const int extra = std::uniform_int_distribution<int>(1, max_extra)(rng);
  std::uniform_int_distribution<int> pick(0, v - 1);
  for (int i = 0; i < extra; ++i) g.add_edge(pick(rng), pick(rng), len(rng));
  return g;
}

}  // namespace

TEST_CASE("betti numbers") {
  CHECK(triangle().betti_number() == 1);
  WeightedGraph two(6);
  for (int base : {0, 3}) {
    two.add_edge(base, base + 1, 1);
    two.add_edge(base + 1, base + 2, 1);
    two.add_edge(base + 2, base, 1);
  }
  CHECK(two.betti_number() == 2);
  CHECK(k4().betti_number() == 3);
}

TEST_CASE("systole of small graphs") {
  auto t = graph_systole(triangle());
  CHECK(t.length == doctest::Approx(3));
  CHECK(t.cycle.edges.size() == 3);

  WeightedGraph theta(2);
  theta.add_edge(0, 1, 1);
  theta.add_edge(0, 1, 2);
  theta.add_edge(0, 1, 3);
  auto s = graph_systole(theta);
  CHECK(s.length == doctest::Approx(3));
  auto ids = s.cycle.edges;
  std::sort(ids.begin(), ids.end());
  CHECK(ids == std::vector<int>{0, 1});

  auto q = graph_systole(k4());
  CHECK(q.length == doctest::Approx(3));
  CHECK(q.cycle.edges.front() == 0);

  WeightedGraph tree(3);
  tree.add_edge(0, 1, 1);
  tree.add_edge(1, 2, 1);
  CHECK_THROWS_AS(graph_systole(tree), Error);
}

TEST_CASE("returned cycle is a closed simple walk") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_connected(rng, 8, 5);
    auto s = graph_systole(g);
    auto vs = s.cycle.vertices(g);
    CHECK(vs.front() == vs.back());
    std::vector<int> inner(vs.begin(), vs.end() - 1);
    std::sort(inner.begin(), inner.end());
    CHECK(std::adjacent_find(inner.begin(), inner.end()) == inner.end());
    double sum = 0;
    for (int id : s.cycle.edges) sum += g.edge(id).length;
    CHECK(sum == doctest::Approx(s.length));
  }
}

TEST_CASE("systole matches exhaustive cycle enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = random_connected(rng, 7, 6);
    if (g.edge_count() > 14) continue;
    CHECK(graph_systole(g).length == doctest::Approx(brute_systole(g)).epsilon(1e-12));
  }
}

TEST_CASE("bst bound values") {
  CHECK(bst_bound(k4()) == doctest::Approx(11.090354888959125).epsilon(1e-14));
  CHECK(bst_bound(triangle()) == doctest::Approx(8.317766166719344).epsilon(1e-14));
  CHECK(bst_bound_value(1, 1.0) == doctest::Approx(4 * std::log(2.0)));
  CHECK(bst_bound_value(3, 6.0, LogBase::Two) == doctest::Approx(16.0));
}

TEST_CASE("greedy sequence") {
  WeightedGraph pendant(3);
  pendant.add_edge(0, 1, 1);
  pendant.add_edge(0, 1, 1);
  pendant.add_edge(1, 2, 1);
  auto p = greedy_systolic_sequence(pendant, 1);
  REQUIRE(p.size() == 1);
  CHECK(p[0].cycle.length == doctest::Approx(2));
  CHECK(p[0].removed_edge == 0);

  WeightedGraph triple(2);
  for (int i = 0; i < 3; ++i) triple.add_edge(0, 1, 1);
  auto t = greedy_systolic_sequence(triple, 2);
  CHECK(t[0].cycle.length == doctest::Approx(2));
  CHECK(t[1].cycle.length == doctest::Approx(2));

  auto k = greedy_systolic_sequence(k4(), 3);
  CHECK(k[0].cycle.length == doctest::Approx(3));
  CHECK(k[1].cycle.length == doctest::Approx(3));
  // Removing the longest, lowest-id edge leaves a triangle at every step.
  CHECK(k[2].cycle.length == doctest::Approx(3));
  CHECK_THROWS_AS(greedy_systolic_sequence(k4(), 4), Error);
}

TEST_CASE("k4 greedy outcomes over all removal choices") {
  // Exhaustive over which systolic cycle edge is removed at each step.
  std::set<std::vector<int>> outcomes;
  std::function<void(const WeightedGraph&, std::vector<int>)> rec = [&](const WeightedGraph& g,
                                                                        std::vector<int> lens) {
    if (g.betti_number() == 0) {
      outcomes.insert(lens);
      return;
    }
    const double sys = brute_systole(g);
    const int m = g.edge_count();
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      double len = 0;
      std::vector<int> ids;
      for (int i = 0; i < m; ++i)
        if (mask >> i & 1u) { len += g.edge(i).length; ids.push_back(i); }
      if (len != sys || static_cast<int>(ids.size()) != static_cast<int>(len)) continue;
      WeightedGraph sub(g.vertex_count());
      for (int i : ids) sub.add_edge(g.edge(i).u, g.edge(i).v, 1);
      if (brute_systole(sub) != sys || sub.betti_number() != 1) continue;
      auto next = lens;
      next.push_back(static_cast<int>(sys));
      for (int drop : ids) rec(g.without_edges({drop}), next);
    }
  };
  rec(k4(), {});
  CHECK(outcomes == std::set<std::vector<int>>{{3, 3, 3}, {3, 3, 4}});
}

TEST_CASE("greedy sequence properties on random graphs") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_connected(rng, 12, 10);
    const int b = g.betti_number();
    auto steps = greedy_systolic_sequence(g, b);
    std::vector<Z2Vector> vecs;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      CHECK(steps[k].betti_before == b - static_cast<int>(k));
      CHECK(steps[k].cycle.length <= steps[k].step_bound);
      if (k) CHECK(steps[k].cycle.length >= steps[k - 1].cycle.length);
      vecs.push_back(steps[k].cycle.edge_vector(g));
    }
    CHECK(rank_z2(vecs) == static_cast<std::size_t>(b));
  }
}

TEST_CASE("minimum spanning tree") {
  CHECK(minimum_spanning_tree(triangle()) == std::vector<int>{0, 1});
  WeightedGraph theta(2);
  theta.add_edge(0, 1, 1);
  theta.add_edge(0, 1, 2);
  CHECK(minimum_spanning_tree(theta) == std::vector<int>{0});
  WeightedGraph split(4);
  split.add_edge(0, 1, 1);
  CHECK_THROWS_AS(minimum_spanning_tree(split), Error);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_connected(rng, 6, 3);
    if (g.edge_count() > 8) continue;
    double len = 0;
    for (int id : minimum_spanning_tree(g)) len += g.edge(id).length;
    CHECK(len == doctest::Approx(brute_mst(g)).epsilon(1e-12));
  }
}

TEST_CASE("wgraph round trip keeps decimal text") {
  std::istringstream in("WGRAPH 3 3\n0 1 0.1\n1 2 1e-3\n2 0 2.50\n");
  auto g = read_wgraph(in);
  std::ostringstream out;
  write_wgraph(g, out);
  CHECK(out.str() == "WGRAPH 3 3\n0 1 0.1\n1 2 1e-3\n2 0 2.50\n");
  std::istringstream bad("WGRAPH 2 1\n0 1 abc\n");
  CHECK_THROWS_AS(read_wgraph(bad), Error);
  std::istringstream neg("WGRAPH 2 1\n0 1 -1\n");
  CHECK_THROWS_AS(read_wgraph(neg), Error);
}
