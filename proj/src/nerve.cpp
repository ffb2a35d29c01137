#include "syskit/nerve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "syskit/dsu.hpp"
#include "syskit/error.hpp"
#include "syskit/geodesic.hpp"
#include "syskit/surgery.hpp"

namespace syskit {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

Z2Vector path_class(const HomologyBasis& b, const std::vector<int>& path) {
  Z2Vector c(at(b.dim));
  for (int id : path) c ^= b.edge_label[at(id)];
  return c;
}

// Length factor that rescales area to 4 pi (g - 1), or to 1 on a torus.
double normalization(int genus, double area) {
  const double target = genus >= 2 ? 4 * std::numbers::pi * (genus - 1) : 1.0;
  return std::sqrt(target / area);
}

// Mesh loop along a closed walk of nerve edges.
MeshLoop project(const NerveGraph& n, const TriMesh& m, const GraphCycle& c) {
  MeshLoop loop;
  loop.start = n.centers[at(c.start)];
  int at_v = c.start;
  for (int id : c.edges) {
    const auto& e = n.graph.edge(id);
    const auto& p = n.paths[at(id)];
    if (e.u == at_v) {
      loop.edges.insert(loop.edges.end(), p.begin(), p.end());
      at_v = e.v;
    } else {
      loop.edges.insert(loop.edges.end(), p.rbegin(), p.rend());
      at_v = e.u;
    }
  }
  for (int id : loop.edges) loop.length += m.edge(id).length;
  return reduce_loop(m, loop);
}

}  // namespace

NerveGraph build_nerve(const TriMesh& m, double ell, double eps, const NerveOptions& opt) {
  if (!(ell > 0.0) || !(eps > 0.0)) fail(ErrorCode::BadParams, "ell and eps must be positive");
  NerveGraph n;
  n.ell = ell;
  n.eps = eps;
  n.r0 = ell / 16;
  const double reach = 4 * n.r0 + 2 * eps;
  if (!(reach < ell / 2))
    fail(ErrorCode::EpsilonTooLarge, "need 4 r0 + 2 eps < ell / 2, i.e. eps < ell / 8");
  const auto reg = disk_regularity_check(m, n.r0);
  n.regular = reg.pass();
  n.irregular_vertices = static_cast<int>(reg.failures.size());
  if (!n.regular && !opt.allow_irregular)
    fail(ErrorCode::IrregularMetric, std::to_string(reg.failures.size()) +
                                         " vertices fail the disk-area check at r0");
  n.centers = maximal_disk_packing(m, n.r0);
  n.graph = WeightedGraph(static_cast<int>(n.centers.size()));
  std::vector<int> index(at(m.vertex_count()), -1);
  for (std::size_t i = 0; i < n.centers.size(); ++i) index[at(n.centers[i])] = static_cast<int>(i);
  SearchLimits lim;
  lim.max_distance = reach;
  for (std::size_t i = 0; i < n.centers.size(); ++i) {
    const auto field = mesh_dijkstra(m, {n.centers[i]}, lim);
    for (std::size_t j = i + 1; j < n.centers.size(); ++j) {
      const int c = n.centers[j];
      if (!(field.dist[at(c)] <= reach)) continue;
      n.graph.add_edge(static_cast<int>(i), static_cast<int>(j), ell / 2);
      n.paths.push_back(trace_path(m, field, c));
      n.path_length.push_back(field.dist[at(c)]);
    }
  }
  return n;
}

MinimizedNerve minimize_to_homology_iso(const NerveGraph& n, const TriMesh&, const HomologyBasis& basis) {
  MinimizedNerve out;
  const WeightedGraph& g = n.graph;
  DisjointSets dsu(at(g.vertex_count()));
  std::vector<char> in_forest(at(g.edge_count()), 0);
  for (int id = 0; id < g.edge_count(); ++id)
    if (dsu.unite(at(g.edge(id).u), at(g.edge(id).v))) {
      in_forest[at(id)] = 1;
      out.forest_edges.push_back(id);
    }
  // Forest adjacency for fundamental cycles.
  WeightedGraph forest(g.vertex_count());
  std::vector<int> forest_id;
  for (int id : out.forest_edges) {
    forest.add_edge(g.edge(id).u, g.edge(id).v, n.path_length[at(id)] > 0 ? n.path_length[at(id)] : 1.0);
    forest_id.push_back(id);
  }
  struct Chord {
    int id;
    double length;
    Z2Vector cls;
  };
  std::vector<Chord> chords;
  std::vector<Z2Vector> edge_cls(at(g.edge_count()));
  for (int id = 0; id < g.edge_count(); ++id) edge_cls[at(id)] = path_class(basis, n.paths[at(id)]);
  for (int id = 0; id < g.edge_count(); ++id) {
    if (in_forest[at(id)]) continue;
    const auto& e = g.edge(id);
    const auto sp = dijkstra(forest, e.v);
    Z2Vector cls = edge_cls[at(id)];
    double len = n.path_length[at(id)];
    for (int v = e.u; v != e.v;) {
      const int fe = sp.pred_edge[at(v)];
      const int nid = forest_id[at(fe)];
      cls ^= edge_cls[at(nid)];
      len += n.path_length[at(nid)];
      v = forest.edge(fe).u == v ? forest.edge(fe).v : forest.edge(fe).u;
    }
    chords.push_back({id, len, cls});
  }
  std::stable_sort(chords.begin(), chords.end(), [](const Chord& a, const Chord& b) {
    return a.length < b.length || (a.length == b.length && a.id < b.id);
  });
  Z2Basis span(at(basis.dim));
  for (const auto& c : chords) {
    if (span.insert(c.cls)) {
      out.chords.push_back(c.id);
      out.chord_classes.push_back(c.cls);
    } else {
      out.rejected_chords++;
    }
  }
  if (static_cast<int>(span.rank()) < basis.dim)
    fail(ErrorCode::NotEpimorphic, "nerve cycles span rank " + std::to_string(span.rank()) + " of " +
                                       std::to_string(basis.dim) + "; cover too coarse");
  out.kept_edges = out.forest_edges;
  out.kept_edges.insert(out.kept_edges.end(), out.chords.begin(), out.chords.end());
  std::sort(out.kept_edges.begin(), out.kept_edges.end());
  out.gamma1 = WeightedGraph(g.vertex_count());
  for (int id : out.kept_edges) out.gamma1.add_edge(g.edge(id).u, g.edge(id).v, g.edge(id).length);
  return out;
}

ShortLoopsReport short_homology_loops(const TriMesh& m, double ell, int count, const ShortLoopsOptions& opt) {
  ShortLoopsReport r;
  const auto basis = tree_cotree_basis(m);
  r.genus = basis.dim / 2;
  r.area = m.area();
  r.ell = ell;
  r.eps = opt.eps.value_or(ell / 64);
  NerveOptions nopt;
  nopt.allow_irregular = opt.allow_irregular;
  const NerveGraph n = build_nerve(m, ell, r.eps, nopt);
  r.r0 = n.r0;
  r.regular = n.regular;
  r.centers = static_cast<int>(n.centers.size());
  r.nerve_edges = n.graph.edge_count();
  r.nerve_betti = n.graph.betti_number();
  const auto mini = minimize_to_homology_iso(n, m, basis);
  r.gamma1_betti = mini.gamma1.betti_number();
  if (count < 1) fail(ErrorCode::BadParams, "count must be at least 1");
  if (count > r.gamma1_betti)
    fail(ErrorCode::Forest, "count " + std::to_string(count) + " exceeds the Betti number " +
                                std::to_string(r.gamma1_betti) + " of the minimized nerve");
  const auto steps = greedy_systolic_sequence(mini.gamma1, count, opt.log_base);
  for (const auto& s : steps) {
    GraphCycle c = s.cycle;
    for (int& id : c.edges) id = mini.kept_edges[at(id)];
    auto loop = project(n, m, c);
    r.classes.push_back(homology_class(m, basis, loop));
    r.graph_lengths.push_back(s.cycle.length);
    r.loops.push_back(std::move(loop));
  }
  r.rank = static_cast<int>(rank_z2(r.classes));
  if (r.rank != count) fail(ErrorCode::RankDeficit, "projected loops lost independence");
  r.scale = normalization(r.genus, r.area);
  r.c0 = opt.c0_numerator / std::min(1.0, ell * r.scale);
  const int g2 = 2 * r.genus;
  for (int k = 1; k <= count; ++k) {
    BoundRow row;
    row.k = k;
    row.length = r.loops[at(k - 1)].length;
    row.normalized_length = row.length * r.scale;
    const double lg = opt.log_base == LogBase::Natural ? std::log(g2 - k + 2.0) : std::log2(g2 - k + 2.0);
    row.bound = r.c0 * lg / (g2 - k + 1.0) * r.genus;
    row.pass = row.normalized_length <= row.bound;
    r.bounds.push_back(row);
  }
  if (basis.dim <= 6 && basis.dim > 0) {
    auto o = product_graph_search(m, basis);
    if (o) r.oracle_length = o->length;
  }
  return r;
}

IndependentSystemReport short_independent_system(const TriMesh& m, int target, double eps_cut,
                                                 const IndependentSystemOptions& opt) {
  IndependentSystemReport r;
  const auto basis = tree_cotree_basis(m);
  r.genus = basis.dim / 2;
  r.target = target;
  r.eps_cut = eps_cut;
  if (target < 1) fail(ErrorCode::BadParams, "target must be at least 1");
  if (target > basis.dim)
    fail(ErrorCode::TargetUnreachable, "target exceeds 2g = " + std::to_string(basis.dim));
  Z2Basis span(at(basis.dim));
  auto accept = [&](MeshLoop loop, const char* phase) {
    const Z2Vector cls = homology_class(m, basis, loop);
    if (!span.insert(cls)) return false;
    r.loops.push_back(std::move(loop));
    r.classes.push_back(cls);
    r.phase.push_back(phase);
    return true;
  };
  // Phase 1: short loops on the running cut-and-capped surface.
  DerivedMesh cur{m, {}, {}, {}};
  cur.vertex_origin.resize(at(m.vertex_count()));
  std::iota(cur.vertex_origin.begin(), cur.vertex_origin.end(), 0);
  cur.edge_origin.resize(at(m.edge_count()));
  std::iota(cur.edge_origin.begin(), cur.edge_origin.end(), 0);
  while (static_cast<int>(span.rank()) < target) {
    const auto b = tree_cotree_basis(cur.mesh);
    if (b.dim == 0) break;
    std::vector<char> blocked(at(cur.mesh.vertex_count()), 0);
    for (int v = 0; v < cur.mesh.vertex_count(); ++v)
      if (cur.vertex_origin[at(v)] < 0) blocked[at(v)] = 1;
    LoopConstraints c;
    c.blocked_vertices = &blocked;
    auto found = shortest_loop_outside(cur.mesh, b, c);
    if (!found || !(found->length < eps_cut)) break;
    MeshLoop base = reduce_loop(m, pull_back(cur, found->loop));
    if (!accept(base, "cut")) break;
    auto next = cut_and_cap(cur.mesh, found->loop.edges, false);
    auto centers = next.cap_centers;
    cur = compose(cur, std::move(next));
    cur.cap_centers = std::move(centers);
  }
  // Phase 2: shortest loops outside the span on the original surface.
  while (static_cast<int>(span.rank()) < target) {
    LoopConstraints c;
    c.span = &span;
    auto found = shortest_loop_outside(m, basis, c);
    if (!found) break;
    accept(found->loop, "span");
  }
  r.rank = static_cast<int>(span.rank());
  if (r.rank < target)
    fail(ErrorCode::TargetUnreachable, "rank saturated at " + std::to_string(r.rank));
  r.lambda = static_cast<double>(target) / r.genus;
  r.bound_applicable = r.lambda < 1.0;
  if (r.bound_applicable) {
    r.c_lambda = opt.c_lambda_numerator / (1.0 - r.lambda);
    r.bound = r.c_lambda * std::log(r.genus + 1.0) / std::sqrt(static_cast<double>(r.genus)) * std::sqrt(m.area());
  }
  for (const auto& l : r.loops) r.pass.push_back(!r.bound_applicable || l.length <= r.bound);
  return r;
}

std::vector<double> minimal_basis_lengths(const TriMesh& m, const std::vector<char>* blocked) {
  const auto basis = tree_cotree_basis(m);
  Z2Basis span(at(basis.dim));
  std::vector<double> out;
  while (static_cast<int>(span.rank()) < basis.dim) {
    LoopConstraints c;
    c.span = &span;
    c.blocked_vertices = blocked;
    auto found = shortest_loop_outside(m, basis, c);
    if (!found) break;
    span.insert(found->cls);
    out.push_back(found->length);
  }
  return out;
}

CutAvoidanceReport cut_avoidance_check(const TriMesh& m, const MeshLoop& alpha) {
  check_loop(m, alpha);
  CutAvoidanceReport r;
  auto vs = alpha.vertices(m);
  vs.pop_back();
  // Convexity: each arc between two points of alpha is a shortest path.
  std::vector<double> along(vs.size() + 1, 0.0);
  for (std::size_t i = 0; i < alpha.edges.size(); ++i) along[i + 1] = along[i] + m.edge(alpha.edges[i]).length;
  const double total = along.back();
  double gap = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto field = mesh_dijkstra(m, {vs[i]});
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      const double arc = std::min(along[j] - along[i], total - (along[j] - along[i]));
      gap = std::max(gap, arc - field.dist[at(vs[j])]);
    }
  }
  r.convexity_gap = gap;
  r.convex = gap <= 1e-9 * std::max(1.0, total);
  std::vector<char> blocked(at(m.vertex_count()), 0);
  for (int v : vs) blocked[at(v)] = 1;
  r.free_lengths = minimal_basis_lengths(m);
  r.avoiding_lengths = minimal_basis_lengths(m, &blocked);
  r.equal = r.free_lengths.size() == r.avoiding_lengths.size();
  for (std::size_t k = 0; r.equal && k < r.free_lengths.size(); ++k)
    r.equal = std::abs(r.free_lengths[k] - r.avoiding_lengths[k]) <= 1e-9 * std::max(1.0, r.free_lengths[k]);
  return r;
}

}  // namespace syskit
