#include "syskit/homology.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <tuple>

#include "syskit/error.hpp"
#include "syskit/geodesic.hpp"

namespace syskit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
std::size_t at(int i) { return static_cast<std::size_t>(i); }

bool accepted(const Z2Vector& cls, const LoopConstraints& c) {
  if (cls.is_zero()) return false;
  return c.span == nullptr || !c.span->contains(cls);
}

bool vertex_blocked(const LoopConstraints& c, int v) {
  return c.blocked_vertices && (*c.blocked_vertices)[at(v)];
}
bool edge_blocked(const LoopConstraints& c, int e) {
  return c.blocked_edges && (*c.blocked_edges)[at(e)];
}

}  // namespace

HomologyBasis tree_cotree_basis(const TriMesh& m) {
  if (!m.is_closed()) fail(ErrorCode::NotClosed, "tree-cotree needs a closed mesh");
  HomologyBasis b;
  const int E = m.edge_count();
  std::vector<char> in_tree(at(E), 0), in_cotree(at(E), 0);

  // Primal spanning forest by breadth-first search from the lowest vertex.
  std::vector<char> seen(at(m.vertex_count()), 0);
  for (int root = 0; root < m.vertex_count(); ++root) {
    if (seen[at(root)]) continue;
    seen[at(root)] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int id : m.vertex_edges(u)) {
        const int w = m.other_end(id, u);
        if (seen[at(w)]) continue;
        seen[at(w)] = 1;
        in_tree[at(id)] = 1;
        b.tree_edges.push_back(id);
        q.push(w);
      }
    }
  }

  // Dual spanning forest avoiding primal tree edges.
  std::vector<int> order;
  std::vector<int> parent_edge(at(m.face_count()), -1);
  std::vector<char> fseen(at(m.face_count()), 0);
  for (int root = 0; root < m.face_count(); ++root) {
    if (fseen[at(root)]) continue;
    fseen[at(root)] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int f = q.front();
      q.pop();
      order.push_back(f);
      for (int id : m.face(f).e) {
        if (in_tree[at(id)]) continue;
        const auto& ef = m.edge_faces(id);
        const int g = ef[0] == f ? ef[1] : ef[0];
        if (g < 0 || fseen[at(g)]) continue;
        fseen[at(g)] = 1;
        in_cotree[at(id)] = 1;
        parent_edge[at(g)] = id;
        b.cotree_edges.push_back(id);
        q.push(g);
      }
    }
  }
  for (int id = 0; id < E; ++id)
    if (!in_tree[at(id)] && !in_cotree[at(id)]) b.signature_edges.push_back(id);
  b.dim = static_cast<int>(b.signature_edges.size());
  b.edge_label.assign(at(E), Z2Vector(at(b.dim)));
  for (int i = 0; i < b.dim; ++i) b.edge_label[at(b.signature_edges[at(i)])].set(at(i), true);
  // Peel dual leaves: each face boundary must sum to zero.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int pe = parent_edge[at(*it)];
    if (pe < 0) continue;
    Z2Vector s(at(b.dim));
    for (int id : m.face(*it).e)
      if (id != pe) s ^= b.edge_label[at(id)];
    b.edge_label[at(pe)] = s;
  }
  return b;
}

Z2Vector homology_class(const TriMesh& m, const HomologyBasis& basis, const MeshLoop& loop) {
  check_loop(m, loop);
  Z2Vector c(at(basis.dim));
  for (int id : loop.edges) c ^= basis.edge_label[at(id)];
  return c;
}

MeshLoop signature_loop(const TriMesh& m, const HomologyBasis& basis, int i) {
  const int sig = basis.signature_edges.at(at(i));
  std::vector<char> blocked(at(m.edge_count()), 1);
  for (int id : basis.tree_edges) blocked[at(id)] = 0;
  SearchLimits lim;
  lim.blocked_edges = &blocked;
  const auto& e = m.edge(sig);
  const auto field = mesh_dijkstra(m, {e.v}, lim);
  MeshLoop loop;
  loop.start = e.v;
  loop.edges = trace_path(m, field, e.u);
  loop.edges.push_back(sig);
  for (int id : loop.edges) loop.length += m.edge(id).length;
  return reduce_loop(m, loop);
}

std::optional<LoopSearchResult> product_graph_search(const TriMesh& m, const HomologyBasis& basis,
                                                     const LoopConstraints& c) {
  if (basis.dim > 6) fail(ErrorCode::GenusTooLarge, "label space limited to 2g <= 6");
  const int L = 1 << basis.dim;
  const int V = m.vertex_count();
  std::vector<std::uint64_t> lab(at(m.edge_count()));
  for (int id = 0; id < m.edge_count(); ++id) lab[at(id)] = basis.edge_label[at(id)].key();
  std::vector<char> ok_label(at(L), 0);
  for (int k = 1; k < L; ++k)
    ok_label[at(k)] = accepted(Z2Vector::from_key(at(basis.dim), static_cast<std::uint64_t>(k)), c);

  double best = kInf;
  std::optional<LoopSearchResult> result;
  std::vector<double> dist(at(V) * at(L));
  std::vector<int> pred(at(V) * at(L));
  for (int s = 0; s < V; ++s) {
    if (vertex_blocked(c, s)) continue;
    // Loops whose lowest vertex is s: only vertices >= s are used.
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(pred.begin(), pred.end(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[at(s) * at(L)] = 0.0;
    pq.push({0.0, s * L});
    int hit = -1;
    while (!pq.empty()) {
      auto [d, state] = pq.top();
      pq.pop();
      if (d > dist[at(state)]) continue;
      if (d >= best) break;
      const int u = state / L, label = state % L;
      if (u == s && ok_label[at(label)]) {
        hit = state;
        best = d;
        break;
      }
      for (int id : m.vertex_edges(u)) {
        if (edge_blocked(c, id)) continue;
        const int w = m.other_end(id, u);
        if (w < s || vertex_blocked(c, w)) continue;
        const int next = w * L + static_cast<int>(static_cast<std::uint64_t>(label) ^ lab[at(id)]);
        const double nd = d + m.edge(id).length;
        if (nd < dist[at(next)]) {
          dist[at(next)] = nd;
          pred[at(next)] = id;
          pq.push({nd, next});
        }
      }
    }
    if (hit < 0) continue;
    MeshLoop loop;
    loop.start = s;
    for (int state = hit; pred[at(state)] >= 0;) {
      const int id = pred[at(state)];
      loop.edges.push_back(id);
      const int u = state / L, label = state % L;
      const int prev_v = m.other_end(id, u);
      state = prev_v * L + static_cast<int>(static_cast<std::uint64_t>(label) ^ lab[at(id)]);
    }
    std::reverse(loop.edges.begin(), loop.edges.end());
    loop.length = best;
    result = LoopSearchResult{best, loop, homology_class(m, basis, loop)};
  }
  return result;
}

std::optional<LoopSearchResult> shortest_loop_outside(const TriMesh& m, const HomologyBasis& basis,
                                                      const LoopConstraints& c) {
  const int V = m.vertex_count();
  double best = kInf;
  std::optional<LoopSearchResult> result;
  SearchLimits lim;
  lim.blocked_vertices = c.blocked_vertices;
  lim.blocked_edges = c.blocked_edges;
  for (int s = 0; s < V; ++s) {
    if (vertex_blocked(c, s)) continue;
    lim.max_distance = best / 2;
    const auto field = mesh_dijkstra(m, {s}, lim);
    // Labels along the shortest-path tree, in order of distance.
    std::vector<int> reached;
    for (int v = 0; v < V; ++v)
      if (field.owner[at(v)] >= 0) reached.push_back(v);
    std::sort(reached.begin(), reached.end(), [&](int a, int b) {
      return std::tie(field.dist[at(a)], a) < std::tie(field.dist[at(b)], b);
    });
    std::vector<Z2Vector> lab(at(V));
    for (int v : reached) {
      const int pe = field.pred_edge[at(v)];
      lab[at(v)] = pe < 0 ? Z2Vector(at(basis.dim)) : lab[at(m.other_end(pe, v))] ^ basis.edge_label[at(pe)];
    }
    for (int id = 0; id < m.edge_count(); ++id) {
      if (edge_blocked(c, id)) continue;
      const auto& e = m.edge(id);
      if (field.owner[at(e.u)] < 0 || field.owner[at(e.v)] < 0) continue;
      if (field.pred_edge[at(e.u)] == id || field.pred_edge[at(e.v)] == id) continue;
      const double len = field.dist[at(e.u)] + e.length + field.dist[at(e.v)];
      if (!(len < best)) continue;
      const Z2Vector cls = lab[at(e.u)] ^ basis.edge_label[at(id)] ^ lab[at(e.v)];
      if (!accepted(cls, c)) continue;
      MeshLoop loop;
      loop.start = s;
      loop.edges = trace_path(m, field, e.u);
      loop.edges.push_back(id);
      auto back = trace_path(m, field, e.v);
      loop.edges.insert(loop.edges.end(), back.rbegin(), back.rend());
      loop.length = 0.0;
      for (int k : loop.edges) loop.length += m.edge(k).length;
      loop = reduce_loop(m, loop);
      best = len;
      result = LoopSearchResult{loop.length, loop, cls};
    }
  }
  return result;
}

LoopSearchResult shortest_nontrivial_loop_oracle(const TriMesh& m) {
  const auto basis = tree_cotree_basis(m);
  if (basis.dim == 0) fail(ErrorCode::NoNontrivialClass, "surface has no nontrivial homology class");
  if (basis.dim > 6) fail(ErrorCode::GenusTooLarge, "oracle limited to 2g <= 6");
  auto r = product_graph_search(m, basis);
  if (!r) fail(ErrorCode::Internal, "oracle found no loop");
  return *r;
}

}  // namespace syskit
