#include "syskit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "syskit/dsu.hpp"
#include "syskit/error.hpp"

namespace syskit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double log_of(double x, LogBase base) {
  return base == LogBase::Natural ? std::log(x) : std::log2(x);
}
}  // namespace

std::string format_double(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

int WeightedGraph::add_edge(int u, int v, double length, std::string length_text) {
  if (u < 0 || v < 0 || u >= vertex_count_ || v >= vertex_count_)
    fail(ErrorCode::BadParams, "edge endpoint out of range");
  if (!(length > 0.0) || !std::isfinite(length))
    fail(ErrorCode::NonpositiveLength, "edge length must be positive and finite");
  edges_.push_back({u, v, length, std::move(length_text)});
  return static_cast<int>(edges_.size()) - 1;
}

double WeightedGraph::total_length() const {
  double s = 0.0;
  for (const auto& e : edges_) s += e.length;
  return s;
}

int WeightedGraph::component_count() const {
  DisjointSets dsu(static_cast<std::size_t>(vertex_count_));
  int c = vertex_count_;
  for (const auto& e : edges_)
    if (dsu.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v))) --c;
  return c;
}

int WeightedGraph::betti_number() const {
  return edge_count() - vertex_count_ + component_count();
}

WeightedGraph WeightedGraph::without_edges(const std::vector<int>& removed,
                                           std::vector<int>* kept) const {
  std::vector<char> drop(edges_.size(), 0);
  for (int id : removed) drop[static_cast<std::size_t>(id)] = 1;
  WeightedGraph out(vertex_count_);
  if (kept) kept->clear();
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (drop[i]) continue;
    out.edges_.push_back(edges_[i]);
    if (kept) kept->push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> GraphCycle::vertices(const WeightedGraph& g) const {
  std::vector<int> out{start};
  int at = start;
  for (int id : edges) {
    const auto& e = g.edge(id);
    at = (e.u == at) ? e.v : e.u;
    out.push_back(at);
  }
  return out;
}

Z2Vector GraphCycle::edge_vector(const WeightedGraph& g) const {
  Z2Vector v(static_cast<std::size_t>(g.edge_count()));
  for (int id : edges) v.flip(static_cast<std::size_t>(id));
  return v;
}

ShortestPaths dijkstra(const WeightedGraph& g, int source, int skip_edge) {
  const auto n = static_cast<std::size_t>(g.vertex_count());
  std::vector<std::vector<int>> adj(n);
  for (int id = 0; id < g.edge_count(); ++id) {
    if (id == skip_edge) continue;
    const auto& e = g.edge(id);
    adj[static_cast<std::size_t>(e.u)].push_back(id);
    if (e.v != e.u) adj[static_cast<std::size_t>(e.v)].push_back(id);
  }
  ShortestPaths sp{std::vector<double>(n, kInf), std::vector<int>(n, -1)};
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  sp.dist[static_cast<std::size_t>(source)] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > sp.dist[static_cast<std::size_t>(u)]) continue;
    for (int id : adj[static_cast<std::size_t>(u)]) {
      const auto& e = g.edge(id);
      const int w = (e.u == u) ? e.v : e.u;
      const double nd = d + e.length;
      if (nd < sp.dist[static_cast<std::size_t>(w)]) {
        sp.dist[static_cast<std::size_t>(w)] = nd;
        sp.pred_edge[static_cast<std::size_t>(w)] = id;
        pq.push({nd, w});
      }
    }
  }
  return sp;
}

SystoleResult graph_systole(const WeightedGraph& g) {
  if (g.betti_number() < 1) fail(ErrorCode::Forest, "graph has no cycle");
  SystoleResult best{kInf, {}};
  int best_edge = -1;
  for (int id = 0; id < g.edge_count(); ++id) {
    const auto& e = g.edge(id);
    if (e.u == e.v) {
      if (e.length < best.length) {
        best.length = e.length;
        best.cycle = {e.u, {id}, e.length};
        best_edge = id;
      }
      continue;
    }
    // Lower bound: the cycle is at least the edge itself.
    if (e.length >= best.length) continue;
    const ShortestPaths sp = dijkstra(g, e.v, id);
    const double d = sp.dist[static_cast<std::size_t>(e.u)];
    if (d + e.length < best.length) {
      // Cycle: u --e--> v, then the path back from v to u.
      std::vector<int> back;
      for (int at = e.u; at != e.v;) {
        const int pe = sp.pred_edge[static_cast<std::size_t>(at)];
        back.push_back(pe);
        const auto& pedge = g.edge(pe);
        at = (pedge.u == at) ? pedge.v : pedge.u;
      }
      // `back` lists edges from u toward v; the walk v -> u reverses it.
      std::vector<int> walk{id};
      walk.insert(walk.end(), back.rbegin(), back.rend());
      best.length = d + e.length;
      best.cycle = {e.u, std::move(walk), d + e.length};
      best_edge = id;
    }
  }
  (void)best_edge;
  return best;
}

double bst_bound_value(int betti, double total_length, LogBase base) {
  if (betti < 1) fail(ErrorCode::Forest, "graph has no cycle");
  return 4.0 * log_of(1.0 + betti, base) / betti * total_length;
}

double bst_bound(const WeightedGraph& g, LogBase base) {
  return bst_bound_value(g.betti_number(), g.total_length(), base);
}

std::vector<GreedyStep> greedy_systolic_sequence(const WeightedGraph& g, int count,
                                                 LogBase base) {
  const int b = g.betti_number();
  if (count < 1) fail(ErrorCode::BadParams, "count must be at least 1");
  if (count > b) fail(ErrorCode::Forest, "count exceeds the Betti number");
  std::vector<GreedyStep> steps;
  WeightedGraph current = g;
  std::vector<int> to_original(static_cast<std::size_t>(g.edge_count()));
  std::iota(to_original.begin(), to_original.end(), 0);
  for (int k = 0; k < count; ++k) {
    GreedyStep step;
    step.betti_before = current.betti_number();
    step.graph_length_before = current.total_length();
    step.step_bound = bst_bound_value(step.betti_before, step.graph_length_before, base);
    SystoleResult sys = graph_systole(current);
    int drop = -1;
    for (int id : sys.cycle.edges) {
      const double len = current.edge(id).length;
      if (drop < 0 || len > current.edge(drop).length ||
          (len == current.edge(drop).length && to_original[static_cast<std::size_t>(id)] <
                                                   to_original[static_cast<std::size_t>(drop)]))
        drop = id;
    }
    step.cycle = sys.cycle;
    for (int& id : step.cycle.edges) id = to_original[static_cast<std::size_t>(id)];
    step.removed_edge = to_original[static_cast<std::size_t>(drop)];
    steps.push_back(std::move(step));
    std::vector<int> kept;
    current = current.without_edges({drop}, &kept);
    std::vector<int> remap(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i)
      remap[i] = to_original[static_cast<std::size_t>(kept[i])];
    to_original = std::move(remap);
  }
  return steps;
}

std::vector<int> minimum_spanning_tree(const WeightedGraph& g) {
  std::vector<int> order(static_cast<std::size_t>(g.edge_count()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return g.edge(a).length < g.edge(b).length;
  });
  DisjointSets dsu(static_cast<std::size_t>(g.vertex_count()));
  std::vector<int> tree;
  for (int id : order) {
    const auto& e = g.edge(id);
    if (dsu.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v))) tree.push_back(id);
  }
  if (static_cast<int>(tree.size()) != g.vertex_count() - 1 && g.vertex_count() > 0)
    fail(ErrorCode::Disconnected, "graph is not connected");
  std::sort(tree.begin(), tree.end());
  return tree;
}

WeightedGraph read_wgraph(std::istream& in) {
  std::string tag;
  long long v = -1, e = -1;
  if (!(in >> tag >> v >> e) || tag != "WGRAPH" || v < 0 || e < 0)
    fail(ErrorCode::Parse, "expected header 'WGRAPH v e'");
  WeightedGraph g(static_cast<int>(v));
  for (long long i = 0; i < e; ++i) {
    long long a = -1, b = -1;
    std::string len_text;
    if (!(in >> a >> b >> len_text)) fail(ErrorCode::Parse, "truncated edge list");
    if (a < 0 || b < 0 || a >= v || b >= v) fail(ErrorCode::Parse, "edge endpoint out of range");
    std::size_t used = 0;
    double len = 0.0;
    try {
      len = std::stod(len_text, &used);
    } catch (const std::exception&) {
      fail(ErrorCode::Parse, "bad edge length '" + len_text + "'");
    }
    if (used != len_text.size()) fail(ErrorCode::Parse, "bad edge length '" + len_text + "'");
    g.add_edge(static_cast<int>(a), static_cast<int>(b), len, len_text);
  }
  return g;
}

void write_wgraph(const WeightedGraph& g, std::ostream& out) {
  out << "WGRAPH " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges())
    out << e.u << ' ' << e.v << ' '
        << (e.length_text.empty() ? format_double(e.length) : e.length_text) << '\n';
}

WeightedGraph load_wgraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Parse, "cannot open " + path);
  return read_wgraph(in);
}

void save_wgraph(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  write_wgraph(g, out);
}

}  // namespace syskit
