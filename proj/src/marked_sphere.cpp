#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numbers>
#include <optional>

#include "syskit/error.hpp"
#include "syskit/geodesic.hpp"
#include "syskit/graph.hpp"
#include "syskit/pants.hpp"

namespace syskit {
namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

int block_height(int size) { return size <= 1 ? 0 : 1 + block_height((size + 1) / 2); }

struct Block {
  int lo = 0;
  int hi = 0;
  MeshLoop loop;  // on the input sphere
  bool has_loop = false;
};

bool face_in(const TriMesh& m, const std::vector<char>& set, int f) {
  const auto& F = m.face(f);
  return set[at(F.v[0])] && set[at(F.v[1])] && set[at(F.v[2])];
}

// Hop distance from `sources` up to `reach`, -1 beyond.
std::vector<int> hops(const TriMesh& m, const std::vector<int>& sources, int reach) {
  std::vector<int> hop(at(m.vertex_count()), -1);
  std::deque<int> queue;
  for (int v : sources)
    if (hop[at(v)] < 0) {
      hop[at(v)] = 0;
      queue.push_back(v);
    }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (hop[at(v)] == reach) continue;
    for (int id : m.vertex_edges(v)) {
      const int w = m.other_end(id, v);
      if (hop[at(w)] < 0) {
        hop[at(w)] = hop[at(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  return hop;
}

[[noreturn]] void coarse(const std::string& why) { fail(ErrorCode::RefinementNeeded, why); }

// Adds complementary face components that meet no forbidden vertex.
void fill_holes(const TriMesh& m, std::vector<char>& set, const std::vector<char>& bad) {
  const int F = m.face_count();
  std::vector<char> seen(at(F), 0);
  for (int f0 = 0; f0 < F; ++f0) {
    if (seen[at(f0)] || face_in(m, set, f0)) continue;
    std::vector<int> members{f0};
    seen[at(f0)] = 1;
    bool clean = true;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto& Fc = m.face(members[i]);
      for (int c = 0; c < 3; ++c) {
        if (bad[at(Fc.v[at(c)])]) clean = false;
        const auto& ef = m.edge_faces(Fc.e[at(c)]);
        const int g = ef[0] == members[i] ? ef[1] : ef[0];
        if (g >= 0 && !seen[at(g)] && !face_in(m, set, g)) {
          seen[at(g)] = 1;
          members.push_back(g);
        }
      }
    }
    if (!clean) continue;
    for (int f : members)
      for (int c = 0; c < 3; ++c) set[at(m.face(f).v[at(c)])] = 1;
  }
}

// The single boundary cycle of a disk region; anything else needs a finer mesh.
MeshLoop boundary_loop(const TriMesh& m, const std::vector<char>& set) {
  std::vector<int> bedges;
  std::vector<int> degree(at(m.vertex_count()), 0);
  std::vector<char> face_flag(at(m.face_count()), 0);
  int region_faces = 0;
  for (int f = 0; f < m.face_count(); ++f)
    if (face_in(m, set, f)) {
      face_flag[at(f)] = 1;
      ++region_faces;
    }
  std::vector<char> vert(at(m.vertex_count()), 0);
  int region_edges = 0;
  for (int id = 0; id < m.edge_count(); ++id) {
    const auto& ef = m.edge_faces(id);
    const int inside = (ef[0] >= 0 && face_flag[at(ef[0])]) + (ef[1] >= 0 && face_flag[at(ef[1])]);
    if (inside == 0) continue;
    ++region_edges;
    vert[at(m.edge(id).u)] = 1;
    vert[at(m.edge(id).v)] = 1;
    if (inside == 1) {
      bedges.push_back(id);
      ++degree[at(m.edge(id).u)];
      ++degree[at(m.edge(id).v)];
    }
  }
  int region_vertices = 0;
  for (char c : vert) region_vertices += c;
  if (bedges.empty()) coarse("region covers the sphere");
  for (int id : bedges)
    if (degree[at(m.edge(id).u)] != 2 || degree[at(m.edge(id).v)] != 2) coarse("region boundary is pinched");
  if (region_vertices - region_edges + region_faces != 1) coarse("region is not a disk");
  std::vector<char> is_b(at(m.edge_count()), 0), used(at(m.edge_count()), 0);
  for (int id : bedges) is_b[at(id)] = 1;
  MeshLoop loop;
  loop.start = m.edge(bedges.front()).u;
  int v = loop.start;
  int e = bedges.front();
  while (true) {
    used[at(e)] = 1;
    loop.edges.push_back(e);
    loop.length += m.edge(e).length;
    v = m.other_end(e, v);
    int next = -1;
    for (int id : m.vertex_edges(v))
      if (is_b[at(id)] && !used[at(id)]) next = id;
    if (next < 0) break;
    e = next;
  }
  if (loop.edges.size() != bedges.size() || v != loop.start) coarse("region has several boundary cycles");
  return loop;
}

// Builds block regions in post-order. A parent region is its two children,
// one ring around each, and a one-ring tube around a shortest path between
// them. Each region keeps enough clearance from unrelated blocks and marks
// for the rings still to be added on both sides below their common ancestor.
class RegionBuilder {
 public:
  RegionBuilder(const TriMesh& m, const std::vector<int>& tour, const std::vector<int>& caps)
      : m_(m), n_(static_cast<int>(tour.size())), owner_(at(m.vertex_count()), -1) {
    for (int k = 0; k < n_; ++k) {
      const int mark = tour[at(k)];
      const bool cap = std::find(caps.begin(), caps.end(), mark) != caps.end();
      const auto disk = hops(m, {mark}, cap ? 1 : 0);
      for (int v = 0; v < m.vertex_count(); ++v) {
        if (disk[at(v)] < 0) continue;
        if (owner_[at(v)] >= 0) coarse("mark disks overlap");
        owner_[at(v)] = k;
      }
      ranges_.emplace_back(k, k + 1);
    }
  }

  std::vector<Block> blocks;

  // Returns the handle of the block; leaves use their tour index.
  int build(int lo, int hi, bool root) {
    if (hi - lo == 1) return lo;
    const int half = split(lo, hi);
    const int a = build(lo, half, false);
    const int b = build(half, hi, false);
    if (root) return -1;
    return merge(lo, hi, a, b);
  }

 private:
  static constexpr int kGap = 3;  // keeps sibling rings from touching

  const TriMesh& m_;
  int n_;
  std::vector<int> owner_;  // outermost finished block holding each vertex
  std::vector<std::pair<int, int>> ranges_;  // tour range per handle

  static int split(int lo, int hi) {
    const int n = hi - lo;
    return lo + (n % 2 == 0 ? n / 2 : (n + 1) / 2);
  }

  // Heights of the children of the lowest common block of two disjoint
  // ranges, on the side of x and of y.
  std::pair<int, int> split_heights(std::pair<int, int> x, std::pair<int, int> y) const {
    int lo = 0, hi = n_;
    while (true) {
      const int mid = split(lo, hi);
      if (x.second <= mid && y.second <= mid) {
        hi = mid;
      } else if (x.first >= mid && y.first >= mid) {
        lo = mid;
      } else {
        const int left = block_height(mid - lo), right = block_height(hi - mid);
        return x.first < mid ? std::pair{left, right} : std::pair{right, left};
      }
    }
  }

  // Clearance between the block being built and another live block or a mark
  // not reached yet (which still grows to its own side of the split).
  int clearance(std::pair<int, int> x, int handle) const {
    const auto y = ranges_[at(handle)];
    const auto [zx, zy] = split_heights(x, y);
    const int own = zx - block_height(x.second - x.first);
    const bool ahead = handle < n_ && y.first >= x.second;
    return own + (ahead ? zy : 0) + kGap;
  }

  int merge(int lo, int hi, int a, int b) {
    const int V = m_.vertex_count();
    std::map<int, std::vector<int>> groups;  // clearance -> source vertices
    std::map<int, int> need;
    std::vector<int> sources;
    for (int v = 0; v < V; ++v) {
      const int o = owner_[at(v)];
      if (o == a) sources.push_back(v);
      if (o < 0 || o == a || o == b) continue;
      auto it = need.find(o);
      if (it == need.end()) it = need.emplace(o, clearance({lo, hi}, o)).first;
      groups[it->second].push_back(v);
    }
    std::vector<char> blocked(at(V), 0), bad(at(V), 0);
    for (const auto& [c, group] : groups) {
      const auto hop = hops(m_, group, c + 1);
      for (int v = 0; v < V; ++v) {
        if (hop[at(v)] < 0 || owner_[at(v)] == a || owner_[at(v)] == b) continue;
        blocked[at(v)] = 1;
        if (hop[at(v)] <= c) bad[at(v)] = 1;
      }
    }
    SearchLimits lim;
    lim.blocked_vertices = &blocked;
    const auto field = mesh_dijkstra(m_, sources, lim);
    int target = -1;
    for (int v = 0; v < V; ++v)
      if (owner_[at(v)] == b && field.owner[at(v)] >= 0 &&
          (target < 0 || field.dist[at(v)] < field.dist[at(target)]))
        target = v;
    if (target < 0) coarse("no corridor between sibling blocks");
    std::vector<int> core;
    for (int v = 0; v < V; ++v)
      if (owner_[at(v)] == a || owner_[at(v)] == b) core.push_back(v);
    for (int v = target; field.pred_edge[at(v)] >= 0;) {
      v = m_.other_end(field.pred_edge[at(v)], v);
      core.push_back(v);
    }
    core.push_back(target);
    const auto ring = hops(m_, core, 1);
    std::vector<char> region(at(V), 0);
    for (int v = 0; v < V; ++v) region[at(v)] = ring[at(v)] >= 0;
    fill_holes(m_, region, bad);
    for (int v = 0; v < V; ++v)
      if (region[at(v)] && bad[at(v)]) coarse("corridor reaches an unrelated block");

    Block blk;
    blk.lo = lo;
    blk.hi = hi;
    blk.loop = boundary_loop(m_, region);
    blk.has_loop = true;
    blocks.push_back(std::move(blk));
    const int handle = static_cast<int>(ranges_.size());
    ranges_.emplace_back(lo, hi);
    for (int v = 0; v < V; ++v)
      if (region[at(v)]) owner_[at(v)] = handle;
    return handle;
  }
};

double min_mark_distance(const TriMesh& s) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.marks().size(); ++i) {
    const auto field = mesh_dijkstra(s, {s.marks()[i]});
    for (std::size_t j = i + 1; j < s.marks().size(); ++j) best = std::min(best, field.dist[at(s.marks()[j])]);
  }
  return best;
}

constexpr int kTourRoots = 8;

MarkedSphereReport attempt(const TriMesh& s, double ell, const std::vector<int>& caps) {
  MarkedSphereReport r;
  const int n = static_cast<int>(s.marks().size());
  r.ell = ell;
  r.r0 = ell / 4.0;
  r.kappa = nesting_depth(n);
  const auto centers = maximal_disk_packing(s, r.r0, s.marks());
  r.centers = static_cast<int>(centers.size());
  const auto vor = voronoi_cells(s, centers);
  WeightedGraph g(r.centers);
  for (const auto& link : vor.links) g.add_edge(link.i, link.j, link.length);
  r.graph_length = g.total_length();
  const auto tree = minimum_spanning_tree(g);
  std::vector<std::vector<std::pair<int, int>>> adj(at(r.centers));
  for (int id : tree) {
    r.tree_length += g.edge(id).length;
    adj[at(g.edge(id).u)].emplace_back(id, g.edge(id).v);
    adj[at(g.edge(id).v)].emplace_back(id, g.edge(id).u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  // Euler tours from each mark in turn; keep first visits of marked centers.
  // A later root is tried when the regions of a tour run into each other.
  std::vector<int> tour;
  std::vector<double> segment(at(n), 0.0);
  std::optional<RegionBuilder> builder;
  for (int root = 0; root < n && !builder; ++root) {
    std::vector<char> seen(at(r.centers), 0);
    std::vector<int> stack{root};
    tour.clear();
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      if (seen[at(c)]) continue;
      seen[at(c)] = 1;
      if (c < n) tour.push_back(s.marks()[at(c)]);
      for (auto it = adj[at(c)].rbegin(); it != adj[at(c)].rend(); ++it)
        if (!seen[at(it->second)]) stack.push_back(it->second);
    }
    if (static_cast<int>(tour.size()) != n) fail(ErrorCode::NotSphere, "packing graph is disconnected");
    try {
      builder.emplace(s, tour, caps);
      builder->build(0, n, true);
    } catch (const Error& e) {
      builder.reset();
      if (e.code() != ErrorCode::RefinementNeeded || root + 1 >= std::min(n, kTourRoots)) throw;
    }
  }
  r.order = tour;
  for (int k = 0; k + 1 < n; ++k) {
    const auto field = mesh_dijkstra(s, {tour[at(k)]});
    segment[at(k)] = field.dist[at(tour[at(k + 1)])];
    r.gamma_length += segment[at(k)];
  }

  PantsDecomposition& d = r.decomposition;
  d.mesh = s;
  std::vector<std::pair<int, int>> ranges;
  for (const auto& b : builder->blocks) {
    if (!b.has_loop) continue;
    d.loops.push_back(b.loop);
    d.provenance.push_back("sphere block [" + std::to_string(b.lo) + "," + std::to_string(b.hi) + ")");
    ranges.emplace_back(b.lo, b.hi);
  }
  // Prune, then recover the block of every surviving loop.
  const auto kept = prune_decomposition(s, d.loops);
  std::vector<std::string> prov;
  for (const auto& loop : kept) {
    for (std::size_t i = 0; i < d.loops.size(); ++i) {
      if (d.loops[i].edges != loop.edges) continue;
      prov.push_back(d.provenance[i]);
      const auto [lo, hi] = ranges[i];
      double gamma = 0.0;
      for (int k = lo; k + 1 < hi; ++k) gamma += segment[at(k)];
      if (gamma > 0.0) r.delta_corridor = std::max(r.delta_corridor, (loop.length - 2.0 * gamma) / (2.0 * gamma));
      break;
    }
  }
  d.loops = kept;
  d.provenance = prov;
  finalize(d);
  if (!d.valid()) fail(ErrorCode::RefinementNeeded, "corridor loops do not form pants");
  return r;
}

}  // namespace

int nesting_depth(int n) {
  if (n < 1) fail(ErrorCode::BadParams, "nesting depth needs n >= 1");
  return static_cast<int>(std::floor(std::log2(static_cast<double>(n)))) + 1;
}

MarkedSphereReport marked_sphere_decomposition(const TriMesh& s, const MarkedSphereOptions& opt) {
  if (!s.is_closed() || s.component_count() != 1 || s.genus() != 0)
    fail(ErrorCode::NotSphere, "marked-sphere decomposition needs a closed connected genus-0 surface");
  const int n = static_cast<int>(s.marks().size());
  if (n < 4) fail(ErrorCode::TooFewMarks, "need at least 4 marks, got " + std::to_string(n));
  const double dmin = min_mark_distance(s);
  const double ell = opt.ell > 0.0 ? opt.ell : 2.0 * dmin;
  if (dmin < ell / 2.0 * (1.0 - 1e-12))
    fail(ErrorCode::MarksTooClose, "marks at distance " + std::to_string(dmin) + " < ell/2");

  TriMesh mesh = s;
  for (int level = 0;; ++level) {
    try {
      MarkedSphereReport r = attempt(mesh, ell, opt.caps);
      PantsDecomposition& d = r.decomposition;
      d.refinements = level;
      const double kappa = r.kappa;
      const double slack = 1.0 + r.delta_corridor;
      d.audits.push_back(make_audit("graph length", "packing adjacency graph <= 12 (|I| - 2) r0", r.graph_length,
                                    12.0 * (r.centers - 2) * r.r0));
      d.audits.push_back(
          make_audit("tour doubling", "shortcut tour <= 2 length(T)", r.gamma_length, 2.0 * r.tree_length));
      d.audits.push_back(make_audit("nested total", "total <= 2 kappa length(Gamma) (1 + delta)", d.total_length,
                                    2.0 * kappa * r.gamma_length * slack));
      d.audits.push_back(make_audit("area bound", "total <= 2^10 log(n) area / ell (1 + delta)", d.total_length,
                                    1024.0 * std::log(static_cast<double>(n)) * s.area() / ell * slack));
      d.deviations.emplace_back("delta_corridor", r.delta_corridor);
      return r;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RefinementNeeded || level >= opt.max_refinements) throw;
      mesh = refine_midpoint(mesh);
    }
  }
}

}  // namespace syskit
