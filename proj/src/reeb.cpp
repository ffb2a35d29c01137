#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "syskit/error.hpp"
#include "syskit/geodesic.hpp"
#include "syskit/pants.hpp"

namespace syskit {
namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

using Point2 = std::array<double, 2>;

std::array<Point2, 3> face_plane(const TriMesh& m, int f) {
  const auto& F = m.face(f);
  const double a = m.edge(F.e[0]).length;
  const auto apex = flatten_apex(a, m.edge(F.e[1]).length, m.edge(F.e[2]).length);
  return {Point2{0.0, 0.0}, Point2{a, 0.0}, apex};
}

double dist2(const Point2& p, const Point2& q) { return std::hypot(p[0] - q[0], p[1] - q[1]); }

Point2 lerp(const Point2& p, const Point2& q, double s) {
  return {p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])};
}

// Local side index of edge id within face f.
int side_of(const MeshFace& F, int edge) {
  for (int i = 0; i < 3; ++i)
    if (F.e[at(i)] == edge) return i;
  return -1;
}

// Position of the point at parameter s (from edge.u) of the face's side i.
Point2 side_point(const TriMesh& m, const MeshFace& F, const std::array<Point2, 3>& P, int i, double s) {
  const int e = F.e[at(i)];
  const double from_vi = m.edge(e).u == F.v[at(i)] ? s : 1.0 - s;
  return lerp(P[at(i)], P[at((i + 1) % 3)], from_vi);
}

bool crosses(const std::vector<double>& val, const MeshEdge& e, double t) {
  return (val[at(e.u)] - t) * (val[at(e.v)] - t) < 0.0;
}

double edge_param(const std::vector<double>& val, const MeshEdge& e, double t) {
  return std::clamp((t - val[at(e.u)]) / (val[at(e.v)] - val[at(e.u)]), 0.0, 1.0);
}

// Union-find over edge ids with lazy reset.
struct EdgeSets {
  std::vector<int> parent;
  std::vector<int> touched;
  explicit EdgeSets(int n) : parent(at(n), -1) {}
  int find(int x) {
    if (parent[at(x)] < 0) {
      parent[at(x)] = x;
      touched.push_back(x);
    }
    while (parent[at(x)] != x) {
      parent[at(x)] = parent[at(parent[at(x)])];
      x = parent[at(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[at(find(a))] = find(b); }
  void reset() {
    for (int x : touched) parent[at(x)] = -1;
    touched.clear();
  }
};

struct Sweep {
  std::vector<int> order;
  std::vector<int> rank;
  std::vector<std::array<int, 3>> sorted;  // face corners by rank (vertex ids)
  std::vector<std::vector<int>> starts;    // faces entering at rank
};

Sweep make_sweep(const TriMesh& m, const std::vector<double>& val) {
  Sweep s;
  const int V = m.vertex_count();
  s.order.resize(at(V));
  std::iota(s.order.begin(), s.order.end(), 0);
  std::sort(s.order.begin(), s.order.end(), [&](int a, int b) {
    return val[at(a)] != val[at(b)] ? val[at(a)] < val[at(b)] : a < b;
  });
  s.rank.resize(at(V));
  for (int k = 0; k < V; ++k) s.rank[at(s.order[at(k)])] = k;
  s.starts.resize(at(V));
  for (int f = 0; f < m.face_count(); ++f) {
    auto c = m.face(f).v;
    std::sort(c.begin(), c.end(), [&](int a, int b) { return s.rank[at(a)] < s.rank[at(b)]; });
    s.sorted.push_back(c);
    s.starts[at(s.rank[at(c[0])])].push_back(f);
  }
  return s;
}

int edge_between(const MeshFace& F, int a, int b) {
  for (int i = 0; i < 3; ++i) {
    const int x = F.v[at(i)], y = F.v[at((i + 1) % 3)];
    if ((x == a && y == b) || (x == b && y == a)) return F.e[at(i)];
  }
  return -1;
}

// The two edges of face f crossed by levels in interval k.
std::array<int, 2> crossing_pair(const TriMesh& m, const Sweep& s, int f, int k) {
  const auto& c = s.sorted[at(f)];
  const auto& F = m.face(f);
  const int other = k < s.rank[at(c[1])] ? edge_between(F, c[0], c[1]) : edge_between(F, c[1], c[2]);
  return {edge_between(F, c[0], c[2]), other};
}

// Faces active in interval k: rank(lo) <= k < rank(hi), maintained incrementally.
class ActiveFaces {
 public:
  explicit ActiveFaces(const Sweep& s) : s_(s) {}
  void advance(int k) {
    for (int f : s_.starts[at(k)]) list_.push_back(f);
    for (std::size_t i = 0; i < list_.size();) {
      if (s_.rank[at(s_.sorted[at(list_[i])][2])] <= k) {
        list_[i] = list_.back();
        list_.pop_back();
      } else {
        ++i;
      }
    }
  }
  const std::vector<int>& faces() const { return list_; }

 private:
  const Sweep& s_;
  std::vector<int> list_;
};

double segment_length(const TriMesh& m, const std::vector<double>& val, int f, int ea, int eb, double t) {
  const auto& F = m.face(f);
  const auto P = face_plane(m, f);
  const Point2 a = side_point(m, F, P, side_of(F, ea), edge_param(val, m.edge(ea), t));
  const Point2 b = side_point(m, F, P, side_of(F, eb), edge_param(val, m.edge(eb), t));
  return dist2(a, b);
}

std::vector<LevelPoint> walk_level(const TriMesh& m, const std::vector<double>& val, int e0, double t,
                                   double* length) {
  std::vector<LevelPoint> pts;
  int e = e0;
  int f = m.edge_faces(e0)[0];
  *length = 0.0;
  do {
    const auto& F = m.face(f);
    int next = -1;
    for (int i = 0; i < 3; ++i)
      if (F.e[at(i)] != e && crosses(val, m.edge(F.e[at(i)]), t)) next = F.e[at(i)];
    if (next < 0) fail(ErrorCode::Internal, "level set leaves a face");
    pts.push_back({e, edge_param(val, m.edge(e), t), f});
    *length += segment_length(m, val, f, e, next, t);
    const auto& ef = m.edge_faces(next);
    f = ef[0] == f ? ef[1] : ef[0];
    e = next;
    if (f < 0) fail(ErrorCode::NotClosed, "level set reaches the boundary");
    if (pts.size() > at(m.edge_count())) fail(ErrorCode::Internal, "level walk does not close");
  } while (e != e0);
  return pts;
}

}  // namespace

std::vector<double> perturbed_values(const std::vector<double>& f) {
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) fail(ErrorCode::NonFiniteValues, "non-finite value at vertex " + std::to_string(i));
    if (i == 0 || f[i] < lo) lo = f[i];
    if (i == 0 || f[i] > hi) hi = f[i];
  }
  const double delta = 1e-12 * (hi > lo ? hi - lo : 1.0);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] + static_cast<double>(i) * delta;
  return out;
}

ReebGraph reeb_graph(const TriMesh& m, const std::vector<double>& f) {
  if (static_cast<int>(f.size()) != m.vertex_count()) fail(ErrorCode::BadParams, "one value per vertex expected");
  if (!m.is_closed()) fail(ErrorCode::NotClosed, "Reeb graph needs a closed surface");
  ReebGraph g;
  g.values = perturbed_values(f);
  const auto& val = g.values;
  const Sweep s = make_sweep(m, val);
  const int V = m.vertex_count();
  ActiveFaces active(s);
  EdgeSets sets(m.edge_count());
  std::vector<int> edge_arc(at(m.edge_count()), -1);
  std::vector<std::vector<std::pair<int, int>>> samples;  // per arc: (interval, edge)

  for (int k = 0; k < V; ++k) {
    const int v = s.order[at(k)];
    // Arcs arriving from below.
    std::vector<int> down;
    for (int id : m.vertex_edges(v)) {
      const int w = m.other_end(id, v);
      if (s.rank[at(w)] < k) down.push_back(edge_arc[at(id)]);
    }
    std::sort(down.begin(), down.end());
    down.erase(std::unique(down.begin(), down.end()), down.end());

    // Components of interval k.
    std::map<int, std::vector<int>> comps;  // root -> edges
    if (k + 1 < V) {
      active.advance(k);
      sets.reset();
      for (int face : active.faces()) {
        const auto pr = crossing_pair(m, s, face, k);
        sets.unite(pr[0], pr[1]);
      }
      for (int face : active.faces())
        for (int e : crossing_pair(m, s, face, k)) comps[sets.find(e)].push_back(e);
    }
    std::vector<int> up_roots;
    for (int id : m.vertex_edges(v)) {
      const int w = m.other_end(id, v);
      if (s.rank[at(w)] > k) up_roots.push_back(sets.find(id));
    }
    std::sort(up_roots.begin(), up_roots.end());
    up_roots.erase(std::unique(up_roots.begin(), up_roots.end()), up_roots.end());

    const bool regular = down.size() == 1 && up_roots.size() == 1 && !m.is_marked(v);
    std::map<int, int> root_arc;
    if (regular) {
      root_arc[up_roots[0]] = down[0];
    } else {
      const int node = static_cast<int>(g.nodes.size());
      g.nodes.push_back({v, val[at(v)], static_cast<int>(down.size()), static_cast<int>(up_roots.size()),
                         m.is_marked(v)});
      for (int a : down) g.arcs[at(a)].upper = node;
      for (int r : up_roots) {
        root_arc[r] = static_cast<int>(g.arcs.size());
        ReebArc arc;
        arc.lower = node;
        g.arcs.push_back(arc);
        samples.emplace_back();
      }
    }
    for (auto& [root, edges] : comps) {
      auto it = root_arc.find(root);
      // Components away from v continue their arc unchanged.
      const int arc = it != root_arc.end() ? it->second : edge_arc[at(edges.front())];
      for (int e : edges) edge_arc[at(e)] = arc;
      samples[at(arc)].emplace_back(k, edges.front());
    }
  }

  std::vector<double> sorted_vals(at(V));
  for (int k = 0; k < V; ++k) sorted_vals[at(k)] = val[at(s.order[at(k)])];
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    auto& arc = g.arcs[a];
    double t = 0.5 * (g.nodes[at(arc.lower)].value + g.nodes[at(arc.upper)].value);
    int j = static_cast<int>(std::upper_bound(sorted_vals.begin(), sorted_vals.end(), t) - sorted_vals.begin()) - 1;
    const double range = sorted_vals.back() - sorted_vals.front();
    if (sorted_vals[at(j + 1)] - sorted_vals[at(j)] < 1e-9 * range) {
      // Tied values: use the widest gap inside the arc.
      for (int i = s.rank[at(g.nodes[at(arc.lower)].vertex)]; i < s.rank[at(g.nodes[at(arc.upper)].vertex)]; ++i)
        if (sorted_vals[at(i + 1)] - sorted_vals[at(i)] > sorted_vals[at(j + 1)] - sorted_vals[at(j)]) j = i;
    }
    if (sorted_vals[at(j)] == t || !(sorted_vals[at(j)] < t && t < sorted_vals[at(j + 1)]))
      t = 0.5 * (sorted_vals[at(j)] + sorted_vals[at(j + 1)]);
    const auto& smp = samples[a];
    auto it = std::lower_bound(smp.begin(), smp.end(), std::make_pair(j, -1));
    if (it == smp.end() || it->first != j) fail(ErrorCode::Internal, "arc has no sample at its midpoint");
    arc.mid = t;
    arc.loop = walk_level(m, val, it->second, t, &arc.loop_length);
  }
  return g;
}

double sweep_width(const TriMesh& m, const std::vector<double>& f) {
  if (static_cast<int>(f.size()) != m.vertex_count()) fail(ErrorCode::BadParams, "one value per vertex expected");
  const auto val = perturbed_values(f);
  const Sweep s = make_sweep(m, val);
  ActiveFaces active(s);
  double best = 0.0;
  for (int k = 0; k + 1 < m.vertex_count(); ++k) {
    active.advance(k);
    const double t_lo = val[at(s.order[at(k)])], t_hi = val[at(s.order[at(k + 1)])];
    double lo = 0.0, hi = 0.0;
    for (int face : active.faces()) {
      const auto pr = crossing_pair(m, s, face, k);
      lo += segment_length(m, val, face, pr[0], pr[1], t_lo);
      hi += segment_length(m, val, face, pr[0], pr[1], t_hi);
    }
    best = std::max({best, lo, hi});
  }
  return best;
}

std::vector<double> height_function(const TriMesh& m, const std::string& kind) {
  std::vector<double> out(at(m.vertex_count()));
  if (kind == "dist") {
    const auto field = mesh_dijkstra(m, {0});
    return field.dist;
  }
  int axis = kind == "x" ? 0 : kind == "y" ? 1 : kind == "z" ? 2 : -1;
  if (axis < 0) fail(ErrorCode::BadParams, "height must be x, y, z or dist");
  if (!m.has_coords()) fail(ErrorCode::BadParams, "coordinate height needs vertex coordinates");
  for (int v = 0; v < m.vertex_count(); ++v) out[at(v)] = m.coords()[at(v)][at(axis)];
  return out;
}

namespace {

double signed_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

// Triangulates a convex polygon whose sides may carry collinear points,
// never emitting a zero-area triangle.
std::vector<std::array<int, 3>> clip_ears(std::vector<int> poly, const std::vector<Point2>& pos) {
  auto area = [&](const std::vector<int>& p) {
    double a = 0.0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) a += signed_area(pos[at(p[0])], pos[at(p[i])], pos[at(p[i + 1])]);
    return std::abs(a);
  };
  const double tiny = 1e-12 * std::max(area(poly), 1e-300);
  std::vector<std::array<int, 3>> out;
  while (poly.size() > 3) {
    const std::size_t n = poly.size();
    std::size_t best = n;
    double best_area = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int a = poly[(i + n - 1) % n], b = poly[i], c = poly[(i + 1) % n];
      const double ear = std::abs(signed_area(pos[at(a)], pos[at(b)], pos[at(c)]));
      if (ear <= tiny) continue;
      std::vector<int> rest = poly;
      rest.erase(rest.begin() + static_cast<long>(i));
      if (area(rest) <= tiny) continue;
      if (ear > best_area) {
        best_area = ear;
        best = i;
      }
    }
    if (best == n) fail(ErrorCode::Internal, "level loop cut left a degenerate polygon");
    out.push_back({poly[(best + n - 1) % n], poly[best], poly[(best + 1) % n]});
    poly.erase(poly.begin() + static_cast<long>(best));
  }
  out.push_back({poly[0], poly[1], poly[2]});
  return out;
}

}  // namespace

LevelRefinement insert_level_loops(const TriMesh& m, const std::vector<std::vector<LevelPoint>>& loops) {
  const int V0 = m.vertex_count();
  // Split points per edge, sorted by parameter.
  struct Split {
    double s;
    int loop;
    int index;
  };
  std::vector<std::vector<Split>> splits(at(m.edge_count()));
  for (std::size_t l = 0; l < loops.size(); ++l)
    for (std::size_t i = 0; i < loops[l].size(); ++i)
      splits[at(loops[l][i].edge)].push_back({loops[l][i].s, static_cast<int>(l), static_cast<int>(i)});

  std::vector<std::vector<int>> point_vertex(loops.size());
  for (std::size_t l = 0; l < loops.size(); ++l) point_vertex[l].resize(loops[l].size());
  int V = V0;
  std::vector<std::array<double, 3>> coords = m.coords();
  std::vector<MeshEdge> edges;
  // Chain of vertices and sub-edges along each original edge, from edge.u.
  std::vector<std::vector<int>> chain_v(at(m.edge_count())), chain_e(at(m.edge_count()));
  for (int id = 0; id < m.edge_count(); ++id) {
    auto& sp = splits[at(id)];
    std::sort(sp.begin(), sp.end(), [](const Split& a, const Split& b) { return a.s < b.s; });
    // Levels tied with a vertex value cross at its end; keep points apart
    // from the ends and from each other so no face degenerates.
    constexpr double kGap = 1e-9;
    for (std::size_t k = 0; k < sp.size(); ++k) sp[k].s = std::max(sp[k].s, kGap * static_cast<double>(k + 1));
    for (std::size_t k = sp.size(); k-- > 0;)
      sp[k].s = std::min(sp[k].s, 1.0 - kGap * static_cast<double>(sp.size() - k));
    const auto& e = m.edge(id);
    chain_v[at(id)].push_back(e.u);
    double prev = 0.0;
    for (const auto& p : sp) {
      point_vertex[at(p.loop)][at(p.index)] = V;
      if (m.has_coords()) {
        const auto& a = m.coords()[at(e.u)];
        const auto& b = m.coords()[at(e.v)];
        coords.push_back({a[0] + p.s * (b[0] - a[0]), a[1] + p.s * (b[1] - a[1]), a[2] + p.s * (b[2] - a[2])});
      }
      chain_e[at(id)].push_back(static_cast<int>(edges.size()));
      edges.push_back({chain_v[at(id)].back(), V, (p.s - prev) * e.length, {}});
      chain_v[at(id)].push_back(V++);
      prev = p.s;
    }
    chain_e[at(id)].push_back(static_cast<int>(edges.size()));
    edges.push_back({chain_v[at(id)].back(), e.v, (1.0 - prev) * e.length, sp.empty() ? e.length_text : ""});
    chain_v[at(id)].push_back(e.v);
  }

  // Chords per face.
  struct Chord {
    int loop;
    int index;
  };
  std::vector<std::vector<Chord>> chords(at(m.face_count()));
  for (std::size_t l = 0; l < loops.size(); ++l)
    for (std::size_t i = 0; i < loops[l].size(); ++i)
      chords[at(loops[l][i].face)].push_back({static_cast<int>(l), static_cast<int>(i)});

  std::vector<std::vector<int>> chord_edge(loops.size());
  for (std::size_t l = 0; l < loops.size(); ++l) chord_edge[l].resize(loops[l].size());
  std::vector<MeshFace> faces;
  for (int f = 0; f < m.face_count(); ++f) {
    const auto& F = m.face(f);
    const auto P = face_plane(m, f);
    std::vector<int> gid;    // local -> global vertex
    std::vector<Point2> pos;
    std::map<std::pair<int, int>, int> local_edge;
    auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
    std::vector<int> boundary;
    for (int i = 0; i < 3; ++i) {
      const int id = F.e[at(i)];
      const bool forward = m.edge(id).u == F.v[at(i)];
      const auto& cv = chain_v[at(id)];
      const std::size_t n = cv.size();
      for (std::size_t j = 0; j + 1 < n; ++j) {
        const int gv = forward ? cv[j] : cv[n - 1 - j];
        double s_from_vi = 0.0;
        if (j > 0) {
          const double s = splits[at(id)][forward ? j - 1 : n - 2 - j].s;
          s_from_vi = forward ? s : 1.0 - s;
        }
        gid.push_back(gv);
        pos.push_back(lerp(P[at(i)], P[at((i + 1) % 3)], s_from_vi));
        boundary.push_back(static_cast<int>(gid.size()) - 1);
      }
    }
    const int nb = static_cast<int>(boundary.size());
    {
      // Boundary sub-edges in cyclic order.
      int idx = 0;
      for (int i = 0; i < 3; ++i) {
        const int id = F.e[at(i)];
        const bool forward = m.edge(id).u == F.v[at(i)];
        const auto& ce = chain_e[at(id)];
        const std::size_t n = ce.size();
        for (std::size_t j = 0; j < n; ++j) {
          const int ge = forward ? ce[j] : ce[n - 1 - j];
          local_edge[key(idx, (idx + 1) % nb)] = ge;
          ++idx;
        }
      }
    }
    auto local_of = [&](int global) {
      for (std::size_t i = 0; i < gid.size(); ++i)
        if (gid[i] == global) return static_cast<int>(i);
      fail(ErrorCode::Internal, "level point missing from face");
    };
    std::vector<std::vector<int>> polys{boundary};
    for (const auto& c : chords[at(f)]) {
      const auto& lp = loops[at(c.loop)];
      const std::size_t nxt = (at(c.index) + 1) % lp.size();
      const int a = local_of(point_vertex[at(c.loop)][at(c.index)]);
      const int b = local_of(point_vertex[at(c.loop)][nxt]);
      const int id = static_cast<int>(edges.size());
      edges.push_back({gid[at(a)], gid[at(b)], dist2(pos[at(a)], pos[at(b)]), {}});
      chord_edge[at(c.loop)][at(c.index)] = id;
      local_edge[key(a, b)] = id;
      for (std::size_t p = 0; p < polys.size(); ++p) {
        auto& poly = polys[p];
        auto ia = std::find(poly.begin(), poly.end(), a);
        auto ib = std::find(poly.begin(), poly.end(), b);
        if (ia == poly.end() || ib == poly.end()) continue;
        std::size_t i = static_cast<std::size_t>(ia - poly.begin()), j = static_cast<std::size_t>(ib - poly.begin());
        if (i > j) std::swap(i, j);
        std::vector<int> first(poly.begin() + static_cast<long>(i), poly.begin() + static_cast<long>(j) + 1);
        std::vector<int> second(poly.begin() + static_cast<long>(j), poly.end());
        second.insert(second.end(), poly.begin(), poly.begin() + static_cast<long>(i) + 1);
        poly = std::move(first);
        polys.push_back(std::move(second));
        break;
      }
    }
    for (const auto& poly : polys) {
      for (const auto& tri : clip_ears(poly, pos)) {
        MeshFace nf;
        for (int c = 0; c < 3; ++c) {
          const int a = tri[at(c)], b = tri[at((c + 1) % 3)];
          auto it = local_edge.find(key(a, b));
          if (it == local_edge.end()) {
            const int id = static_cast<int>(edges.size());
            edges.push_back({gid[at(a)], gid[at(b)], dist2(pos[at(a)], pos[at(b)]), {}});
            it = local_edge.emplace(key(a, b), id).first;
          }
          nf.v[at(c)] = gid[at(a)];
          nf.e[at(c)] = it->second;
        }
        faces.push_back(nf);
      }
    }
  }

  LevelRefinement out;
  out.mesh = TriMesh::from_faces(V, std::move(edges), std::move(faces), m.marks(), std::move(coords), TriMesh::kDerivedSlack);
  for (std::size_t l = 0; l < loops.size(); ++l) {
    MeshLoop loop;
    loop.start = point_vertex[l].front();
    for (int id : chord_edge[l]) {
      loop.edges.push_back(id);
      loop.length += out.mesh.edge(id).length;
    }
    out.loops.push_back(loop);
  }
  return out;
}

}  // namespace syskit
