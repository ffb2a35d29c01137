#include "syskit/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <tuple>

#include "syskit/error.hpp"

namespace syskit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
std::size_t at(int i) { return static_cast<std::size_t>(i); }

struct Point2 {
  double x, y;
};

double polygon_area(const std::vector<Point2>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& a = p[i];
    const auto& b = p[(i + 1) % p.size()];
    s += a.x * b.y - a.y * b.x;
  }
  return std::abs(s) / 2;
}

// Fraction of a triangle where the affine interpolant of (d0, d1, d2) is <= R.
double sublevel_fraction(double d0, double d1, double d2, double R) {
  if (std::max({d0, d1, d2}) <= R) return 1.0;
  if (std::min({d0, d1, d2}) > R) return 0.0;
  const Point2 corner[3] = {{0, 0}, {1, 0}, {0, 1}};
  const double val[3] = {d0 - R, d1 - R, d2 - R};
  std::vector<Point2> out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const double a = val[i], b = val[j];
    if (a <= 0) out.push_back(corner[i]);
    if ((a <= 0) != (b <= 0)) {
      const double t = a / (a - b);
      out.push_back({corner[i].x + t * (corner[j].x - corner[i].x),
                     corner[i].y + t * (corner[j].y - corner[i].y)});
    }
  }
  if (out.size() < 3) return 0.0;
  return polygon_area(out) / 0.5;
}

}  // namespace

DistanceField mesh_dijkstra(const TriMesh& m, const std::vector<int>& sources,
                            const SearchLimits& limits) {
  const auto n = at(m.vertex_count());
  DistanceField f{std::vector<double>(n, kInf), std::vector<int>(n, -1), std::vector<int>(n, -1)};
  using Item = std::tuple<double, int, int>;  // dist, owner, vertex
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const int s = sources[k];
    if (limits.blocked_vertices && (*limits.blocked_vertices)[at(s)]) continue;
    if (f.owner[at(s)] >= 0) continue;
    f.dist[at(s)] = 0.0;
    f.owner[at(s)] = static_cast<int>(k);
    pq.push({0.0, static_cast<int>(k), s});
  }
  while (!pq.empty()) {
    auto [d, o, u] = pq.top();
    pq.pop();
    if (d != f.dist[at(u)] || o != f.owner[at(u)]) continue;
    if (d > limits.max_distance) break;
    for (int id : m.vertex_edges(u)) {
      if (limits.blocked_edges && (*limits.blocked_edges)[at(id)]) continue;
      const int w = m.other_end(id, u);
      if (limits.blocked_vertices && (*limits.blocked_vertices)[at(w)]) continue;
      const double nd = d + m.edge(id).length;
      if (nd < f.dist[at(w)] || (nd == f.dist[at(w)] && o < f.owner[at(w)])) {
        f.dist[at(w)] = nd;
        f.owner[at(w)] = o;
        f.pred_edge[at(w)] = id;
        pq.push({nd, o, w});
      }
    }
  }
  return f;
}

std::vector<int> trace_path(const TriMesh& m, const DistanceField& field, int target) {
  if (field.owner[at(target)] < 0) fail(ErrorCode::Disconnected, "target not reached");
  std::vector<int> path;
  for (int v = target; field.pred_edge[at(v)] >= 0;) {
    const int id = field.pred_edge[at(v)];
    path.push_back(id);
    v = m.other_end(id, v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<double> geodesic_distance(const TriMesh& m, int source, int steiner) {
  if (steiner < 0) fail(ErrorCode::BadParams, "steiner level must be nonnegative");
  if (source < 0 || source >= m.vertex_count()) fail(ErrorCode::BadParams, "source out of range");
  if (steiner == 0) return mesh_dijkstra(m, {source}).dist;
  if (steiner > 6) fail(ErrorCode::BadParams, "steiner level above 6");
  const int per = (1 << steiner) - 1;
  const int V = m.vertex_count();
  // Node ids: vertices, then per points of each edge ordered from u to v.
  auto edge_point = [&](int e, int k) { return V + e * per + k; };
  const int N = V + m.edge_count() * per;
  std::vector<std::vector<std::pair<int, double>>> adj(at(N));
  auto link = [&](int a, int b, double w) {
    adj[at(a)].push_back({b, w});
    adj[at(b)].push_back({a, w});
  };
  for (const auto& f : m.faces()) {
    const double a = m.edge(f.e[0]).length, b = m.edge(f.e[1]).length, c = m.edge(f.e[2]).length;
    const auto apex = flatten_apex(a, b, c);
    const Point2 P[3] = {{0, 0}, {a, 0}, {apex[0], apex[1]}};
    std::vector<std::pair<int, Point2>> pts;
    for (int i = 0; i < 3; ++i) {
      pts.push_back({f.v[at(i)], P[i]});
      const int id = f.e[at(i)];
      const bool forward = m.edge(id).u == f.v[at(i)];
      const Point2 s = P[i], t = P[(i + 1) % 3];
      for (int k = 0; k < per; ++k) {
        const double frac = static_cast<double>(k + 1) / (per + 1);
        const double tt = forward ? frac : 1.0 - frac;
        pts.push_back({edge_point(id, k), {s.x + tt * (t.x - s.x), s.y + tt * (t.y - s.y)}});
      }
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        link(pts[i].first, pts[j].first,
             std::hypot(pts[i].second.x - pts[j].second.x, pts[i].second.y - pts[j].second.y));
  }
  std::vector<double> dist(at(N), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[at(source)] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[at(u)]) continue;
    for (auto [w, len] : adj[at(u)])
      if (d + len < dist[at(w)]) {
        dist[at(w)] = d + len;
        pq.push({d + len, w});
      }
  }
  dist.resize(at(V));
  return dist;
}

std::vector<int> maximal_disk_packing(const TriMesh& m, double r0, const std::vector<int>& seeds,
                                      int steiner) {
  if (!(r0 > 0.0)) fail(ErrorCode::BadParams, "r0 must be positive");
  const double gap = 2.0 * r0 * (1.0 - 1e-12);
  std::vector<double> mind(at(m.vertex_count()), kInf);
  std::vector<int> centers;
  auto accept = [&](int c) {
    centers.push_back(c);
    mind[at(c)] = 0.0;
    if (steiner > 0) {
      const auto d = geodesic_distance(m, c, steiner);
      for (std::size_t v = 0; v < d.size(); ++v) mind[v] = std::min(mind[v], d[v]);
      return;
    }
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, c});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > mind[at(u)]) continue;
      for (int id : m.vertex_edges(u)) {
        const int w = m.other_end(id, u);
        const double nd = d + m.edge(id).length;
        if (nd < mind[at(w)]) {
          mind[at(w)] = nd;
          pq.push({nd, w});
        }
      }
    }
  };
  for (int s : seeds) {
    if (s < 0 || s >= m.vertex_count()) fail(ErrorCode::BadParams, "seed out of range");
    if (mind[at(s)] < gap) fail(ErrorCode::SeedsTooClose, "seed " + std::to_string(s) + " is closer than 2 r0 to another seed");
    accept(s);
  }
  if (centers.empty() && m.vertex_count() > 0) accept(0);
  while (true) {
    int best = -1;
    for (int v = 0; v < m.vertex_count(); ++v)
      if (best < 0 || mind[at(v)] > mind[at(best)]) best = v;
    if (best < 0 || !(mind[at(best)] >= gap)) break;
    accept(best);
  }
  return centers;
}

VoronoiPartition voronoi_cells(const TriMesh& m, const std::vector<int>& centers) {
  if (centers.empty()) fail(ErrorCode::BadParams, "no centers");
  auto field = mesh_dijkstra(m, centers);
  VoronoiPartition vp;
  vp.centers = centers;
  vp.owner = field.owner;
  vp.dist = field.dist;
  vp.pred_edge = field.pred_edge;
  vp.boundary_edges.assign(centers.size(), {});
  std::map<std::pair<int, int>, VoronoiPartition::Link> best;
  for (int id = 0; id < m.edge_count(); ++id) {
    const auto& e = m.edge(id);
    int a = vp.owner[at(e.u)], b = vp.owner[at(e.v)];
    if (a < 0 || b < 0 || a == b) continue;
    vp.boundary_edges[at(a)].push_back(id);
    vp.boundary_edges[at(b)].push_back(id);
    const double len = vp.dist[at(e.u)] + e.length + vp.dist[at(e.v)];
    const auto key = std::minmax(a, b);
    auto it = best.find(key);
    if (it == best.end() || len < it->second.length)
      best[key] = {key.first, key.second, id, len};
  }
  for (auto& [key, link] : best) vp.links.push_back(link);
  return vp;
}

double sublevel_area(const TriMesh& m, const std::vector<double>& d, double radius) {
  double area = 0.0;
  for (int f = 0; f < m.face_count(); ++f) {
    const auto& face = m.face(f);
    const double frac = sublevel_fraction(d[at(face.v[0])], d[at(face.v[1])], d[at(face.v[2])], radius);
    if (frac > 0.0) area += frac * m.face_area(f);
  }
  return area;
}

RegularityReport disk_regularity_check(const TriMesh& m, double radius) {
  RegularityReport r;
  r.radius = radius;
  r.threshold = radius * radius / 2;
  r.disk_area.assign(at(m.vertex_count()), 0.0);
  if (!(radius > 0.0)) return r;
  const double reach = radius + m.max_edge_length();
  for (int v = 0; v < m.vertex_count(); ++v) {
    SearchLimits lim;
    lim.max_distance = reach;
    const auto field = mesh_dijkstra(m, {v}, lim);
    double area = 0.0;
    // Only faces touching the reached region can contribute.
    std::vector<char> seen(at(m.face_count()), 0);
    for (int u = 0; u < m.vertex_count(); ++u) {
      if (!(field.dist[at(u)] <= radius)) continue;
      for (int f : m.vertex_faces(u)) {
        if (seen[at(f)]) continue;
        seen[at(f)] = 1;
        const auto& face = m.face(f);
        area += sublevel_fraction(field.dist[at(face.v[0])], field.dist[at(face.v[1])],
                                  field.dist[at(face.v[2])], radius) *
                m.face_area(f);
      }
    }
    r.disk_area[at(v)] = area;
    if (area < r.threshold) r.failures.push_back(v);
  }
  return r;
}

}  // namespace syskit
