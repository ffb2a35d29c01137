#include "syskit/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>

#include "syskit/error.hpp"
#include "syskit/geodesic.hpp"

namespace syskit {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }
using Vec3 = std::array<double, 3>;

double dist3(const Vec3& a, const Vec3& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                   (a[2] - b[2]) * (a[2] - b[2]));
}

// Collects triangles; edge lengths are either supplied or taken from coordinates.
class Builder {
 public:
  int vertex(const Vec3& p) {
    coords_.push_back(p);
    return static_cast<int>(coords_.size()) - 1;
  }
  void length(int u, int v, double len) { lengths_[std::minmax(u, v)] = len; }
  void tri(int a, int b, int c) { tris_.push_back({a, b, c}); }
  void drop_tri(int a, int b, int c) {
    std::array<int, 3> key{a, b, c};
    std::sort(key.begin(), key.end());
    std::erase_if(tris_, [&](std::array<int, 3> t) {
      std::sort(t.begin(), t.end());
      return t == key;
    });
  }
  Vec3& coord(int v) { return coords_[at(v)]; }

  TriMesh build(std::vector<int> marks = {}) const {
    std::map<std::pair<int, int>, int> ids;
    std::vector<MeshEdge> edges;
    for (const auto& t : tris_)
      for (int i = 0; i < 3; ++i) {
        const auto key = std::minmax(t[at(i)], t[at((i + 1) % 3)]);
        if (ids.count(key)) continue;
        ids[key] = static_cast<int>(edges.size());
        auto it = lengths_.find(key);
        const double len = it != lengths_.end() ? it->second
                                                : dist3(coords_[at(key.first)], coords_[at(key.second)]);
        edges.push_back({key.first, key.second, len, {}});
      }
    // Drop unused vertices.
    std::vector<int> remap(coords_.size(), -1);
    for (const auto& t : tris_)
      for (int v : t) remap[at(v)] = 0;
    int next = 0;
    std::vector<Vec3> coords;
    for (std::size_t v = 0; v < coords_.size(); ++v)
      if (remap[v] == 0) {
        remap[v] = next++;
        coords.push_back(coords_[v]);
      }
    for (auto& e : edges) {
      e.u = remap[at(e.u)];
      e.v = remap[at(e.v)];
    }
    std::vector<std::array<int, 3>> tris;
    for (const auto& t : tris_) tris.push_back({remap[at(t[0])], remap[at(t[1])], remap[at(t[2])]});
    for (int& m : marks) m = remap[at(m)];
    return TriMesh::from_triangles(next, std::move(edges), tris, std::move(marks), std::move(coords));
  }

 private:
  std::vector<Vec3> coords_;
  std::map<std::pair<int, int>, double> lengths_;
  std::vector<std::array<int, 3>> tris_;
};

// Unit grid torus into a builder; returns vertex ids indexed [i + n*j].
std::vector<int> grid_torus(Builder& b, int n, double side, const Vec3& offset) {
  std::vector<int> id(at(n * n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      id[at(i + n * j)] = b.vertex({offset[0] + i * side, offset[1] + j * side, offset[2]});
  auto v = [&](int i, int j) { return id[at((i % n + n) % n + n * ((j % n + n) % n))]; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      b.length(v(i, j), v(i + 1, j), side);
      b.length(v(i, j), v(i, j + 1), side);
      b.length(v(i, j), v(i + 1, j + 1), side * std::numbers::sqrt2);
      b.tri(v(i, j), v(i + 1, j), v(i + 1, j + 1));
      b.tri(v(i, j), v(i + 1, j + 1), v(i, j + 1));
    }
  return id;
}

// Joins two 4-vertex rings (same corner order) with a band of triangles.
void band(Builder& b, const std::array<int, 4>& lo, const std::array<int, 4>& hi) {
  for (int k = 0; k < 4; ++k) {
    const int k1 = (k + 1) % 4;
    b.tri(lo[at(k)], lo[at(k1)], hi[at(k1)]);
    b.tri(lo[at(k)], hi[at(k1)], hi[at(k)]);
  }
}

std::array<int, 4> square_ring(Builder& b, double cx, double cy, double z, double side) {
  const double h = side / 2;
  return {b.vertex({cx - h, cy - h, z}), b.vertex({cx + h, cy - h, z}), b.vertex({cx + h, cy + h, z}),
          b.vertex({cx - h, cy + h, z})};
}

}  // namespace

TriMesh flat_torus(int n, double side) {
  if (n < 3) fail(ErrorCode::BadParams, "flat-torus needs n >= 3");
  if (!(side > 0.0)) fail(ErrorCode::BadParams, "side must be positive");
  Builder b;
  grid_torus(b, n, side, {0, 0, 0});
  const double R = 2.0, r = 1.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double u = 2 * std::numbers::pi * i / n, w = 2 * std::numbers::pi * j / n;
      b.coord(i + n * j) = {(R + r * std::cos(w)) * std::cos(u), (R + r * std::cos(w)) * std::sin(u),
                            r * std::sin(w)};
    }
  return b.build();
}

TriMesh icosphere(int level) {
  if (level < 0 || level > 6) fail(ErrorCode::BadParams, "sphere level must be in [0, 6]");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> pts = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                           {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  std::vector<std::array<int, 3>> tris = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
      {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  auto normalize = [](Vec3 p) {
    const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    return Vec3{p[0] / n, p[1] / n, p[2] / n};
  };
  for (auto& p : pts) p = normalize(p);
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      const Vec3 p = normalize({(pts[at(a)][0] + pts[at(b)][0]) / 2, (pts[at(a)][1] + pts[at(b)][1]) / 2,
                                (pts[at(a)][2] + pts[at(b)][2]) / 2});
      pts.push_back(p);
      mid[key] = static_cast<int>(pts.size()) - 1;
      return mid[key];
    };
    std::vector<std::array<int, 3>> next;
    for (const auto& f : tris) {
      const int a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    tris = std::move(next);
  }
  Builder b;
  for (const auto& p : pts) b.vertex(p);
  for (const auto& f : tris) b.tri(f[0], f[1], f[2]);
  return b.build();
}

TriMesh genus2_surface(int n, int hole) {
  if (hole < 1 || n < hole + 3) fail(ErrorCode::BadParams, "genus2 needs hole >= 1 and n >= hole + 3");
  Builder b;
  const int a0 = 1;  // hole block occupies squares [a0, a0 + hole)
  auto in_hole_square = [&](int i, int j) { return i >= a0 && i < a0 + hole && j >= a0 && j < a0 + hole; };
  auto on_hole_boundary = [&](int i, int j) {
    return i >= a0 && i <= a0 + hole && j >= a0 && j <= a0 + hole &&
           (i == a0 || i == a0 + hole || j == a0 || j == a0 + hole);
  };
  std::vector<int> A = grid_torus(b, n, 1.0, {0, 0, 0.5});
  // Second copy shares the hole-boundary vertices with the first.
  std::vector<int> B(at(n * n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      B[at(i + n * j)] = on_hole_boundary(i, j) ? A[at(i + n * j)] : b.vertex({double(i), double(j), -0.5});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (on_hole_boundary(i, j)) b.coord(A[at(i + n * j)])[2] = 0.0;
  auto vb = [&](int i, int j) { return B[at((i % n + n) % n + n * ((j % n + n) % n))]; };
  auto va = [&](int i, int j) { return A[at((i % n + n) % n + n * ((j % n + n) % n))]; };
  for (int j = a0; j < a0 + hole; ++j)
    for (int i = a0; i < a0 + hole; ++i) {
      b.drop_tri(va(i, j), va(i + 1, j), va(i + 1, j + 1));
      b.drop_tri(va(i, j), va(i + 1, j + 1), va(i, j + 1));
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (in_hole_square(i, j)) continue;
      b.length(vb(i, j), vb(i + 1, j), 1.0);
      b.length(vb(i, j), vb(i, j + 1), 1.0);
      b.length(vb(i, j), vb(i + 1, j + 1), std::numbers::sqrt2);
      b.tri(vb(i, j), vb(i + 1, j + 1), vb(i + 1, j));
      b.tri(vb(i, j), vb(i, j + 1), vb(i + 1, j + 1));
    }
  return b.build();
}

TriMesh pinched_genus2(double pinch) {
  if (!(pinch > 0.0) || pinch > 1.0) fail(ErrorCode::BadParams, "pinch must be in (0, 1]");
  const int n = 6;
  const double height = 4.0;
  Builder b;
  const std::vector<int> A = grid_torus(b, n, 1.0, {0, 0, 0});
  const std::vector<int> B = grid_torus(b, n, 1.0, {0, 0, height});
  const int h = 2;  // unit hole at square (h, h)
  auto corner_ring = [&](const std::vector<int>& g) {
    return std::array<int, 4>{g[at(h + n * h)], g[at(h + 1 + n * h)], g[at(h + 1 + n * (h + 1))],
                              g[at(h + n * (h + 1))]};
  };
  const auto ra = corner_ring(A), rb = corner_ring(B);
  b.drop_tri(ra[0], ra[1], ra[2]);
  b.drop_tri(ra[0], ra[2], ra[3]);
  b.drop_tri(rb[0], rb[1], rb[2]);
  b.drop_tri(rb[0], rb[2], rb[3]);
  // Ring sides shrink linearly to the pinch at mid-height, then grow back.
  const int steps = 8;
  std::array<int, 4> prev = ra;
  for (int k = 1; k < steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    const double side = 1.0 - (1.0 - pinch) * (1.0 - std::abs(2.0 * t - 1.0));
    const auto ring = square_ring(b, h + 0.5, h + 0.5, t * height, side);
    band(b, prev, ring);
    prev = ring;
  }
  band(b, prev, rb);
  return b.build();
}

TriMesh hairy_torus(int hairs, double girth) {
  if (hairs < 0) fail(ErrorCode::BadParams, "hair count must be nonnegative");
  if (!(girth > 0.0) || girth > 4.0) fail(ErrorCode::BadParams, "girth must be in (0, 4]");
  const int n = std::max(8, 2 * hairs + 2);
  Builder b;
  const std::vector<int> G = grid_torus(b, n, 1.0, {0, 0, 0});
  for (int k = 0; k < hairs; ++k) {
    const int j = 1 + 2 * k;
    const int i0 = 1, i1 = 5;
    auto ring_at = [&](int i) {
      return std::array<int, 4>{G[at(i + n * j)], G[at(i + 1 + n * j)], G[at(i + 1 + n * (j + 1))],
                                G[at(i + n * (j + 1))]};
    };
    const auto r0 = ring_at(i0), r1 = ring_at(i1);
    for (const auto& r : {r0, r1}) {
      b.drop_tri(r[0], r[1], r[2]);
      b.drop_tri(r[0], r[2], r[3]);
    }
    // Semicircular arch over the two holes; rings lie in normal planes.
    const double cx = (i0 + i1 + 1) / 2.0, cy = j + 0.5, R = (i1 - i0) / 2.0, z0 = 1.0;
    const double h = girth / 8;
    const int count = 5;
    std::array<int, 4> prev = r0;
    for (int s = 0; s < count; ++s) {
      const double phi = std::numbers::pi * (1.0 - static_cast<double>(s) / (count - 1));
      const double px = cx + R * std::cos(phi), pz = z0 + R * std::sin(phi);
      const double nx = std::cos(phi), nz = std::sin(phi);
      std::array<int, 4> ring{};
      const int sx[4] = {-1, 1, 1, -1}, sy[4] = {-1, -1, 1, 1};
      for (int c = 0; c < 4; ++c)
        ring[at(c)] = b.vertex({px - sx[c] * h * nx, cy + sy[c] * h, pz - sx[c] * h * nz});
      band(b, prev, ring);
      prev = ring;
    }
    band(b, prev, {r1[1], r1[0], r1[3], r1[2]});
  }
  return b.build();
}

std::vector<int> farthest_point_marks(const TriMesh& m, int k) {
  if (k < 0 || k > m.vertex_count()) fail(ErrorCode::BadParams, "mark count out of range");
  std::vector<int> marks;
  if (k == 0) return marks;
  marks.push_back(0);
  while (static_cast<int>(marks.size()) < k) {
    const auto field = mesh_dijkstra(m, marks);
    int best = 0;
    for (int v = 1; v < m.vertex_count(); ++v)
      if (field.dist[at(v)] > field.dist[at(best)]) best = v;
    marks.push_back(best);
  }
  return marks;
}

TriMesh marked_sphere(int n) {
  if (n < 1) fail(ErrorCode::BadParams, "marked-sphere needs n >= 1");
  int level = 2;
  while (level < 5 && 10 * (1 << (2 * level)) + 2 < 40 * n) ++level;
  TriMesh m = icosphere(level);
  m.set_marks(farthest_point_marks(m, n));
  return m;
}

HyperellipticFixture hyperelliptic_fixture(int g) {
  if (g < 1) fail(ErrorCode::BadParams, "hyperelliptic fixture needs g >= 1");
  HyperellipticFixture fx;
  fx.sphere = marked_sphere(2 * g + 2);
  // Marks in sampling order, paired consecutively.
  const auto order = farthest_point_marks(fx.sphere, 2 * g + 2);
  std::vector<char> flag(at(fx.sphere.edge_count()), 0);
  for (int p = 0; p + 1 < static_cast<int>(order.size()); p += 2) {
    const auto field = mesh_dijkstra(fx.sphere, {order[at(p)]});
    for (int id : trace_path(fx.sphere, field, order[at(p + 1)])) flag[at(id)] ^= 1;
  }
  for (int id = 0; id < fx.sphere.edge_count(); ++id)
    if (flag[at(id)]) fx.cocycle.push_back(id);
  return fx;
}

std::vector<int> read_cocycle(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Parse, "cannot open " + path);
  std::string tag;
  long long k = -1;
  if (!(in >> tag >> k) || tag != "Z2COCYCLE" || k < 0) fail(ErrorCode::Parse, "expected 'Z2COCYCLE k'");
  std::vector<int> out;
  for (long long i = 0; i < k; ++i) {
    long long id = -1;
    if (!(in >> id) || id < 0) fail(ErrorCode::Parse, "bad cocycle edge id");
    out.push_back(static_cast<int>(id));
  }
  return out;
}

void write_cocycle(const std::vector<int>& edges, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out << "Z2COCYCLE " << edges.size() << '\n';
  for (int id : edges) out << id << '\n';
}

TriMesh jitter_lengths(const TriMesh& m, std::uint64_t seed, double amp) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(1 - amp, 1 + amp);
  for (int attempt = 0; attempt < 1000; ++attempt) {
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
  fail(ErrorCode::BadParams, "jitter amplitude too large for this mesh");
}

int vertex_at(const TriMesh& m, double x, double y, double z) {
  if (!m.has_coords()) return -1;
  for (int v = 0; v < m.vertex_count(); ++v) {
    const auto& c = m.coords()[static_cast<std::size_t>(v)];
    if (std::abs(c[0] - x) < 1e-9 && std::abs(c[1] - y) < 1e-9 && std::abs(c[2] - z) < 1e-9) return v;
  }
  return -1;
}

MeshLoop genus2_waist(const TriMesh& m, int hole) {
  const int a = 1, b = 1 + hole;
  std::vector<int> walk;
  for (int i = a; i < b; ++i) walk.push_back(vertex_at(m, i, a, 0));
  for (int j = a; j < b; ++j) walk.push_back(vertex_at(m, b, j, 0));
  for (int i = b; i > a; --i) walk.push_back(vertex_at(m, i, b, 0));
  for (int j = b; j >= a; --j) walk.push_back(vertex_at(m, a, j, 0));
  if (std::count(walk.begin(), walk.end(), -1)) fail(ErrorCode::BadParams, "mesh is not a genus2_surface");
  return loop_from_vertices(m, walk);
}

}  // namespace syskit
