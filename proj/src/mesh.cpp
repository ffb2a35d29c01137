#include "syskit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include "syskit/dsu.hpp"
#include "syskit/error.hpp"
#include "syskit/graph.hpp"

namespace syskit {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

int local_index(const MeshFace& f, int edge) {
  for (int i = 0; i < 3; ++i)
    if (f.e[at(i)] == edge) return i;
  return -1;
}

void flip_face(MeshFace& f) {
  f = MeshFace{{f.v[0], f.v[2], f.v[1]}, {f.e[2], f.e[1], f.e[0]}};
}

double parse_length(const std::string& text) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::Parse, "bad length '" + text + "'");
  }
  if (used != text.size()) fail(ErrorCode::Parse, "bad length '" + text + "'");
  return x;
}

}  // namespace

double heron(double a, double b, double c) {
  // Kahan's stable form.
  std::array<double, 3> s{a, b, c};
  std::sort(s.begin(), s.end(), std::greater<>());
  const double x = s[0], y = s[1], z = s[2];
  const double p = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  return p <= 0.0 ? 0.0 : 0.25 * std::sqrt(p);
}

std::array<double, 2> flatten_apex(double a, double b, double c) {
  // |v0 v1| = a, |v1 v2| = b, |v2 v0| = c.
  const double x = (a * a + c * c - b * b) / (2.0 * a);
  const double y2 = c * c - x * x;
  return {x, y2 > 0.0 ? std::sqrt(y2) : 0.0};
}

TriMesh TriMesh::from_triangles(int vertex_count, std::vector<MeshEdge> edges,
                                const std::vector<std::array<int, 3>>& triangles,
                                std::vector<int> marks,
                                std::vector<std::array<double, 3>> coords) {
  std::map<std::pair<int, int>, int> lookup;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto key = std::minmax(edges[i].u, edges[i].v);
    if (!lookup.emplace(key, static_cast<int>(i)).second)
      fail(ErrorCode::Nonmanifold, "duplicate edge " + std::to_string(key.first) + "-" +
                                       std::to_string(key.second));
  }
  std::vector<MeshFace> faces;
  faces.reserve(triangles.size());
  for (const auto& t : triangles) {
    MeshFace f;
    f.v = t;
    for (int i = 0; i < 3; ++i) {
      auto it = lookup.find(std::minmax(t[at(i)], t[at((i + 1) % 3)]));
      if (it == lookup.end())
        fail(ErrorCode::Parse, "face uses missing edge " + std::to_string(t[at(i)]) + "-" +
                                   std::to_string(t[at((i + 1) % 3)]));
      f.e[at(i)] = it->second;
    }
    faces.push_back(f);
  }
  return from_faces(vertex_count, std::move(edges), std::move(faces), std::move(marks),
                    std::move(coords));
}

TriMesh TriMesh::from_faces(int vertex_count, std::vector<MeshEdge> edges,
                            std::vector<MeshFace> faces, std::vector<int> marks,
                            std::vector<std::array<double, 3>> coords, double slack) {
  TriMesh m;
  m.vertex_count_ = vertex_count;
  m.edges_ = std::move(edges);
  m.faces_ = std::move(faces);
  m.coords_ = std::move(coords);
  if (!m.coords_.empty() && m.coords_.size() != at(vertex_count))
    fail(ErrorCode::Parse, "coordinate count does not match vertex count");
  m.validate(slack);
  m.set_marks(std::move(marks));
  return m;
}

void TriMesh::validate(double slack) {
  if (vertex_count_ < 0) fail(ErrorCode::Parse, "negative vertex count");
  for (const auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= vertex_count_ || e.v >= vertex_count_)
      fail(ErrorCode::Parse, "edge endpoint out of range");
    if (e.u == e.v) fail(ErrorCode::Nonmanifold, "self-loop edge in a mesh");
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      fail(ErrorCode::NonpositiveLength, "edge length must be positive and finite");
  }
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const auto& face = faces_[f];
    for (int i = 0; i < 3; ++i) {
      const int id = face.e[at(i)];
      if (id < 0 || id >= edge_count()) fail(ErrorCode::Parse, "face edge out of range");
      const auto& e = edges_[at(id)];
      const auto want = std::minmax(face.v[at(i)], face.v[at((i + 1) % 3)]);
      if (std::minmax(e.u, e.v) != want) fail(ErrorCode::Parse, "face edge does not match its vertices");
    }
    if (face.e[0] == face.e[1] || face.e[1] == face.e[2] || face.e[0] == face.e[2])
      fail(ErrorCode::Nonmanifold, "face repeats an edge");
    const double a = edges_[at(face.e[0])].length, b = edges_[at(face.e[1])].length,
                 c = edges_[at(face.e[2])].length;
    const double tol = slack * (a + b + c);
    if (!(a < b + c + tol && b < a + c + tol && c < a + b + tol))
      fail(ErrorCode::TriangleInequality, "face " + std::to_string(f) + " violates the triangle inequality " + std::to_string(a) + " " + std::to_string(b) + " " + std::to_string(c));
  }
  edge_faces_.assign(edges_.size(), {-1, -1});
  for (std::size_t f = 0; f < faces_.size(); ++f)
    for (int id : faces_[f].e) {
      auto& slots = edge_faces_[at(id)];
      if (slots[0] < 0) slots[0] = static_cast<int>(f);
      else if (slots[1] < 0) slots[1] = static_cast<int>(f);
      else fail(ErrorCode::Nonmanifold, "edge " + std::to_string(id) + " has more than two faces");
    }
  for (std::size_t id = 0; id < edges_.size(); ++id)
    if (edge_faces_[id][0] < 0) fail(ErrorCode::Nonmanifold, "edge " + std::to_string(id) + " has no face");

  // Orient faces consistently, component by component.
  std::vector<char> seen(faces_.size(), 0);
  for (std::size_t root = 0; root < faces_.size(); ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    std::queue<int> q;
    q.push(static_cast<int>(root));
    while (!q.empty()) {
      const int f = q.front();
      q.pop();
      for (int i = 0; i < 3; ++i) {
        const int id = faces_[at(f)].e[at(i)];
        const auto& slots = edge_faces_[at(id)];
        const int g = slots[0] == f ? slots[1] : slots[0];
        if (g < 0) continue;
        const int a = faces_[at(f)].v[at(i)];
        const int j = local_index(faces_[at(g)], id);
        const bool same = faces_[at(g)].v[at(j)] == a;
        if (!seen[at(g)]) {
          if (same) flip_face(faces_[at(g)]);
          seen[at(g)] = 1;
          q.push(g);
        } else if (same) {
          fail(ErrorCode::Nonorientable, "mesh is not orientable");
        }
      }
    }
  }
  build_incidence();
  std::vector<std::pair<int, int>> first_face;
  std::vector<std::size_t> parent;
  auto root = [&](std::size_t k) {
    while (parent[k] != k) k = parent[k] = parent[parent[k]];
    return k;
  };
  for (int v = 0; v < vertex_count_; ++v) {
    const auto& fs = vertex_faces_[at(v)];
    if (fs.empty()) fail(ErrorCode::Nonmanifold, "vertex " + std::to_string(v) + " has no face");
    // Faces around v must form a single fan.
    first_face.clear();
    parent.resize(fs.size());
    for (std::size_t k = 0; k < fs.size(); ++k) parent[k] = k;
    for (std::size_t k = 0; k < fs.size(); ++k) {
      const auto& face = faces_[at(fs[k])];
      for (int i = 0; i < 3; ++i) {
        const int id = face.e[at(i)];
        const auto& e = edges_[at(id)];
        if (e.u != v && e.v != v) continue;
        auto it = std::find_if(first_face.begin(), first_face.end(), [id](const auto& p) { return p.first == id; });
        if (it == first_face.end()) first_face.emplace_back(id, static_cast<int>(k));
        else parent[root(static_cast<std::size_t>(it->second))] = root(k);
      }
    }
    for (std::size_t k = 1; k < fs.size(); ++k)
      if (root(k) != root(0))
        fail(ErrorCode::Nonmanifold, "vertex " + std::to_string(v) + " is not a manifold point");
  }
}

void TriMesh::build_incidence() {
  std::vector<int> degree(at(vertex_count_), 0), fan(at(vertex_count_), 0);
  for (const auto& e : edges_) {
    ++degree[at(e.u)];
    ++degree[at(e.v)];
  }
  for (const auto& f : faces_)
    for (int v : f.v) ++fan[at(v)];
  vertex_edges_.assign(at(vertex_count_), {});
  vertex_faces_.assign(at(vertex_count_), {});
  for (int v = 0; v < vertex_count_; ++v) {
    vertex_edges_[at(v)].reserve(at(degree[at(v)]));
    vertex_faces_[at(v)].reserve(at(fan[at(v)]));
  }
  for (std::size_t id = 0; id < edges_.size(); ++id) {
    vertex_edges_[at(edges_[id].u)].push_back(static_cast<int>(id));
    vertex_edges_[at(edges_[id].v)].push_back(static_cast<int>(id));
  }
  for (std::size_t f = 0; f < faces_.size(); ++f)
    for (int v : faces_[f].v) vertex_faces_[at(v)].push_back(static_cast<int>(f));
}

void TriMesh::set_marks(std::vector<int> marks) {
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  for (int v : marks)
    if (v < 0 || v >= vertex_count_) fail(ErrorCode::Parse, "marked vertex out of range");
  marks_ = std::move(marks);
  marked_flag_.assign(at(vertex_count_), 0);
  for (int v : marks_) marked_flag_[at(v)] = 1;
}

int TriMesh::find_edge(int u, int v) const {
  if (u < 0 || u >= vertex_count_) return -1;
  for (int id : vertex_edges_[at(u)])
    if (other_end(id, u) == v) return id;
  return -1;
}

int TriMesh::other_end(int id, int vertex) const {
  const auto& e = edges_[at(id)];
  return e.u == vertex ? e.v : e.u;
}

bool TriMesh::is_closed() const {
  for (const auto& s : edge_faces_)
    if (s[1] < 0) return false;
  return true;
}

double TriMesh::face_area(int f) const {
  const auto& face = faces_[at(f)];
  return heron(edges_[at(face.e[0])].length, edges_[at(face.e[1])].length,
               edges_[at(face.e[2])].length);
}

double TriMesh::area() const {
  double s = 0.0;
  for (int f = 0; f < face_count(); ++f) s += face_area(f);
  return s;
}

double TriMesh::max_edge_length() const {
  double m = 0.0;
  for (const auto& e : edges_) m = std::max(m, e.length);
  return m;
}

std::vector<int> TriMesh::face_components(int* count) const {
  DisjointSets dsu(faces_.size());
  for (const auto& s : edge_faces_)
    if (s[1] >= 0) dsu.unite(at(s[0]), at(s[1]));
  std::vector<int> label(faces_.size(), -1);
  std::vector<int> ids(faces_.size(), -1);
  int next = 0;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    int& id = ids[dsu.find(f)];
    if (id < 0) id = next++;
    label[f] = id;
  }
  if (count) *count = next;
  return label;
}

std::vector<int> TriMesh::vertex_components(int* count) const {
  const auto fc = face_components(count);
  std::vector<int> label(at(vertex_count_), -1);
  for (int v = 0; v < vertex_count_; ++v) label[at(v)] = fc[at(vertex_faces_[at(v)].front())];
  return label;
}

int TriMesh::component_count() const {
  int n = 0;
  face_components(&n);
  return n;
}

std::vector<ComponentStats> TriMesh::component_stats() const {
  int n = 0;
  const auto fc = face_components(&n);
  const auto vc = vertex_components();
  std::vector<ComponentStats> out(at(n));
  for (int v = 0; v < vertex_count_; ++v) {
    out[at(vc[at(v)])].vertices++;
    if (is_marked(v)) out[at(vc[at(v)])].marks++;
  }
  for (std::size_t id = 0; id < edges_.size(); ++id) out[at(fc[at(edge_faces_[id][0])])].edges++;
  for (int f = 0; f < face_count(); ++f) {
    out[at(fc[at(f)])].faces++;
    out[at(fc[at(f)])].area += face_area(f);
  }
  for (const auto& cyc : boundary_cycles()) out[at(fc[at(edge_faces_[at(cyc.front())][0])])].boundaries++;
  for (auto& c : out) {
    c.euler = c.vertices - c.edges + c.faces;
    c.genus = (2 - c.euler - c.boundaries) / 2;
  }
  return out;
}

int TriMesh::genus() const {
  int g = 0;
  for (const auto& c : component_stats()) g += c.genus;
  return g;
}

std::vector<std::vector<int>> TriMesh::boundary_cycles() const {
  std::vector<char> used(edges_.size(), 0);
  std::vector<std::vector<int>> out;
  for (std::size_t start = 0; start < edges_.size(); ++start) {
    if (used[start] || edge_faces_[start][1] >= 0) continue;
    std::vector<int> cyc;
    int id = static_cast<int>(start);
    int at_v = edges_[start].v;
    while (!used[at(id)]) {
      used[at(id)] = 1;
      cyc.push_back(id);
      int next = -1;
      for (int cand : vertex_edges_[at(at_v)])
        if (!used[at(cand)] && edge_faces_[at(cand)][1] < 0) {
          next = cand;
          break;
        }
      if (next < 0) break;
      id = next;
      at_v = other_end(id, at_v);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

TriMesh TriMesh::scaled(double s) const {
  TriMesh m = *this;
  for (auto& e : m.edges_) {
    e.length *= s;
    e.length_text.clear();
  }
  for (auto& c : m.coords_)
    for (double& x : c) x *= s;
  return m;
}

std::vector<int> MeshLoop::vertices(const TriMesh& m) const {
  std::vector<int> out{start};
  int v = start;
  for (int id : edges) {
    v = m.other_end(id, v);
    out.push_back(v);
  }
  return out;
}

void check_loop(const TriMesh& m, const MeshLoop& loop) {
  if (loop.edges.empty()) fail(ErrorCode::NotALoop, "empty loop");
  if (loop.start < 0 || loop.start >= m.vertex_count()) fail(ErrorCode::NotALoop, "loop start out of range");
  int v = loop.start;
  for (int id : loop.edges) {
    if (id < 0 || id >= m.edge_count()) fail(ErrorCode::NotALoop, "loop edge out of range");
    const auto& e = m.edge(id);
    if (e.u != v && e.v != v) fail(ErrorCode::NotALoop, "loop edges are not consecutive");
    v = m.other_end(id, v);
  }
  if (v != loop.start) fail(ErrorCode::NotALoop, "walk does not close");
}

MeshLoop loop_from_vertices(const TriMesh& m, std::vector<int> walk) {
  if (walk.size() < 2) fail(ErrorCode::NotALoop, "walk too short");
  if (walk.front() != walk.back()) walk.push_back(walk.front());
  MeshLoop loop;
  loop.start = walk.front();
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    const int id = m.find_edge(walk[i], walk[i + 1]);
    if (id < 0) fail(ErrorCode::NotALoop, "consecutive walk vertices are not adjacent");
    loop.edges.push_back(id);
    loop.length += m.edge(id).length;
  }
  return loop;
}

MeshLoop reduce_loop(const TriMesh& m, const MeshLoop& loop) {
  // Cancel spurs with a stack, then cancel matching ends cyclically.
  std::vector<int> stack;
  for (int id : loop.edges) {
    if (!stack.empty() && stack.back() == id) stack.pop_back();
    else stack.push_back(id);
  }
  std::size_t lo = 0, hi = stack.size();
  int start = loop.start;
  while (hi - lo >= 2 && stack[lo] == stack[hi - 1]) {
    start = m.other_end(stack[lo], start);
    ++lo;
    --hi;
  }
  MeshLoop out;
  out.start = start;
  out.edges.assign(stack.begin() + static_cast<std::ptrdiff_t>(lo),
                   stack.begin() + static_cast<std::ptrdiff_t>(hi));
  for (int id : out.edges) out.length += m.edge(id).length;
  return out;
}

TriMesh refine_midpoint(const TriMesh& m) {
  const int V = m.vertex_count();
  std::vector<MeshEdge> edges;
  // Edge id k splits into 2k (from u) and 2k+1 (from v), midpoint vertex V+k.
  for (int k = 0; k < m.edge_count(); ++k) {
    const auto& e = m.edge(k);
    edges.push_back({e.u, V + k, e.length / 2, {}});
    edges.push_back({V + k, e.v, e.length / 2, {}});
  }
  std::vector<MeshFace> faces;
  auto half = [&](int edge, int vertex) { return m.edge(edge).u == vertex ? 2 * edge : 2 * edge + 1; };
  for (const auto& f : m.faces()) {
    // Midpoints opposite to corner i: mid of e[(i+1)%3].
    std::array<int, 3> inner{};
    for (int i = 0; i < 3; ++i) {
      const int a = f.e[at(i)], b = f.e[at((i + 1) % 3)];
      inner[at(i)] = static_cast<int>(edges.size());
      // joins mid(e[i]) and mid(e[i+1]); parallel to e[i+2]
      edges.push_back({V + a, V + b, m.edge(f.e[at((i + 2) % 3)]).length / 2, {}});
    }
    for (int i = 0; i < 3; ++i) {
      const int vi = f.v[at(i)];
      const int ein = f.e[at(i)], eprev = f.e[at((i + 2) % 3)];
      // corner triangle (v_i, mid(e_i), mid(e_{i-1}))
      faces.push_back({{vi, V + ein, V + eprev}, {half(ein, vi), inner[at((i + 2) % 3)], half(eprev, vi)}});
    }
    faces.push_back({{V + f.e[0], V + f.e[1], V + f.e[2]}, {inner[0], inner[1], inner[2]}});
  }
  std::vector<std::array<double, 3>> coords;
  if (m.has_coords()) {
    coords = m.coords();
    for (const auto& e : m.edges()) {
      const auto& p = m.coords()[at(e.u)];
      const auto& q = m.coords()[at(e.v)];
      coords.push_back({(p[0] + q[0]) / 2, (p[1] + q[1]) / 2, (p[2] + q[2]) / 2});
    }
  }
  return TriMesh::from_faces(V + m.edge_count(), std::move(edges), std::move(faces), m.marks(),
                             std::move(coords), TriMesh::kDerivedSlack);
}

TriMesh read_mesh(std::istream& in) {
  std::string line;
  auto next_line = [&](const char* what) {
    while (std::getline(in, line)) {
      const auto p = line.find_first_not_of(" \t\r");
      if (p != std::string::npos && line[p] != '#') return;
    }
    fail(ErrorCode::Parse, std::string("unexpected end of file reading ") + what);
  };
  next_line("header");
  {
    std::istringstream ls(line);
    std::string tag;
    int version = 0;
    if (!(ls >> tag >> version) || tag != "MMESH" || version != 1)
      fail(ErrorCode::Parse, "expected 'MMESH 1'");
  }
  long long V = -1, E = -1, F = -1, Nm = -1;
  next_line("counts");
  {
    std::istringstream ls(line);
    if (!(ls >> V >> E >> F >> Nm) || V < 0 || E < 0 || F < 0 || Nm < 0)
      fail(ErrorCode::Parse, "expected 'V E F Nm'");
  }
  std::vector<std::array<double, 3>> coords;
  bool any_coords = false;
  for (long long i = 0; i < V; ++i) {
    next_line("vertices");
    std::istringstream ls(line);
    std::string tag;
    long long id = -1;
    if (!(ls >> tag >> id) || tag != "v" || id != i) fail(ErrorCode::Parse, "bad vertex line: " + line);
    std::array<double, 3> c{};
    if (ls >> c[0]) {
      if (!(ls >> c[1] >> c[2])) fail(ErrorCode::Parse, "bad vertex coordinates: " + line);
      any_coords = true;
    }
    coords.push_back(c);
  }
  std::vector<MeshEdge> edges;
  for (long long i = 0; i < E; ++i) {
    next_line("edges");
    std::istringstream ls(line);
    std::string tag, len;
    long long id = -1, u = -1, v = -1;
    if (!(ls >> tag >> id >> u >> v >> len) || tag != "e" || id != i)
      fail(ErrorCode::Parse, "bad edge line: " + line);
    if (u < 0 || v < 0 || u >= V || v >= V) fail(ErrorCode::Parse, "edge endpoint out of range: " + line);
    edges.push_back({static_cast<int>(u), static_cast<int>(v), parse_length(len), len});
  }
  std::vector<std::array<int, 3>> tris;
  for (long long i = 0; i < F; ++i) {
    next_line("faces");
    std::istringstream ls(line);
    std::string tag;
    long long id = -1, a = -1, b = -1, c = -1;
    if (!(ls >> tag >> id >> a >> b >> c) || tag != "f" || id != i)
      fail(ErrorCode::Parse, "bad face line: " + line);
    for (long long x : {a, b, c})
      if (x < 0 || x >= V) fail(ErrorCode::Parse, "face vertex out of range: " + line);
    tris.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)});
  }
  std::vector<int> marks;
  for (long long i = 0; i < Nm; ++i) {
    next_line("marks");
    std::istringstream ls(line);
    std::string tag;
    long long v = -1;
    if (!(ls >> tag >> v) || tag != "m" || v < 0 || v >= V) fail(ErrorCode::Parse, "bad mark line: " + line);
    marks.push_back(static_cast<int>(v));
  }
  if (!any_coords) coords.clear();
  return TriMesh::from_triangles(static_cast<int>(V), std::move(edges), tris, std::move(marks),
                                 std::move(coords));
}

void write_mesh(const TriMesh& m, std::ostream& out) {
  out << "MMESH 1\n";
  out << m.vertex_count() << ' ' << m.edge_count() << ' ' << m.face_count() << ' '
      << m.marks().size() << '\n';
  for (int v = 0; v < m.vertex_count(); ++v) {
    out << "v " << v;
    if (m.has_coords())
      for (double x : m.coords()[at(v)]) out << ' ' << format_double(x);
    out << '\n';
  }
  for (int id = 0; id < m.edge_count(); ++id) {
    const auto& e = m.edge(id);
    out << "e " << id << ' ' << e.u << ' ' << e.v << ' '
        << (e.length_text.empty() ? format_double(e.length) : e.length_text) << '\n';
  }
  for (int f = 0; f < m.face_count(); ++f) {
    const auto& face = m.face(f);
    out << "f " << f << ' ' << face.v[0] << ' ' << face.v[1] << ' ' << face.v[2] << '\n';
  }
  for (int v : m.marks()) out << "m " << v << '\n';
}

TriMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Parse, "cannot open " + path);
  return read_mesh(in);
}

void save_mesh(const TriMesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  write_mesh(m, out);
}

}  // namespace syskit
