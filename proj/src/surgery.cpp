#include "syskit/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "syskit/dsu.hpp"
#include "syskit/error.hpp"

namespace syskit {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

int corner(int f, int i) { return 3 * f + i; }

int local_vertex(const MeshFace& f, int v) {
  for (int i = 0; i < 3; ++i)
    if (f.v[at(i)] == v) return i;
  return -1;
}

}  // namespace

DerivedMesh cut_along(const TriMesh& m, const std::vector<int>& cut_edges) {
  std::vector<char> cut(at(m.edge_count()), 0);
  for (int id : cut_edges) cut[at(id)] = 1;
  const int F = m.face_count();
  DisjointSets dsu(at(3 * F));
  for (int id = 0; id < m.edge_count(); ++id) {
    const auto& ef = m.edge_faces(id);
    if (cut[at(id)] || ef[1] < 0) continue;
    for (int x : {m.edge(id).u, m.edge(id).v})
      dsu.unite(at(corner(ef[0], local_vertex(m.face(ef[0]), x))),
                at(corner(ef[1], local_vertex(m.face(ef[1]), x))));
  }
  // New vertex ids ordered by (parent vertex, smallest corner).
  std::vector<std::size_t> root_of(at(3 * F));
  std::vector<int> min_corner(at(3 * F), -1);
  std::vector<std::pair<int, int>> order;
  for (int c = 0; c < 3 * F; ++c) {
    root_of[at(c)] = dsu.find(at(c));
    if (min_corner[root_of[at(c)]] < 0) {
      min_corner[root_of[at(c)]] = c;
      order.emplace_back(m.face(c / 3).v[at(c % 3)], c);
    }
  }
  std::sort(order.begin(), order.end());
  std::vector<int> new_id(at(3 * F), -1);
  DerivedMesh d;
  for (const auto& [v, c] : order) {
    new_id[root_of[at(c)]] = static_cast<int>(d.vertex_origin.size());
    d.vertex_origin.push_back(v);
  }
  auto vertex_of = [&](int f, int v) { return new_id[root_of[at(corner(f, local_vertex(m.face(f), v)))]]; };

  std::vector<MeshEdge> edges;
  std::vector<std::array<int, 2>> copy(at(m.edge_count()), {-1, -1});
  for (int id = 0; id < m.edge_count(); ++id) {
    const auto& e = m.edge(id);
    const auto& ef = m.edge_faces(id);
    const int sides = (cut[at(id)] && ef[1] >= 0) ? 2 : 1;
    for (int s = 0; s < sides; ++s) {
      copy[at(id)][at(s)] = static_cast<int>(edges.size());
      edges.push_back({vertex_of(ef[at(s)], e.u), vertex_of(ef[at(s)], e.v), e.length, e.length_text});
      d.edge_origin.push_back(id);
    }
  }
  std::vector<MeshFace> faces;
  for (int f = 0; f < F; ++f) {
    MeshFace nf;
    const auto& face = m.face(f);
    for (int i = 0; i < 3; ++i) {
      nf.v[at(i)] = vertex_of(f, face.v[at(i)]);
      const int id = face.e[at(i)];
      const int side = (copy[at(id)][1] >= 0 && m.edge_faces(id)[1] == f) ? 1 : 0;
      nf.e[at(i)] = copy[at(id)][at(side)];
    }
    faces.push_back(nf);
  }
  std::vector<int> marks;
  for (std::size_t v = 0; v < d.vertex_origin.size(); ++v)
    if (m.is_marked(d.vertex_origin[v])) marks.push_back(static_cast<int>(v));
  std::vector<std::array<double, 3>> coords;
  if (m.has_coords())
    for (int v : d.vertex_origin) coords.push_back(m.coords()[at(v)]);
  d.mesh = TriMesh::from_faces(static_cast<int>(d.vertex_origin.size()), std::move(edges), std::move(faces),
                               std::move(marks), std::move(coords), TriMesh::kDerivedSlack);
  return d;
}

DerivedMesh cap_boundaries(const TriMesh& m, bool mark_centers) {
  DerivedMesh d;
  std::vector<MeshEdge> edges = m.edges();
  std::vector<MeshFace> faces = m.faces();
  std::vector<int> marks = m.marks();
  std::vector<std::array<double, 3>> coords = m.coords();
  int V = m.vertex_count();
  for (int v = 0; v < V; ++v) d.vertex_origin.push_back(v);
  for (int id = 0; id < m.edge_count(); ++id) d.edge_origin.push_back(id);
  for (const auto& cyc : m.boundary_cycles()) {
    double perimeter = 0.0, longest = 0.0;
    std::array<double, 3> centroid{0, 0, 0};
    std::set<int> ring;
    for (int id : cyc) {
      perimeter += m.edge(id).length;
      longest = std::max(longest, m.edge(id).length);
      ring.insert(m.edge(id).u);
      ring.insert(m.edge(id).v);
    }
    const double radius = std::max(perimeter / (2 * std::numbers::pi), 0.525 * longest);
    const int c = V++;
    d.cap_centers.push_back(c);
    d.vertex_origin.push_back(-1);
    if (mark_centers) marks.push_back(c);
    if (!coords.empty()) {
      for (int v : ring)
        for (int k = 0; k < 3; ++k) centroid[at(k)] += coords[at(v)][at(k)] / static_cast<double>(ring.size());
      coords.push_back(centroid);
    }
    std::map<int, int> spoke;
    for (int v : ring) {
      spoke[v] = static_cast<int>(edges.size());
      edges.push_back({v, c, radius, {}});
      d.edge_origin.push_back(-1);
    }
    for (int id : cyc) {
      const int f = m.edge_faces(id)[0];
      const auto& face = m.face(f);
      int a = -1, b = -1;
      for (int i = 0; i < 3; ++i)
        if (face.e[at(i)] == id) {
          a = face.v[at(i)];
          b = face.v[at((i + 1) % 3)];
        }
      // Opposite direction to the adjacent face: (b, a, c).
      faces.push_back({{b, a, c}, {id, spoke[a], spoke[b]}});
    }
  }
  d.mesh = TriMesh::from_faces(V, std::move(edges), std::move(faces), std::move(marks), std::move(coords),
                               TriMesh::kDerivedSlack);
  return d;
}

DerivedMesh compose(const DerivedMesh& parent, DerivedMesh child) {
  for (int& v : child.vertex_origin)
    if (v >= 0) v = parent.vertex_origin[at(v)];
  for (int& e : child.edge_origin)
    if (e >= 0) e = parent.edge_origin[at(e)];
  return child;
}

DerivedMesh cut_and_cap(const TriMesh& m, const std::vector<int>& cut_edges, bool mark_centers) {
  DerivedMesh cut = cut_along(m, cut_edges);
  DerivedMesh capped = cap_boundaries(cut.mesh, mark_centers);
  auto centers = capped.cap_centers;
  capped = compose(cut, std::move(capped));
  capped.cap_centers = std::move(centers);
  return capped;
}

DerivedMesh extract_component(const TriMesh& m, int component) {
  const auto fc = m.face_components();
  DerivedMesh d;
  std::vector<int> vmap(at(m.vertex_count()), -1), emap(at(m.edge_count()), -1);
  std::vector<MeshEdge> edges;
  std::vector<MeshFace> faces;
  std::vector<std::array<double, 3>> coords;
  auto vertex = [&](int v) {
    if (vmap[at(v)] < 0) {
      vmap[at(v)] = static_cast<int>(d.vertex_origin.size());
      d.vertex_origin.push_back(v);
      if (m.has_coords()) coords.push_back(m.coords()[at(v)]);
    }
    return vmap[at(v)];
  };
  for (int f = 0; f < m.face_count(); ++f) {
    if (fc[at(f)] != component) continue;
    MeshFace nf;
    for (int i = 0; i < 3; ++i) {
      nf.v[at(i)] = vertex(m.face(f).v[at(i)]);
      const int id = m.face(f).e[at(i)];
      if (emap[at(id)] < 0) {
        emap[at(id)] = static_cast<int>(edges.size());
        MeshEdge e = m.edge(id);
        e.u = vertex(e.u);
        e.v = vertex(e.v);
        edges.push_back(e);
        d.edge_origin.push_back(id);
      }
      nf.e[at(i)] = emap[at(id)];
    }
    faces.push_back(nf);
  }
  std::vector<int> marks;
  for (int v : m.marks())
    if (vmap[at(v)] >= 0) marks.push_back(vmap[at(v)]);
  d.mesh = TriMesh::from_faces(static_cast<int>(d.vertex_origin.size()), std::move(edges), std::move(faces),
                               std::move(marks), std::move(coords), TriMesh::kDerivedSlack);
  return d;
}

MeshLoop pull_back(const DerivedMesh& d, const MeshLoop& loop) {
  MeshLoop out;
  out.start = d.vertex_origin[at(loop.start)];
  if (out.start < 0) fail(ErrorCode::Internal, "loop starts at a cap center");
  for (int id : loop.edges) {
    const int e = d.edge_origin[at(id)];
    if (e < 0) fail(ErrorCode::Internal, "loop crosses a cap");
    out.edges.push_back(e);
  }
  out.length = loop.length;
  return out;
}

std::string piece_name(PieceType t) {
  switch (t) {
    case PieceType::Pants: return "pants";
    case PieceType::Cylinder: return "cylinder";
    case PieceType::Disk: return "disk";
    case PieceType::FourHoledSphere: return "four-holed-sphere";
    case PieceType::Other: return "other";
  }
  return "other";
}

PieceType classify(int genus, int boundaries, int marks) {
  if (genus != 0) return PieceType::Other;
  switch (boundaries + marks) {
    case 1: return PieceType::Disk;
    case 2: return PieceType::Cylinder;
    case 3: return PieceType::Pants;
    case 4: return PieceType::FourHoledSphere;
    default: return PieceType::Other;
  }
}

ValidationReport validate_decomposition(const TriMesh& m, const std::vector<MeshLoop>& loops) {
  ValidationReport r;
  std::vector<int> edge_owner(at(m.edge_count()), -1);
  std::vector<int> vertex_owner(at(m.vertex_count()), -1);
  std::vector<int> cut_edges;
  for (std::size_t k = 0; k < loops.size(); ++k) {
    check_loop(m, loops[k]);
    auto vs = loops[k].vertices(m);
    vs.pop_back();
    std::set<int> distinct(vs.begin(), vs.end());
    if (distinct.size() != vs.size()) r.loops_simple = false;
    for (int v : distinct) {
      if (m.is_marked(v)) r.marks_off_loops = false;
      if (vertex_owner[at(v)] >= 0 && vertex_owner[at(v)] != static_cast<int>(k)) r.loops_vertex_disjoint = false;
      vertex_owner[at(v)] = static_cast<int>(k);
    }
    for (int id : loops[k].edges) {
      if (edge_owner[at(id)] >= 0 && edge_owner[at(id)] != static_cast<int>(k)) r.loops_edge_disjoint = false;
      if (edge_owner[at(id)] < 0) cut_edges.push_back(id);
      edge_owner[at(id)] = static_cast<int>(k);
    }
  }
  const DerivedMesh cut = cut_along(m, cut_edges);
  const auto stats = cut.mesh.component_stats();
  const auto fc = cut.mesh.face_components();
  for (const auto& s : stats) {
    ComponentRecord c;
    c.euler = s.euler;
    c.boundaries = s.boundaries;
    c.marks = s.marks;
    c.genus = s.genus;
    c.area = s.area;
    c.type = classify(s.genus, s.boundaries, s.marks);
    r.components.push_back(c);
  }
  for (const auto& cyc : cut.mesh.boundary_cycles()) {
    const int comp = fc[at(cut.mesh.edge_faces(cyc.front())[0])];
    r.components[at(comp)].loops.push_back(edge_owner[at(cut.edge_origin[at(cyc.front())])]);
  }
  const bool clean = r.loops_simple && r.loops_edge_disjoint && r.marks_off_loops;
  r.valid = clean && !r.components.empty();
  for (const auto& c : r.components)
    if (c.type != PieceType::Pants) r.valid = false;
  // Closed surfaces with chi - n >= 0 admit no pants; accept genus-0 pieces.
  if (clean && !r.valid && m.component_count() == 1) {
    const auto whole = m.component_stats().front();
    bool pieces_ok = true;
    for (const auto& c : r.components)
      if (c.genus != 0 || c.boundaries + c.marks > 3) pieces_ok = false;
    // Torus: one cutting loop; sphere with at most 3 marks: none.
    const std::size_t expected = whole.genus == 1 ? 1 : 0;
    r.degenerate = whole.boundaries == 0 && whole.euler - whole.marks >= 0 && pieces_ok &&
                   loops.size() == expected;
  }
  return r;
}

std::vector<MeshLoop> prune_decomposition(const TriMesh& m, std::vector<MeshLoop> loops) {
  while (true) {
    const auto r = validate_decomposition(m, loops);
    int drop = -1;
    for (const auto& c : r.components) {
      if (c.genus != 0) continue;
      if (c.boundaries == 1 && c.marks <= 1) {
        drop = c.loops.front();
        break;
      }
      if (c.boundaries == 2 && c.marks == 0 && c.loops[0] != c.loops[1]) {
        const int a = c.loops[0], b = c.loops[1];
        drop = loops[at(a)].length > loops[at(b)].length ? a : (loops[at(b)].length > loops[at(a)].length ? b : std::max(a, b));
        break;
      }
    }
    if (drop < 0) return loops;
    loops.erase(loops.begin() + drop);
  }
}

}  // namespace syskit
