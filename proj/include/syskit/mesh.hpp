#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace syskit {

struct MeshEdge {
  int u = 0;
  int v = 0;
  double length = 1.0;
  std::string length_text;
};

/// Triangle with vertices in orientation order; e[i] joins v[i] and v[(i+1)%3].
struct MeshFace {
  std::array<int, 3> v{};
  std::array<int, 3> e{};
};

struct ComponentStats {
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int boundaries = 0;
  int marks = 0;
  int euler = 0;
  int genus = 0;
  double area = 0.0;
};

/// Piecewise-flat oriented triangulated surface given by edge lengths.
class TriMesh {
 public:
  TriMesh() = default;

  /// Faces given by vertex triples; edges are looked up by endpoints.
  static TriMesh from_triangles(int vertex_count, std::vector<MeshEdge> edges,
                                const std::vector<std::array<int, 3>>& triangles,
                                std::vector<int> marks = {},
                                std::vector<std::array<double, 3>> coords = {});
  /// Slack for meshes derived from a validated one (cuts, caps, inserted
  /// level loops), whose slivers may be collinear up to rounding.
  static constexpr double kDerivedSlack = 1e-9;

  /// Faces with explicit edge ids (parallel edges allowed). `slack` relaxes
  /// the triangle inequality by that fraction of the perimeter.
  static TriMesh from_faces(int vertex_count, std::vector<MeshEdge> edges,
                            std::vector<MeshFace> faces, std::vector<int> marks = {},
                            std::vector<std::array<double, 3>> coords = {}, double slack = 0.0);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }
  const MeshEdge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }
  const MeshFace& face(int id) const { return faces_[static_cast<std::size_t>(id)]; }
  const std::vector<MeshEdge>& edges() const { return edges_; }
  const std::vector<MeshFace>& faces() const { return faces_; }

  /// -1 when absent.
  int find_edge(int u, int v) const;
  int other_end(int edge, int vertex) const;
  /// Adjacent faces of an edge; second entry is -1 on the boundary.
  const std::array<int, 2>& edge_faces(int edge) const {
    return edge_faces_[static_cast<std::size_t>(edge)];
  }
  const std::vector<int>& vertex_edges(int v) const {
    return vertex_edges_[static_cast<std::size_t>(v)];
  }
  const std::vector<int>& vertex_faces(int v) const {
    return vertex_faces_[static_cast<std::size_t>(v)];
  }
  bool is_boundary_edge(int edge) const { return edge_faces(edge)[1] < 0; }
  bool is_closed() const;

  const std::vector<int>& marks() const { return marks_; }
  bool is_marked(int v) const { return marked_flag_[static_cast<std::size_t>(v)] != 0; }
  void set_marks(std::vector<int> marks);

  bool has_coords() const { return !coords_.empty(); }
  const std::vector<std::array<double, 3>>& coords() const { return coords_; }

  double face_area(int f) const;
  double area() const;
  double max_edge_length() const;
  int euler_characteristic() const { return vertex_count_ - edge_count() + face_count(); }

  /// Face-connected component label per face, and per vertex.
  std::vector<int> face_components(int* count = nullptr) const;
  std::vector<int> vertex_components(int* count = nullptr) const;
  std::vector<ComponentStats> component_stats() const;
  int component_count() const;
  /// Sum of component genera.
  int genus() const;

  /// Boundary cycles as edge lists, each starting at its smallest edge id.
  std::vector<std::vector<int>> boundary_cycles() const;

  /// All lengths multiplied by s (text forms dropped).
  TriMesh scaled(double s) const;

 private:
  void build_incidence();
  void validate(double slack);

  int vertex_count_ = 0;
  std::vector<MeshEdge> edges_;
  std::vector<MeshFace> faces_;
  std::vector<int> marks_;
  std::vector<char> marked_flag_;
  std::vector<std::array<double, 3>> coords_;
  std::vector<std::array<int, 2>> edge_faces_;
  std::vector<std::vector<int>> vertex_edges_;
  std::vector<std::vector<int>> vertex_faces_;
};

/// Closed edge walk; consecutive edges share the walking vertex.
struct MeshLoop {
  int start = 0;
  std::vector<int> edges;
  double length = 0.0;

  /// Vertex sequence including the repeated start at the end.
  std::vector<int> vertices(const TriMesh& m) const;
};

/// Builds a loop from a closed vertex walk (first == last optional).
MeshLoop loop_from_vertices(const TriMesh& m, std::vector<int> walk);
/// Throws NOT_A_LOOP unless the edge walk closes up.
void check_loop(const TriMesh& m, const MeshLoop& loop);
/// Removes immediate back-tracking (e, e) pairs, keeping the walk closed.
MeshLoop reduce_loop(const TriMesh& m, const MeshLoop& loop);
/// Places v2 in the plane given v0 = (0,0), v1 = (a,0); returns {x, y}.
std::array<double, 2> flatten_apex(double a, double b, double c);
double heron(double a, double b, double c);

/// 1:4 subdivision; every edge splits at its midpoint, inner edges are half
/// the parallel side. The intrinsic metric is unchanged. Original vertex ids
/// are kept; new vertex ids follow edge order.
TriMesh refine_midpoint(const TriMesh& m);

TriMesh read_mesh(std::istream& in);
void write_mesh(const TriMesh& m, std::ostream& out);
TriMesh load_mesh(const std::string& path);
void save_mesh(const TriMesh& m, const std::string& path);

}  // namespace syskit
