#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "syskit/mesh.hpp"

namespace syskit {

struct DistanceField {
  std::vector<double> dist;
  std::vector<int> pred_edge;  ///< -1 at sources and unreached vertices
  std::vector<int> owner;      ///< index into the source list, -1 if unreached
};

struct SearchLimits {
  const std::vector<char>* blocked_vertices = nullptr;
  const std::vector<char>* blocked_edges = nullptr;
  double max_distance = std::numeric_limits<double>::infinity();
};

/// Multi-source Dijkstra along mesh edges. A vertex at equal distance from
/// several sources is owned by the lowest source index.
DistanceField mesh_dijkstra(const TriMesh& m, const std::vector<int>& sources,
                            const SearchLimits& limits = {});

/// Edge ids from the owning source to `target`, in walking order.
std::vector<int> trace_path(const TriMesh& m, const DistanceField& field, int target);

/// Distances at the original vertices over the graph of vertices plus
/// 2^steiner - 1 points per edge, joined by straight chords inside faces.
std::vector<double> geodesic_distance(const TriMesh& m, int source, int steiner);

/// Seeds first, then farthest-point order; accepts a vertex when it lies at
/// distance >= 2 r0 from every accepted center. Distances use the Steiner
/// graph of the given level.
std::vector<int> maximal_disk_packing(const TriMesh& m, double r0, const std::vector<int>& seeds = {},
                                      int steiner = 0);

struct VoronoiPartition {
  std::vector<int> centers;
  std::vector<int> owner;        ///< center index per vertex
  std::vector<double> dist;
  std::vector<int> pred_edge;
  /// Mesh edges whose endpoints lie in different cells, grouped per cell.
  std::vector<std::vector<int>> boundary_edges;
  /// (i, j, mesh edge) with i < j realizing the shortest crossing
  /// d_i(u) + |uv| + d_j(v) between adjacent cells.
  struct Link {
    int i = 0;
    int j = 0;
    int edge = -1;
    double length = 0.0;
  };
  std::vector<Link> links;
};

VoronoiPartition voronoi_cells(const TriMesh& m, const std::vector<int>& centers);

struct RegularityReport {
  double radius = 0.0;
  double threshold = 0.0;  ///< radius^2 / 2
  std::vector<double> disk_area;
  std::vector<int> failures;
  bool pass() const { return failures.empty(); }
};

/// Area of {d(v, .) <= R} with d linearly interpolated over faces, compared
/// with R^2/2 at every vertex.
RegularityReport disk_regularity_check(const TriMesh& m, double radius);

/// Area of the sub-level set {x : d(x) <= R} for per-vertex values d.
double sublevel_area(const TriMesh& m, const std::vector<double>& d, double radius);

}  // namespace syskit
