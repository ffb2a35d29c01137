#pragma once

#include <string>
#include <vector>

#include "syskit/mesh.hpp"

namespace syskit {

/// A derived mesh with maps back to its parent. Entries are -1 for
/// cap centers and spokes.
struct DerivedMesh {
  TriMesh mesh;
  std::vector<int> vertex_origin;
  std::vector<int> edge_origin;
  std::vector<int> cap_centers;
};

/// Cuts along the given edges: vertices split into one copy per fan sector,
/// interior cut edges into one copy per side. Faces keep their ids.
DerivedMesh cut_along(const TriMesh& m, const std::vector<int>& cut_edges);

/// Closes every boundary cycle with a flat fan around a new center whose
/// spokes have length max(perimeter / 2pi, 0.525 * longest side).
DerivedMesh cap_boundaries(const TriMesh& m, bool mark_centers);

/// cut_along followed by cap_boundaries, maps composed back to `m`.
DerivedMesh cut_and_cap(const TriMesh& m, const std::vector<int>& cut_edges, bool mark_centers);

/// Composes child maps with a parent's maps (child -> parent -> root).
DerivedMesh compose(const DerivedMesh& parent, DerivedMesh child);

/// The faces of one face-connected component as a mesh of their own.
DerivedMesh extract_component(const TriMesh& m, int component);

/// Maps a loop on a derived mesh to the parent; throws if it uses a spoke.
MeshLoop pull_back(const DerivedMesh& d, const MeshLoop& loop);

enum class PieceType { Pants, Cylinder, Disk, FourHoledSphere, Other };
std::string piece_name(PieceType t);

struct ComponentRecord {
  int euler = 0;
  int boundaries = 0;
  int marks = 0;
  int genus = 0;
  double area = 0.0;
  PieceType type = PieceType::Other;
  std::vector<int> loops;  ///< indices of adjacent loops, one per boundary cycle
};

struct ValidationReport {
  std::vector<ComponentRecord> components;
  bool loops_simple = true;
  bool loops_edge_disjoint = true;
  bool loops_vertex_disjoint = true;
  bool marks_off_loops = true;
  /// Every component is a pair of pants.
  bool valid = false;
  /// Surfaces with 2 - 2g - n >= 0 have no pants decomposition; accepted
  /// when every component is a cylinder or a sphere with at most 3 marks.
  bool degenerate = false;
  bool accepted() const { return valid || degenerate; }
};

PieceType classify(int genus, int boundaries, int marks);

ValidationReport validate_decomposition(const TriMesh& m, const std::vector<MeshLoop>& loops);

/// Drops loops bounding a disk with at most one mark, and one loop of each
/// unmarked cylinder (the longer one), until none remain.
std::vector<MeshLoop> prune_decomposition(const TriMesh& m, std::vector<MeshLoop> loops);

}  // namespace syskit
