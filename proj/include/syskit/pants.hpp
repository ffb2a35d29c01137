#pragma once

#include <string>
#include <utility>
#include <vector>

#include "syskit/mesh.hpp"
#include "syskit/surgery.hpp"

namespace syskit {

/// A named inequality lhs <= rhs with its outcome.
struct Audit {
  std::string name;
  std::string anchor;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  bool applicable = true;
};

Audit make_audit(std::string name, std::string anchor, double lhs, double rhs);

/// Loops live on `mesh`, a refinement of the input surface that keeps the
/// input vertex ids (levels and midpoints are appended).
struct PantsDecomposition {
  TriMesh mesh;
  std::vector<MeshLoop> loops;
  std::vector<std::string> provenance;  ///< one tag per loop
  ValidationReport validation;
  double total_length = 0.0;
  double max_length = 0.0;
  int refinements = 0;
  std::vector<Audit> audits;
  std::vector<std::pair<std::string, double>> deviations;

  bool valid() const { return validation.valid; }
  bool degenerate() const { return validation.degenerate; }
};

/// Recomputes validation, total and max length.
void finalize(PantsDecomposition& d);

// ---------------------------------------------------------------------------
// Reeb graph of a PL function

struct ReebNode {
  int vertex = 0;
  double value = 0.0;
  int down = 0;  ///< level components merging into the node from below
  int up = 0;
  bool marked = false;
};

/// A point of a level loop on mesh edge `edge` at parameter `s` from
/// edge.u; `face` holds the segment to the next point.
struct LevelPoint {
  int edge = 0;
  double s = 0.0;
  int face = 0;
};

struct ReebArc {
  int lower = 0;  ///< node index
  int upper = 0;
  double mid = 0.0;  ///< level of the representative loop
  std::vector<LevelPoint> loop;  ///< cyclic order
  double loop_length = 0.0;
};

struct ReebGraph {
  std::vector<double> values;  ///< perturbed vertex values
  std::vector<ReebNode> nodes;
  std::vector<ReebArc> arcs;
  int betti() const { return static_cast<int>(arcs.size()) - static_cast<int>(nodes.size()) + 1; }
};

/// Values f(v) + v * 1e-12 * range, checked finite.
std::vector<double> perturbed_values(const std::vector<double>& f);

ReebGraph reeb_graph(const TriMesh& m, const std::vector<double>& f);

/// sup_t length f^{-1}(t), evaluated on both sides of every vertex value.
double sweep_width(const TriMesh& m, const std::vector<double>& f);

/// Coordinate height ("x", "y", "z") or graph distance from vertex 0 ("dist").
std::vector<double> height_function(const TriMesh& m, const std::string& kind);

/// Inserts the given level loops as edge paths. Returned loops follow the
/// input order.
struct LevelRefinement {
  TriMesh mesh;
  std::vector<MeshLoop> loops;
};
LevelRefinement insert_level_loops(const TriMesh& m, const std::vector<std::vector<LevelPoint>>& loops);

PantsDecomposition reeb_pants_decomposition(const TriMesh& m, const std::vector<double>& f);

// ---------------------------------------------------------------------------
// Marked spheres

struct MarkedSphereOptions {
  /// <= 0 selects twice the smallest pairwise mark distance.
  double ell = 0.0;
  int max_refinements = 3;
  /// Marks that are cap centers; loops stay off their caps.
  std::vector<int> caps;
};

struct MarkedSphereReport {
  PantsDecomposition decomposition;
  double ell = 0.0;
  double r0 = 0.0;
  int kappa = 0;
  int centers = 0;
  double graph_length = 0.0;
  double tree_length = 0.0;
  double gamma_length = 0.0;
  std::vector<int> order;  ///< marks in tour order
  double delta_corridor = 0.0;
};

int nesting_depth(int n);

MarkedSphereReport marked_sphere_decomposition(const TriMesh& s, const MarkedSphereOptions& opt = {});

/// Adds loops inside genus-0 components with four or more boundaries plus
/// marks, using the marked-sphere construction on each capped component.
/// Throws REFINEMENT_NEEDED when a component is too coarse.
void complete_decomposition(PantsDecomposition& d);

// ---------------------------------------------------------------------------
// Closed surfaces of genus g

struct GenusOptions {
  double ell = 1.0;
  /// Caller constant for total <= C n log(n + 1); not checked when <= 0.
  double c_g = 0.0;
  int max_refinements = 3;
};

struct GenusReport {
  PantsDecomposition decomposition;
  int genus = 0;
  int marks = 0;
  double scale = 1.0;  ///< lengths are in units of the normalized surface
  int steps = 0;
  std::vector<std::string> signatures;
};

GenusReport genus_surface_decomposition(const TriMesh& m, const GenusOptions& opt = {});

/// g loops of a valid decomposition with independent Z2 classes.
std::vector<MeshLoop> extract_independent_from_pants(const TriMesh& m, const std::vector<MeshLoop>& loops);

// ---------------------------------------------------------------------------
// Hyperelliptic double covers

struct DoubleCover {
  TriMesh mesh;
  std::vector<int> vertex_base;  ///< base vertex under each cover vertex
  std::vector<int> edge_base;
};

/// Branched double cover; sheets swap across cocycle edges. Throws
/// BAD_BRANCH_DATA unless the holonomy is odd exactly around the marks.
DoubleCover build_double_cover(const TriMesh& base, const std::vector<int>& cocycle);

/// Lifts of a loop avoiding the marks: two loops or one of double length.
std::vector<MeshLoop> lift_loop(const DoubleCover& cover, const TriMesh& base, const MeshLoop& loop);

struct LiftOptions {
  double c = 1024.0;
  int max_refinements = 3;
};

struct LiftReport {
  MarkedSphereReport base;
  DoubleCover cover;
  int cover_genus = 0;
  int lifted_count = 0;
  PantsDecomposition decomposition;
  std::vector<Audit> audits;
};

LiftReport lift_through_double_cover(const TriMesh& sphere, const std::vector<int>& cocycle,
                                     const LiftOptions& opt = {});

}  // namespace syskit
