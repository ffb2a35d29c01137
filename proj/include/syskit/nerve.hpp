#pragma once

#include <optional>
#include <string>
#include <vector>

#include "syskit/graph.hpp"
#include "syskit/homology.hpp"
#include "syskit/mesh.hpp"

namespace syskit {

struct NerveGraph {
  WeightedGraph graph;  ///< every edge has length ell / 2
  std::vector<int> centers;
  std::vector<std::vector<int>> paths;  ///< mesh edge path per nerve edge, u to v
  std::vector<double> path_length;
  double ell = 0.0;
  double eps = 0.0;
  double r0 = 0.0;
  bool regular = true;
  int irregular_vertices = 0;
};

struct NerveOptions {
  /// Build even when the disk regularity check fails at r0.
  bool allow_irregular = false;
};

NerveGraph build_nerve(const TriMesh& m, double ell, double eps, const NerveOptions& opt = {});

struct MinimizedNerve {
  std::vector<int> kept_edges;     ///< nerve edge ids forming Gamma_1
  std::vector<int> forest_edges;
  std::vector<int> chords;         ///< kept chords, in scan order
  std::vector<Z2Vector> chord_classes;
  int rejected_chords = 0;
  WeightedGraph gamma1;            ///< edge k is nerve edge kept_edges[k]
};

MinimizedNerve minimize_to_homology_iso(const NerveGraph& n, const TriMesh& m, const HomologyBasis& basis);

struct BoundRow {
  int k = 0;
  double length = 0.0;             ///< raw mesh length
  double normalized_length = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct ShortLoopsReport {
  int genus = 0;
  double area = 0.0;
  double scale = 1.0;              ///< length factor of the area normalization
  double ell = 0.0;
  double eps = 0.0;
  double r0 = 0.0;
  double c0 = 0.0;
  int centers = 0;
  int nerve_edges = 0;
  int nerve_betti = 0;
  int gamma1_betti = 0;
  bool regular = true;
  std::vector<MeshLoop> loops;
  std::vector<Z2Vector> classes;
  std::vector<double> graph_lengths;  ///< nerve-cycle lengths (k * ell / 2)
  int rank = 0;
  std::vector<BoundRow> bounds;
  std::optional<double> oracle_length;  ///< when 2g <= 6
};

struct ShortLoopsOptions {
  std::optional<double> eps;  ///< default ell / 64
  bool allow_irregular = false;
  LogBase log_base = LogBase::Natural;
  double c0_numerator = 65536.0;
};

ShortLoopsReport short_homology_loops(const TriMesh& m, double ell, int count,
                                      const ShortLoopsOptions& opt = {});

struct IndependentSystemReport {
  int genus = 0;
  int target = 0;
  double eps_cut = 0.0;
  std::vector<MeshLoop> loops;
  std::vector<Z2Vector> classes;
  std::vector<std::string> phase;  ///< "cut" or "span" per loop
  int rank = 0;
  double lambda = 0.0;
  bool bound_applicable = false;
  double c_lambda = 0.0;
  double bound = 0.0;
  std::vector<bool> pass;
};

struct IndependentSystemOptions {
  double c_lambda_numerator = 262144.0;
};

IndependentSystemReport short_independent_system(const TriMesh& m, int target, double eps_cut,
                                                 const IndependentSystemOptions& opt = {});

/// Lengths of successive shortest loops extending the span (a greedy
/// minimal homology basis), optionally avoiding blocked vertices.
std::vector<double> minimal_basis_lengths(const TriMesh& m, const std::vector<char>* blocked = nullptr);

struct CutAvoidanceReport {
  bool convex = false;      ///< arcs of alpha are shortest paths
  double convexity_gap = 0.0;
  std::vector<double> free_lengths;
  std::vector<double> avoiding_lengths;
  bool equal = false;
};

/// Compares the minimal homology basis with the one avoiding alpha.
CutAvoidanceReport cut_avoidance_check(const TriMesh& m, const MeshLoop& alpha);

}  // namespace syskit
