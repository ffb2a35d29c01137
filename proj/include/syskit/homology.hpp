#pragma once

#include <optional>
#include <vector>

#include "syskit/mesh.hpp"
#include "syskit/z2.hpp"

namespace syskit {

/// Tree-cotree decomposition of a closed oriented mesh. Every edge carries a
/// Z2 label of dimension 2g; the class of a loop is the sum of its labels.
struct HomologyBasis {
  int dim = 0;
  std::vector<int> tree_edges;
  std::vector<int> cotree_edges;
  std::vector<int> signature_edges;
  std::vector<Z2Vector> edge_label;
};

HomologyBasis tree_cotree_basis(const TriMesh& m);

Z2Vector homology_class(const TriMesh& m, const HomologyBasis& basis, const MeshLoop& loop);

/// Loop made of the tree path between the ends of signature edge i plus the edge.
MeshLoop signature_loop(const TriMesh& m, const HomologyBasis& basis, int i);

struct LoopSearchResult {
  double length = 0.0;
  MeshLoop loop;
  Z2Vector cls;
};

struct LoopConstraints {
  /// Accept only classes outside this span; null means "nonzero".
  const Z2Basis* span = nullptr;
  const std::vector<char>* blocked_vertices = nullptr;
  const std::vector<char>* blocked_edges = nullptr;
};

/// Dijkstra on (vertex, label) pairs. Exact for the edge-graph metric.
/// Requires 2g <= 6.
std::optional<LoopSearchResult> product_graph_search(const TriMesh& m, const HomologyBasis& basis,
                                                     const LoopConstraints& c = {});

/// Same answer as the product search for any genus: the minimum over roots s
/// and non-tree edges of the fundamental loops of shortest-path trees.
std::optional<LoopSearchResult> shortest_loop_outside(const TriMesh& m, const HomologyBasis& basis,
                                                      const LoopConstraints& c = {});

/// Shortest homologically nontrivial loop; throws GENUS_TOO_LARGE or
/// NO_NONTRIVIAL_CLASS.
LoopSearchResult shortest_nontrivial_loop_oracle(const TriMesh& m);

}  // namespace syskit
