#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "syskit/z2.hpp"

namespace syskit {

struct GraphEdge {
  int u = 0;
  int v = 0;
  double length = 1.0;
  /// Decimal text the length was parsed from; empty when computed.
  std::string length_text;
};

/// Finite undirected multigraph with positive edge lengths. Self-loops and
/// parallel edges are allowed.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(int vertex_count) : vertex_count_(vertex_count) {}

  int add_edge(int u, int v, double length, std::string length_text = {});

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const GraphEdge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }
  const std::vector<GraphEdge>& edges() const { return edges_; }

  double total_length() const;
  int component_count() const;
  /// e - v + c.
  int betti_number() const;

  /// Same vertex set, with the listed edge ids removed. Edge ids of the
  /// survivors are renumbered; `kept` receives old ids in new order.
  WeightedGraph without_edges(const std::vector<int>& removed,
                              std::vector<int>* kept = nullptr) const;

 private:
  int vertex_count_ = 0;
  std::vector<GraphEdge> edges_;
};

/// Closed walk in a WeightedGraph, stored as consecutive edge ids starting
/// and ending at `start`.
struct GraphCycle {
  int start = 0;
  std::vector<int> edges;
  double length = 0.0;

  std::vector<int> vertices(const WeightedGraph& g) const;
  /// Z2 incidence vector over the edge set of g.
  Z2Vector edge_vector(const WeightedGraph& g) const;
};

struct SystoleResult {
  double length = 0.0;
  GraphCycle cycle;
};

SystoleResult graph_systole(const WeightedGraph& g);

enum class LogBase { Natural, Two };

/// Bollobas-Szemeredi-Thomason bound 4 log(1+b)/b * length(G).
double bst_bound(const WeightedGraph& g, LogBase base = LogBase::Natural);
/// The bound with explicit Betti number and total length.
double bst_bound_value(int betti, double total_length, LogBase base = LogBase::Natural);

struct GreedyStep {
  GraphCycle cycle;          ///< edge ids refer to the ORIGINAL graph
  int removed_edge = -1;     ///< original edge id removed after this step
  int betti_before = 0;
  double graph_length_before = 0.0;
  double step_bound = 0.0;   ///< 4 ln(1+b_k)/b_k * length(G_k)
};

std::vector<GreedyStep> greedy_systolic_sequence(const WeightedGraph& g, int count,
                                                 LogBase base = LogBase::Natural);

/// Kruskal by (length, id). Returns edge ids.
std::vector<int> minimum_spanning_tree(const WeightedGraph& g);

/// Shortest paths from `source`; `skip_edge` is ignored during relaxation.
struct ShortestPaths {
  std::vector<double> dist;
  std::vector<int> pred_edge;  ///< -1 at the source and unreachable vertices
};
ShortestPaths dijkstra(const WeightedGraph& g, int source, int skip_edge = -1);

// WGRAPH text format.
WeightedGraph read_wgraph(std::istream& in);
void write_wgraph(const WeightedGraph& g, std::ostream& out);
WeightedGraph load_wgraph(const std::string& path);
void save_wgraph(const WeightedGraph& g, const std::string& path);

/// Formats a double with 17 significant digits.
std::string format_double(double x, int digits = 17);

}  // namespace syskit
