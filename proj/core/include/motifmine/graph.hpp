#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace motifmine {

using NodeId = std::size_t;

/// Unordered edge stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph with an optional |V| x d node feature matrix.
///
/// Adjacency lists are kept sorted so that iteration order, and therefore
/// everything built on top of it, is deterministic. No self loops and no
/// parallel edges are ever stored.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t num_nodes);

  /// Builds a graph from an edge list. Throws ConfigError on self loops,
  /// duplicates or out-of-range indices.
  static Graph from_edges(std::size_t num_nodes, std::span<const Edge> edges);

  std::size_t num_nodes() const { return adjacency_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  bool has_edge(NodeId u, NodeId v) const;
  /// Returns false when the edge already exists.
  bool add_edge(NodeId u, NodeId v);
  /// Returns false when the edge was absent.
  bool remove_edge(NodeId u, NodeId v);

  std::span<const NodeId> neighbors(NodeId u) const { return adjacency_[u]; }
  std::size_t degree(NodeId u) const { return adjacency_[u].size(); }
  std::vector<std::size_t> degrees() const;

  /// All edges, u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

  const Eigen::MatrixXd& features() const { return features_; }
  void set_features(Eigen::MatrixXd features);
  std::size_t feature_dim() const { return static_cast<std::size_t>(features_.cols()); }

  /// Induced subgraph; node i of the result is nodes[i]. Feature rows follow.
  Graph induced_subgraph(std::span<const NodeId> nodes) const;

  bool is_connected() const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  void check_node(NodeId u) const;

  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t num_edges_ = 0;
  Eigen::MatrixXd features_ = Eigen::MatrixXd(0, 0);
};

/// True when the node subset induces a connected subgraph of g.
/// The empty set counts as not connected.
bool induces_connected(const Graph& g, std::span<const NodeId> nodes);

/// Brute-force isomorphism test over all vertex permutations, for small
/// graphs (n <= 10). Structure only; features are ignored.
bool isomorphic_bruteforce(const Graph& a, const Graph& b);

}  // namespace motifmine
