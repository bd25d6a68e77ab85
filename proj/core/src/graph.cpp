#include "motifmine/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "motifmine/errors.hpp"

namespace motifmine {

Graph::Graph(std::size_t num_nodes)
    : adjacency_(num_nodes), features_(Eigen::MatrixXd(num_nodes, 0)) {}

Graph Graph::from_edges(std::size_t num_nodes, std::span<const Edge> edges) {
  Graph g(num_nodes);
  for (const Edge& e : edges) {
    if (!g.add_edge(e.u, e.v)) {
      throw ConfigError("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
  }
  return g;
}

void Graph::check_node(NodeId u) const {
  if (u >= adjacency_.size()) {
    throw ConfigError("node index " + std::to_string(u) + " out of range for graph with " +
                      std::to_string(adjacency_.size()) + " nodes");
  }
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= adjacency_.size() || v >= adjacency_.size()) return false;
  const auto& a = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
  const NodeId other = &a == &adjacency_[u] ? v : u;
  return std::binary_search(a.begin(), a.end(), other);
}

bool Graph::add_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) throw ConfigError("self loop on node " + std::to_string(u));
  auto& au = adjacency_[u];
  auto it = std::lower_bound(au.begin(), au.end(), v);
  if (it != au.end() && *it == v) return false;
  au.insert(it, v);
  auto& av = adjacency_[v];
  av.insert(std::lower_bound(av.begin(), av.end(), u), u);
  ++num_edges_;
  return true;
}

bool Graph::remove_edge(NodeId u, NodeId v) {
  if (u >= adjacency_.size() || v >= adjacency_.size()) return false;
  auto& au = adjacency_[u];
  auto it = std::lower_bound(au.begin(), au.end(), v);
  if (it == au.end() || *it != v) return false;
  au.erase(it);
  auto& av = adjacency_[v];
  av.erase(std::lower_bound(av.begin(), av.end(), u));
  --num_edges_;
  return true;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> out(adjacency_.size());
  for (std::size_t i = 0; i < adjacency_.size(); ++i) out[i] = adjacency_[i].size();
  return out;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

void Graph::set_features(Eigen::MatrixXd features) {
  if (static_cast<std::size_t>(features.rows()) != num_nodes()) {
    throw DimensionMismatch("feature matrix has " + std::to_string(features.rows()) +
                            " rows, graph has " + std::to_string(num_nodes()) + " nodes");
  }
  features_ = std::move(features);
}

Graph Graph::induced_subgraph(std::span<const NodeId> nodes) const {
  Graph sub(nodes.size());
  std::vector<std::size_t> position(num_nodes(), nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    check_node(nodes[i]);
    position[nodes[i]] = i;
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (NodeId w : adjacency_[nodes[i]]) {
      const std::size_t j = position[w];
      if (j < nodes.size() && i < j) sub.add_edge(i, j);
    }
  }
  Eigen::MatrixXd feats(nodes.size(), features_.cols());
  for (std::size_t i = 0; i < nodes.size(); ++i) feats.row(i) = features_.row(nodes[i]);
  sub.features_ = std::move(feats);
  return sub;
}

bool Graph::is_connected() const {
  std::vector<NodeId> all(num_nodes());
  std::iota(all.begin(), all.end(), NodeId{0});
  return induces_connected(*this, all);
}

bool operator==(const Graph& a, const Graph& b) {
  return a.adjacency_ == b.adjacency_ && a.features_.rows() == b.features_.rows() &&
         a.features_.cols() == b.features_.cols() && a.features_ == b.features_;
}

bool induces_connected(const Graph& g, std::span<const NodeId> nodes) {
  if (nodes.empty()) return false;
  std::vector<char> in_set(g.num_nodes(), 0);
  for (NodeId u : nodes) in_set[u] = 1;
  std::vector<char> seen(g.num_nodes(), 0);
  std::vector<NodeId> stack{nodes.front()};
  seen[nodes.front()] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (NodeId w : g.neighbors(u)) {
      if (in_set[w] && !seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  std::size_t distinct = 0;
  for (char c : in_set) distinct += c;
  return reached == distinct;
}

namespace {

bool extend_mapping(const Graph& a, const Graph& b, std::vector<NodeId>& map,
                    std::vector<char>& used, std::size_t depth) {
  const std::size_t n = a.num_nodes();
  if (depth == n) return true;
  for (NodeId cand = 0; cand < n; ++cand) {
    if (used[cand] || a.degree(depth) != b.degree(cand)) continue;
    bool consistent = true;
    for (NodeId prev = 0; prev < depth && consistent; ++prev) {
      consistent = a.has_edge(depth, prev) == b.has_edge(cand, map[prev]);
    }
    if (!consistent) continue;
    map[depth] = cand;
    used[cand] = 1;
    if (extend_mapping(a, b, map, used, depth + 1)) return true;
    used[cand] = 0;
  }
  return false;
}

}  // namespace

bool isomorphic_bruteforce(const Graph& a, const Graph& b) {
  if (a.num_nodes() != b.num_nodes() || a.num_edges() != b.num_edges()) return false;
  auto da = a.degrees();
  auto db = b.degrees();
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  if (da != db) return false;
  std::vector<NodeId> map(a.num_nodes());
  std::vector<char> used(a.num_nodes(), 0);
  return extend_mapping(a, b, map, used, 0);
}

}  // namespace motifmine
