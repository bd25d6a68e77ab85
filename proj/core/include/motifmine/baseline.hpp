#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "motifmine/assignment.hpp"
#include "motifmine/dataset.hpp"
#include "motifmine/graph.hpp"

namespace motifmine {

/// All connected induced k-node subgraphs of g (ESU), each as a sorted node
/// list, each exactly once. Requires 1 <= k <= 6. Throws BudgetExceeded once
/// more than `cap` sets have been produced.
std::vector<std::vector<NodeId>> enumerate_connected(const Graph& g, std::size_t k,
                                                     std::size_t cap = SIZE_MAX);

/// Isomorphism class label of the subgraph induced by `nodes` (at most 6):
/// the minimum upper-triangle adjacency bitstring over all vertex orderings,
/// tagged with the node count.
using CanonicalLabel = std::uint32_t;
CanonicalLabel canonical_form(const Graph& g, std::span<const NodeId> nodes);

/// Memoizes canonical labels by the raw adjacency bitstring in the given order.
class CanonicalCache {
 public:
  CanonicalLabel label(const Graph& g, std::span<const NodeId> nodes);

 private:
  std::unordered_map<std::uint32_t, CanonicalLabel> memo_;
};

struct MotifClass {
  CanonicalLabel label = 0;
  std::size_t k = 0;
  std::size_t count_data = 0;
  std::size_t count_null = 0;
  double ratio = 0.0;  // count_data / (count_null + 1)
  std::vector<std::pair<std::size_t, std::vector<NodeId>>> instances;  // (graph, nodes)
};

struct ExactConfig {
  std::size_t k = 4;
  double c = 2.0;
  std::size_t columns = 0;                // top classes kept as columns; 0 means the spec's K
  std::size_t max_subgraphs = 20'000'000; // across data and nulls
};

struct ExactResult {
  std::vector<MotifClass> classes;  // ratio > c, by ratio desc then label asc
  std::vector<AssignmentMatrix> assignments;
};

ExactResult exact_mine(std::span<const Graph> data, std::span<const Graph> nulls, const ExactConfig& config,
                       std::size_t jobs = 1);
ExactResult exact_mine(const DatasetBundle& data, const ExactConfig& config, std::size_t jobs = 1);

/// label,k,count_data,count_null,ratio
std::string classes_csv(std::span<const MotifClass> classes);

}  // namespace motifmine
