#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "motifmine/assignment.hpp"
#include "motifmine/generators.hpp"
#include "motifmine/graph.hpp"
#include "motifmine/parallel.hpp"

namespace motifmine {

/// Parameters of the planted motifs in a synthetic dataset.
struct MotifSpec {
  Topology topology = Topology::clique;
  std::size_t size = 5;
  std::size_t count = 1;         // K distinct motifs
  double concentration = 1.0;    // fraction of graphs containing each motif
  double distortion = 0.0;       // per-edge distortion probability epsilon

  /// Throws ConfigError / InvalidSize.
  void validate() const;
  friend bool operator==(const MotifSpec&, const MotifSpec&) = default;
};

/// Host edge probability, also used for motif-host cross edges.
inline constexpr double kHostEdgeProbability = 0.1;

struct DatasetBundle {
  std::vector<Graph> graphs;
  std::vector<AssignmentMatrix> truth;  // binary, |V_i| x K
  std::vector<Graph> nulls;             // degree-preserving rewired twins
  MotifSpec spec;
  std::uint64_t seed = 0;

  std::size_t size() const { return graphs.size(); }
  /// Whether graph i carries at least one planted motif.
  bool has_motif(std::size_t i) const;
  /// Checks the bundle invariants; throws ConfigError on violation.
  void validate() const;
};

/// The K motif templates used by a dataset; fixed per (spec, seed).
std::vector<Graph> motif_templates(const MotifSpec& spec, std::uint64_t seed);

/// Builds a synthetic dataset. Graph i uses the stream derived from (seed, i),
/// so the result does not depend on `jobs`.
///
/// Each graph starts as G(2 * size * K, 0.1). Each motif is planted
/// independently with probability `concentration` into a fresh replacement
/// site, distorted with `distortion`, and recorded in its own truth column.
/// The null twin is the graph after 10 * |E| attempted double edge swaps.
DatasetBundle build_dataset(const MotifSpec& spec, std::size_t n_graphs, std::uint64_t seed,
                            std::size_t jobs = 1);

nlohmann::json to_json(const MotifSpec& spec);
MotifSpec motif_spec_from_json(const nlohmann::json& j);

/// {"n": n, "edges": [[u,v], ...]} with u < v, lexicographically sorted.
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

/// {spec, seed, graphs, truth, nulls}; truth entries are row-major 0/1 arrays.
nlohmann::json to_json(const DatasetBundle& bundle);
DatasetBundle dataset_from_json(const nlohmann::json& j);

void save_dataset(const DatasetBundle& bundle, const std::string& path);
DatasetBundle load_dataset(const std::string& path);

}  // namespace motifmine
