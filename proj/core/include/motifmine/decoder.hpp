#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "motifmine/assignment.hpp"
#include "motifmine/dataset.hpp"
#include "motifmine/miner.hpp"

namespace motifmine {

/// Sign random projection hash with `bits` unit hyperplanes through the origin.
/// Hyperplane i depends only on (seed, i), so a wider table extends the codes
/// of a narrower one with the same seed.
struct LshTable {
  std::size_t bits = 0;
  Eigen::MatrixXd hyperplanes;  // bits x d
  std::uint64_t seed = 0;

  /// 1 <= bits <= 64.
  static LshTable make(std::size_t bits, std::size_t dim, std::uint64_t seed);
};

/// Bit i of a code is set when row . hyperplane_i > 0.
std::vector<std::uint64_t> lsh_hash(const Eigen::MatrixXd& Z, const LshTable& table);

/// Layers of every graph in a dataset from one forward sweep.
using DatasetLayers = std::vector<std::vector<CoarseLayer>>;

/// Hashes every coarse node at `layer` (1-based) across the dataset, ranks
/// buckets by mean score (descending, ties by ascending code) and labels the
/// spotlights of the top `rank` buckets. Column j holds bucket j in rank order;
/// there are always exactly `rank` columns. Buckets occurring in fewer than
/// `min_support` (a fraction of the graphs) are left out of the ranking.
std::vector<AssignmentMatrix> decode(const DatasetLayers& layers, std::size_t layer, const LshTable& table,
                                     std::size_t rank, double min_support = 0.0);

struct DecodeConfig {
  std::size_t layer = 1;
  std::size_t bits = 16;
  std::size_t rank = 1;
  double min_support = 0.0;
};

struct GridSpec {
  std::vector<std::size_t> bits{8, 16, 32};
  std::vector<std::size_t> layers{2, 3, 4};
  std::vector<std::size_t> ranks;  // empty means the truth column count
  std::size_t repetitions = 5;
  double min_support = 0.3;
  std::uint64_t seed = 0;
};

struct GridEntry {
  DecodeConfig config;
  std::vector<double> repetition_means;  // mean M-Jaccard per repetition
  double mean = 0.0;
  double std = 0.0;
};

struct GridResult {
  DecodeConfig best;
  double score = 0.0;
  double score_std = 0.0;
  std::vector<GridEntry> entries;
  std::vector<AssignmentMatrix> assignments;  // best config, first repetition
};

/// One stochastic forward sweep over the dataset; graph i uses (seed, i).
DatasetLayers forward_dataset(const MinerModel& model, std::span<const Graph> graphs, std::uint64_t seed,
                              std::size_t jobs = 1);

/// Scores every (layer, bits, rank) combination by mean M-Jaccard against
/// `truth`, averaged over repetitions, and returns the best. Each repetition
/// supplies its own forward sweep and hash table seed.
GridResult decode_grid_search(std::span<const DatasetLayers> repetitions, std::span<const AssignmentMatrix> truth,
                              const GridSpec& spec);

/// Runs the forward sweeps (one per repetition) and the grid.
GridResult decode_grid_search(const MinerModel& model, const DatasetBundle& data, const GridSpec& spec,
                              std::size_t jobs = 1);

/// {config, per_graph: [{n, labels}]}, label = column index or -1.
nlohmann::json assignments_to_json(std::span<const AssignmentMatrix> assignments, const nlohmann::json& config);
std::vector<AssignmentMatrix> assignments_from_json(const nlohmann::json& j);

}  // namespace motifmine
