#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "motifmine/dataset.hpp"
#include "motifmine/miner.hpp"

namespace motifmine {

enum class Selection { top, random };
std::string_view to_string(Selection s);

/// Concatenation over layers of the mean embedding of k selected coarse nodes
/// (T * d entries). k == 0 or k >= |V_t| selects every node. `top` takes the k
/// highest scores (ties by lower index); `random` draws k nodes from `rng`.
Eigen::VectorXd graph_embedding(std::span<const CoarseLayer> layers, std::size_t k, Selection mode, Rng& rng);

/// Runs one forward pass with `rng` and embeds the result.
Eigen::VectorXd graph_embedding(const MinerModel& model, const Graph& g, std::size_t k, Selection mode, Rng& rng);

struct LogisticConfig {
  std::size_t epochs = 300;
  double learning_rate = 0.05;
  std::size_t folds = 5;
};

/// Per-fold test accuracy of a logistic regression on standardized features.
/// Folds come from a seeded shuffle.
std::vector<double> cross_validated_accuracy(const Eigen::MatrixXd& X, std::span<const int> labels,
                                             const LogisticConfig& config, std::uint64_t seed);

struct AblationRow {
  std::size_t k = 0;  // 0 = all
  Selection mode = Selection::top;
  std::size_t fold = 0;
  double accuracy = 0.0;
};

/// Labels are has_motif(i). Every graph gets one forward pass shared by all
/// conditions; each (k, mode) condition is cross-validated on the same folds.
std::vector<AblationRow> ablation_study(const MinerModel& model, const DatasetBundle& labeled,
                                        std::span<const std::size_t> ks, std::uint64_t seed,
                                        const LogisticConfig& config = {}, std::size_t jobs = 1);

/// Mean accuracy over the rows matching (k, mode).
double mean_accuracy(std::span<const AblationRow> rows, std::size_t k, Selection mode);

/// k,mode,fold,accuracy with k written as "all" for 0.
std::string ablation_csv(std::span<const AblationRow> rows);

}  // namespace motifmine
