#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "motifmine/dataset.hpp"
#include "motifmine/miner.hpp"

namespace motifmine {

/// One representation-loss pair: two coarse-node embeddings and the kernel
/// similarity of their spotlights.
struct RepSample {
  Eigen::VectorXd z_a;
  Eigen::VectorXd z_b;
  double target = 0.0;
};

/// Mean of (<z_a, z_b> - target)^2.
double representation_loss(std::span<const RepSample> pairs);

/// Density contrast per row of Z: f_Z(z_i) - f_null(z_i), or the log ratio.
/// f_Z skips z_i itself. Requires more than k rows in Z and at least k in Z_null.
Eigen::VectorXd density_contrast(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& Z_null, std::size_t k,
                                 DeltaMode mode);

struct ConcLossResult {
  double loss = 0.0;
  Eigen::VectorXd grad;     // dL / d sigma_i
  Eigen::VectorXd weights;  // exp(+-beta * delta_i) after clipping
};

/// L = -sum_i sigma_i * w_i + lambda * sum_i sigma_i^2 with the weights held
/// constant, so dL/dsigma_i = -w_i + 2 lambda sigma_i.
ConcLossResult concentration_loss(const Eigen::VectorXd& scores, const Eigen::VectorXd& delta, double beta,
                                  double lambda, DeltaSign sign, double exponent_clip);

/// density_contrast followed by concentration_loss, no jitter.
ConcLossResult conc_loss(const Eigen::VectorXd& scores, const Eigen::MatrixXd& Z, const Eigen::MatrixXd& Z_null,
                         const MinerConfig& config);

/// A traced forward pass of one graph.
struct GraphPass {
  const Graph* graph = nullptr;  // graph with kernel features; spotlights index into it
  std::vector<CoarseLayer> layers;
  std::vector<LayerTapes> tapes;
};

struct RepLossResult {
  double loss = 0.0;
  std::size_t pairs = 0;
  std::vector<MlpGradient> embed_grads;  // one per layer
};

/// Samples `n_pairs` coarse-node pairs per layer across the batch, regresses
/// their inner products on sim_g of the spotlight subgraphs and backpropagates
/// through every embedding MLP the pair depends on. The loss is the mean over
/// all sampled pairs.
RepLossResult rep_loss(const MinerModel& model, std::span<const GraphPass> batch, std::size_t n_pairs, Rng& rng,
                       std::size_t jobs = 1);

struct TrainingTrace {
  std::vector<double> rep_loss;   // per epoch, mean over batches
  std::vector<double> conc_loss;  // per epoch, mean per proposal
  bool diverged = false;
};

struct OptimizerState {
  std::vector<AdamState> embed;
  std::vector<AdamState> score;
};

struct TrainResult {
  MinerModel model;
  OptimizerState optimizer;
  TrainingTrace trace;
};

/// Minibatch training. Each batch runs traced forward passes on the data graphs
/// and plain passes on their null twins, then takes one Adam step on the
/// embedding MLPs (representation loss) and the scoring heads (concentration
/// loss). Streams derive from (seed, epoch, graph), so `jobs` does not change
/// the result. Stops early and sets `diverged` on a non-finite loss.
TrainResult train(const DatasetBundle& data, const MinerConfig& config, std::size_t jobs = 1);

/// Continues training `start` for config.epochs more epochs.
TrainResult train(const DatasetBundle& data, TrainResult start, std::size_t jobs = 1);

/// Per-epoch CSV: epoch,L_rep,L_conc.
std::string trace_csv(const TrainingTrace& trace);

nlohmann::json to_json(const TrainResult& result);
TrainResult train_result_from_json(const nlohmann::json& j);
void save_model(const TrainResult& result, const std::string& path);
TrainResult load_model(const std::string& path);

}  // namespace motifmine
