#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "motifmine/graph.hpp"
#include "motifmine/kernel.hpp"
#include "motifmine/nn.hpp"
#include "motifmine/random.hpp"

namespace motifmine {

/// Which way the density contrast enters the concentration weight.
///   paper: w = exp(-beta * delta)
///   prose: w = exp(+beta * delta), large when the data is denser than the null
enum class DeltaSign { paper, prose };

/// How the density contrast delta is formed from the two kNN estimates.
///   difference: f_data - f_null
///   log_ratio:  log f_data - log f_null
enum class DeltaMode { difference, log_ratio };

std::string_view to_string(DeltaSign s);
std::string_view to_string(DeltaMode m);
DeltaSign parse_delta_sign(std::string_view name);
DeltaMode parse_delta_mode(std::string_view name);

struct MinerConfig {
  std::size_t layers = 4;        // pooling layers T
  std::size_t dim = 8;           // embedding size d
  std::size_t input_dim = 10;    // one-hot degree buckets of the initial features
  std::size_t hidden = 32;       // hidden width of the embedding and scoring MLPs
  double beta = 1.0;
  double lambda = 1.0;
  std::size_t k_nn = 16;
  DeltaSign delta_sign = DeltaSign::prose;
  DeltaMode delta_mode = DeltaMode::log_ratio;
  double exponent_clip = 10.0;   // |beta * delta| is clipped before exp()
  double density_jitter = 1e-3;  // std of the noise added before kNN search
  bool dummy = false;            // control model: every score fixed at 0.5
  bool neighbor_context = true;  // feed [x_u, mean of neighbour x] to phi
  bool wl_features = true;       // append the neighbour degree histogram to the input
  KernelConfig kernel;
  std::size_t rep_pairs = 128;   // sampled pairs per layer per batch
  std::size_t batch_size = 32;
  std::size_t epochs = 60;
  double learning_rate = 1e-3;
  bool train_embedding = true;
  bool train_scoring = true;
  std::uint64_t seed = 0;

  void validate() const;
  /// Width of the node features the first layer sees.
  std::size_t feature_dim() const { return wl_features ? 2 * input_dim : input_dim; }
};

nlohmann::json to_json(const MinerConfig& config);
MinerConfig miner_config_from_json(const nlohmann::json& j);
/// Stable hex digest of the serialized config.
std::string config_hash(const MinerConfig& config);

/// Per-layer embedding MLPs (phi) and scoring heads (sigma).
struct MinerModel {
  MinerConfig config;
  std::vector<Mlp> embed;  // phi_t: (input_dim at t=1, else dim), doubled with context -> dim
  std::vector<Mlp> score;  // sigma_t: dim -> 1, sigmoid

  /// Fresh parameters drawn from config.seed.
  static MinerModel init(const MinerConfig& config);
};

/// Sorted original-graph node ids covered by one coarse node.
using Spotlight = std::vector<NodeId>;

/// Merge candidates evaluated while building a layer: one row per edge of the
/// graph being contracted.
struct EdgeProposals {
  std::vector<Edge> edges;
  Eigen::MatrixXd embeddings;  // z_uv
  Eigen::VectorXd scores;      // s(u, v)
};

/// Graph, embeddings, scores and spotlights at one layer.
struct LayerState {
  Graph graph;
  Eigen::MatrixXd embeddings;
  Eigen::VectorXd scores;
  std::vector<Spotlight> spotlights;
};

struct CoarseLayer : LayerState {
  /// Proposal index that produced each coarse node, -1 when carried over.
  std::vector<std::ptrdiff_t> merged_edge;
  /// Node of the previous layer each coarse node came from (the first endpoint
  /// for merged nodes).
  std::vector<NodeId> parent;
  EdgeProposals proposals;
};

/// One-hot degree bucket features, degree clipped to d_in - 1. Requires d_in >= 2.
Graph init_features(const Graph& g, std::size_t d_in);

/// Input features of the first pooling layer: init_features, followed by the
/// sum of the neighbours' one-hot rows when config.wl_features is set.
Graph model_features(const Graph& g, const MinerConfig& config);

/// Rows [x_u, mean of x over neighbours of u] (zeros for isolated nodes).
Eigen::MatrixXd neighbor_context(const Graph& g, const Eigen::MatrixXd& x);

/// z_uv = phi(x_u + x_v).
Eigen::VectorXd joint_embed(const Mlp& phi, const Eigen::VectorXd& x_u, const Eigen::VectorXd& x_v);

/// sigma(z) as a probability strictly inside (0, 1).
double score_edge(const Mlp& sigma, const Eigen::VectorXd& z);

/// Stochastic edge contraction. Proposals are visited in uniformly random
/// order; an edge whose endpoints are both still unmerged this round contracts
/// with probability equal to its score. A merged pair becomes one coarse node
/// carrying z_uv and s(u,v); every other node carries its row of
/// `current.embeddings` and `current.scores`. Coarse node ids follow the order
/// of the lowest previous id they cover.
CoarseLayer contract(const LayerState& current, const EdgeProposals& proposals, Rng& rng);

/// Tapes recorded during a forward pass, for training.
struct LayerTapes {
  std::vector<Tape> proposal_embed;  // phi_t on x_u + x_v, per proposal
  std::vector<Tape> proposal_score;  // sigma_t on z_uv, per proposal (empty for dummy)
  std::vector<Tape> self_embed;      // phi_t on x_u, per node of the previous layer
};

/// Runs the T pooling layers. Layer t proposes every edge of layer t-1, scores
/// it with sigma_t(phi_t(h_u + h_v)), contracts, and re-embeds carried nodes
/// with phi_t(h_u) so that all nodes of a layer share one embedding space.
/// h is the node's embedding, extended by neighbor_context when enabled.
/// Original nodes start with score 0 (0.5 for the dummy control).
///
/// `g` must either be featureless (model_features are added) or already carry
/// config.feature_dim() features.
std::vector<CoarseLayer> forward_pass(const MinerModel& model, const Graph& g, Rng& rng,
                                      std::vector<LayerTapes>* tapes = nullptr);

}  // namespace motifmine
