#include "motifmine/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "motifmine/density.hpp"
#include "motifmine/errors.hpp"
#include "motifmine/kernel.hpp"
#include "motifmine/parallel.hpp"

namespace motifmine {

double representation_loss(std::span<const RepSample> pairs) {
  if (pairs.empty()) throw ConfigError("representation_loss needs at least one pair");
  double total = 0.0;
  for (const RepSample& p : pairs) {
    if (p.z_a.size() != p.z_b.size()) throw DimensionMismatch("pair embeddings differ in size");
    const double r = p.z_a.dot(p.z_b) - p.target;
    total += r * r;
  }
  return total / static_cast<double>(pairs.size());
}

namespace {

double log_density(const DensityEstimate& est, std::size_t k, std::size_t searched, std::size_t d) {
  return std::log(static_cast<double>(k) / static_cast<double>(searched)) - std::log(unit_ball_volume(d)) -
         static_cast<double>(d) * std::log(est.radius);
}

}  // namespace

Eigen::VectorXd density_contrast(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& Z_null, std::size_t k,
                                 DeltaMode mode) {
  const auto own = knn_density_all(Z, Z, k, true);
  const auto null = knn_density_all(Z, Z_null, k, false);
  const auto d = static_cast<std::size_t>(Z.cols());
  const auto n = static_cast<std::size_t>(Z.rows());
  const auto n_null = static_cast<std::size_t>(Z_null.rows());
  Eigen::VectorXd delta(Z.rows());
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    if (mode == DeltaMode::difference) {
      delta[row] = own[i].value - null[i].value;
    } else {
      // Logs straight from the radii so tiny radii in high d do not overflow.
      delta[row] = log_density(own[i], k, n - 1, d) - log_density(null[i], k, n_null, d);
    }
  }
  return delta;
}

ConcLossResult concentration_loss(const Eigen::VectorXd& scores, const Eigen::VectorXd& delta, double beta,
                                  double lambda, DeltaSign sign, double exponent_clip) {
  if (scores.size() != delta.size()) throw DimensionMismatch("scores and delta differ in length");
  const double direction = sign == DeltaSign::paper ? -1.0 : 1.0;
  ConcLossResult out;
  out.weights.resize(scores.size());
  out.grad.resize(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const double e = std::clamp(direction * beta * delta[i], -exponent_clip, exponent_clip);
    const double w = std::exp(e);
    out.weights[i] = w;
    out.loss += -scores[i] * w + lambda * scores[i] * scores[i];
    out.grad[i] = -w + 2.0 * lambda * scores[i];
  }
  return out;
}

ConcLossResult conc_loss(const Eigen::VectorXd& scores, const Eigen::MatrixXd& Z, const Eigen::MatrixXd& Z_null,
                         const MinerConfig& config) {
  const Eigen::VectorXd delta = density_contrast(Z, Z_null, config.k_nn, config.delta_mode);
  return concentration_loss(scores, delta, config.beta, config.lambda, config.delta_sign, config.exponent_clip);
}

namespace {

struct NodeRef {
  std::size_t graph;
  NodeId node;
};

std::vector<MlpGradient> zero_grads(const std::vector<Mlp>& nets) {
  std::vector<MlpGradient> out;
  out.reserve(nets.size());
  for (const Mlp& m : nets) out.emplace_back(m);
  return out;
}

// Pushes per-node embedding gradients from the top layer down to the inputs.
void backprop_embeddings(const MinerModel& model, const GraphPass& pass, std::vector<Eigen::MatrixXd> upstream,
                         std::vector<MlpGradient>& grads) {
  for (std::size_t t = pass.layers.size(); t-- > 0;) {
    const CoarseLayer& layer = pass.layers[t];
    const LayerTapes& tapes = pass.tapes[t];
    const Mlp& phi = model.embed[t];
    Eigen::MatrixXd* below = t > 0 ? &upstream[t - 1] : nullptr;
    const Eigen::MatrixXd& g = upstream[t];
    const Graph& prev = t > 0 ? pass.layers[t - 1].graph : *pass.graph;
    const bool context = model.config.neighbor_context;
    // Routes a gradient on h_a = [x_a, mean_nbr x] back to the previous embeddings.
    auto push = [&](NodeId a, const Eigen::VectorXd& gin) {
      if (!below) return;
      const Eigen::Index d = below->cols();
      below->row(static_cast<Eigen::Index>(a)) += gin.head(d).transpose();
      if (!context) return;
      const auto nb = prev.neighbors(a);
      if (nb.empty()) return;
      const Eigen::RowVectorXd share = gin.tail(d).transpose() / static_cast<double>(nb.size());
      for (NodeId w : nb) below->row(static_cast<Eigen::Index>(w)) += share;
    };
    for (Eigen::Index c = 0; c < g.rows(); ++c) {
      if (g.row(c).isZero(0.0)) continue;
      const Eigen::VectorXd up = g.row(c).transpose();
      const auto cu = static_cast<std::size_t>(c);
      const std::ptrdiff_t idx = layer.merged_edge[cu];
      if (idx >= 0) {
        const auto i = static_cast<std::size_t>(idx);
        const Eigen::VectorXd gin = phi.backward(tapes.proposal_embed[i], up, grads[t]);
        push(layer.proposals.edges[i].u, gin);
        push(layer.proposals.edges[i].v, gin);
      } else {
        const NodeId p = layer.parent[cu];
        const Eigen::VectorXd gin = phi.backward(tapes.self_embed[p], up, grads[t]);
        push(p, gin);
      }
    }
  }
}

}  // namespace

RepLossResult rep_loss(const MinerModel& model, std::span<const GraphPass> batch, std::size_t n_pairs, Rng& rng,
                       std::size_t jobs) {
  if (n_pairs < 1) throw ConfigError("rep_loss needs n_pairs >= 1");
  const std::size_t T = model.config.layers;
  const auto d = static_cast<Eigen::Index>(model.config.dim);

  struct Pair {
    std::size_t layer;
    NodeRef a, b;
    double target = 0.0;
  };
  std::vector<Pair> pairs;
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<std::size_t> offsets{0};
    for (const GraphPass& p : batch) offsets.push_back(offsets.back() + p.layers.at(t).graph.num_nodes());
    const std::size_t total = offsets.back();
    if (total < 2) continue;
    auto locate = [&](std::size_t flat) {
      const auto it = std::upper_bound(offsets.begin(), offsets.end(), flat);
      const auto g = static_cast<std::size_t>(it - offsets.begin()) - 1;
      return NodeRef{g, flat - offsets[g]};
    };
    for (std::size_t k = 0; k < n_pairs; ++k) {
      const std::size_t a = rng.below(total);
      std::size_t b = rng.below(total - 1);
      if (b >= a) ++b;
      pairs.push_back({t, locate(a), locate(b)});
    }
  }

  RepLossResult out;
  out.embed_grads = zero_grads(model.embed);
  if (pairs.empty()) return out;

  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    Pair& p = pairs[i];
    const GraphPass& ga = batch[p.a.graph];
    const GraphPass& gb = batch[p.b.graph];
    const Graph sa = ga.graph->induced_subgraph(ga.layers[p.layer].spotlights[p.a.node]);
    const Graph sb = gb.graph->induced_subgraph(gb.layers[p.layer].spotlights[p.b.node]);
    p.target = sim_g(sa, sb, model.config.kernel);
  });

  // Upstream gradients per graph and layer.
  std::vector<std::vector<Eigen::MatrixXd>> upstream(batch.size());
  for (std::size_t g = 0; g < batch.size(); ++g) {
    for (std::size_t t = 0; t < T; ++t) {
      upstream[g].push_back(
          Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(batch[g].layers[t].graph.num_nodes()), d));
    }
  }
  const double scale = 1.0 / static_cast<double>(pairs.size());
  for (const Pair& p : pairs) {
    const auto za = batch[p.a.graph].layers[p.layer].embeddings.row(static_cast<Eigen::Index>(p.a.node));
    const auto zb = batch[p.b.graph].layers[p.layer].embeddings.row(static_cast<Eigen::Index>(p.b.node));
    const double r = za.dot(zb) - p.target;
    out.loss += r * r * scale;
    upstream[p.a.graph][p.layer].row(static_cast<Eigen::Index>(p.a.node)) += 2.0 * r * scale * zb;
    upstream[p.b.graph][p.layer].row(static_cast<Eigen::Index>(p.b.node)) += 2.0 * r * scale * za;
  }
  out.pairs = pairs.size();

  std::vector<std::vector<MlpGradient>> per_graph(batch.size());
  parallel_for(batch.size(), jobs, [&](std::size_t g) {
    per_graph[g] = zero_grads(model.embed);
    backprop_embeddings(model, batch[g], std::move(upstream[g]), per_graph[g]);
  });
  for (const auto& gg : per_graph) {
    for (std::size_t t = 0; t < T; ++t) out.embed_grads[t] += gg[t];
  }
  return out;
}

namespace {

constexpr std::uint64_t kOrderKey = 0x6f72646572ULL;
constexpr std::uint64_t kBatchKey = 0x6261746368ULL;

struct BatchLosses {
  double rep = 0.0;
  double conc = 0.0;
  bool conc_valid = false;
};

BatchLosses train_batch(TrainResult& state, std::span<const Graph> kernel_graphs, std::span<const Graph> data,
                        std::span<const Graph> nulls,
                        std::span<const std::size_t> members, std::size_t epoch, std::size_t batch_no,
                        std::size_t jobs) {
  MinerModel& model = state.model;
  const MinerConfig& cfg = model.config;
  const std::size_t T = cfg.layers;
  const std::size_t B = members.size();

  std::vector<GraphPass> passes(B);
  std::vector<std::vector<CoarseLayer>> null_layers(B);
  parallel_for(B, jobs, [&](std::size_t b) {
    const std::size_t idx = members[b];
    Rng rng = Rng::derive(cfg.seed, {epoch, idx, 0});
    passes[b].graph = &kernel_graphs[idx];
    passes[b].layers = forward_pass(model, data[idx], rng, &passes[b].tapes);
    Rng null_rng = Rng::derive(cfg.seed, {epoch, idx, 1});
    null_layers[b] = forward_pass(model, nulls[idx], null_rng);
  });

  BatchLosses losses;
  Rng pair_rng = Rng::derive(cfg.seed, {kBatchKey, epoch, batch_no, 2});
  RepLossResult rep = rep_loss(model, passes, cfg.rep_pairs, pair_rng, jobs);
  losses.rep = rep.loss;

  std::vector<MlpGradient> score_grads = zero_grads(model.score);
  std::size_t conc_layers = 0;
  if (!cfg.dummy) {
    Rng jitter_rng = Rng::derive(cfg.seed, {kBatchKey, epoch, batch_no, 3});
    for (std::size_t t = 0; t < T; ++t) {
      Eigen::Index n = 0, n_null = 0;
      for (std::size_t b = 0; b < B; ++b) {
        n += passes[b].layers[t].proposals.embeddings.rows();
        n_null += null_layers[b][t].proposals.embeddings.rows();
      }
      const auto k = static_cast<std::size_t>(
          std::min<Eigen::Index>({static_cast<Eigen::Index>(cfg.k_nn), n - 2, n_null - 1}));
      if (n < 3 || n_null < 2 || k < 1) continue;

      const auto d = static_cast<Eigen::Index>(cfg.dim);
      Eigen::MatrixXd Z(n, d), Zn(n_null, d);
      Eigen::VectorXd s(n);
      Eigen::Index row = 0, row_null = 0;
      for (std::size_t b = 0; b < B; ++b) {
        const EdgeProposals& p = passes[b].layers[t].proposals;
        Z.middleRows(row, p.embeddings.rows()) = p.embeddings;
        s.segment(row, p.scores.size()) = p.scores;
        row += p.embeddings.rows();
        const EdgeProposals& q = null_layers[b][t].proposals;
        Zn.middleRows(row_null, q.embeddings.rows()) = q.embeddings;
        row_null += q.embeddings.rows();
      }
      if (cfg.density_jitter > 0.0) {
        for (Eigen::Index i = 0; i < Z.size(); ++i) Z.data()[i] += cfg.density_jitter * jitter_rng.normal();
        for (Eigen::Index i = 0; i < Zn.size(); ++i) Zn.data()[i] += cfg.density_jitter * jitter_rng.normal();
      }
      const Eigen::VectorXd delta = density_contrast(Z, Zn, k, cfg.delta_mode);
      const ConcLossResult conc =
          concentration_loss(s, delta, cfg.beta, cfg.lambda, cfg.delta_sign, cfg.exponent_clip);
      const double scale = 1.0 / static_cast<double>(n);
      losses.conc += conc.loss * scale;
      ++conc_layers;

      Eigen::Index offset = 0;
      Eigen::VectorXd up(1);
      for (std::size_t b = 0; b < B; ++b) {
        const auto& tapes = passes[b].tapes[t].proposal_score;
        for (std::size_t i = 0; i < tapes.size(); ++i) {
          up[0] = conc.grad[offset + static_cast<Eigen::Index>(i)] * scale;
          model.score[t].backward(tapes[i], up, score_grads[t]);
        }
        offset += static_cast<Eigen::Index>(tapes.size());
      }
    }
  }
  if (conc_layers > 0) {
    losses.conc /= static_cast<double>(conc_layers);
    losses.conc_valid = true;
  }

  if (!std::isfinite(losses.rep) || !std::isfinite(losses.conc)) return losses;
  for (std::size_t t = 0; t < T; ++t) {
    if (cfg.train_embedding) adam_step(model.embed[t], rep.embed_grads[t], state.optimizer.embed[t]);
    if (cfg.train_scoring && !cfg.dummy && conc_layers > 0) {
      adam_step(model.score[t], score_grads[t], state.optimizer.score[t]);
    }
  }
  return losses;
}

bool model_finite(const MinerModel& m) {
  for (const Mlp& net : m.embed) if (!net.finite()) return false;
  for (const Mlp& net : m.score) if (!net.finite()) return false;
  return true;
}

}  // namespace

TrainResult train(const DatasetBundle& data, const MinerConfig& config, std::size_t jobs) {
  config.validate();
  TrainResult start;
  start.model = MinerModel::init(config);
  const AdamConfig adam{config.learning_rate, 0.9, 0.999, 1e-8};
  for (std::size_t t = 0; t < config.layers; ++t) {
    start.optimizer.embed.emplace_back(start.model.embed[t], adam);
    start.optimizer.score.emplace_back(start.model.score[t], adam);
  }
  return train(data, std::move(start), jobs);
}

TrainResult train(const DatasetBundle& data, TrainResult state, std::size_t jobs) {
  const MinerConfig& cfg = state.model.config;
  cfg.validate();
  if (data.size() == 0) throw ConfigError("training needs a non-empty dataset");
  if (data.nulls.size() != data.size()) throw ConfigError("training needs a null twin for every graph");
  for (auto& s : state.optimizer.embed) s.config.learning_rate = cfg.learning_rate;
  for (auto& s : state.optimizer.score) s.config.learning_rate = cfg.learning_rate;

  // Kernel targets use plain degree features; the model builds its own inputs.
  std::vector<Graph> kernel_graphs(data.size()), inputs(data.size()), nulls(data.size());
  parallel_for(data.size(), jobs, [&](std::size_t i) {
    kernel_graphs[i] = init_features(data.graphs[i], cfg.input_dim);
    inputs[i] = model_features(data.graphs[i], cfg);
    nulls[i] = model_features(data.nulls[i], cfg);
  });

  const std::size_t first_epoch = state.trace.rep_loss.size();
  for (std::size_t e = 0; e < cfg.epochs && !state.trace.diverged; ++e) {
    const std::size_t epoch = first_epoch + e;
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng order_rng = Rng::derive(cfg.seed, {kOrderKey, epoch});
    order_rng.shuffle(std::span<std::size_t>(order));

    double rep_sum = 0.0, conc_sum = 0.0;
    std::size_t batches = 0, conc_batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      const std::span<const std::size_t> members(order.data() + start, stop - start);
      const BatchLosses l = train_batch(state, kernel_graphs, inputs, nulls, members, epoch, batches, jobs);
      rep_sum += l.rep;
      if (l.conc_valid) {
        conc_sum += l.conc;
        ++conc_batches;
      }
      ++batches;
      if (!std::isfinite(l.rep) || !std::isfinite(l.conc) || !model_finite(state.model)) {
        state.trace.diverged = true;
        break;
      }
    }
    state.trace.rep_loss.push_back(rep_sum / static_cast<double>(batches));
    state.trace.conc_loss.push_back(conc_batches ? conc_sum / static_cast<double>(conc_batches) : 0.0);
  }
  return state;
}

std::string trace_csv(const TrainingTrace& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,L_rep,L_conc\n";
  for (std::size_t e = 0; e < trace.rep_loss.size(); ++e) {
    out << e << ',' << trace.rep_loss[e] << ',' << trace.conc_loss[e] << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const TrainResult& r) {
  nlohmann::json embed = nlohmann::json::array(), score = nlohmann::json::array();
  nlohmann::json opt_embed = nlohmann::json::array(), opt_score = nlohmann::json::array();
  for (const Mlp& m : r.model.embed) embed.push_back(to_json(m));
  for (const Mlp& m : r.model.score) score.push_back(to_json(m));
  for (const AdamState& s : r.optimizer.embed) opt_embed.push_back(to_json(s));
  for (const AdamState& s : r.optimizer.score) opt_score.push_back(to_json(s));
  return {{"format", "motifmine-model"},
          {"version", 1},
          {"config", to_json(r.model.config)},
          {"config_hash", config_hash(r.model.config)},
          {"embed", std::move(embed)},
          {"score", std::move(score)},
          {"optimizer", {{"embed", std::move(opt_embed)}, {"score", std::move(opt_score)}}},
          {"trace",
           {{"rep_loss", r.trace.rep_loss}, {"conc_loss", r.trace.conc_loss}, {"diverged", r.trace.diverged}}}};
}

TrainResult train_result_from_json(const nlohmann::json& j) {
  TrainResult r;
  try {
    if (j.at("format").get<std::string>() != "motifmine-model") throw ConfigError("not a model checkpoint");
    r.model.config = miner_config_from_json(j.at("config"));
    if (j.at("config_hash").get<std::string>() != config_hash(r.model.config)) {
      throw ConfigError("checkpoint config hash does not match its config");
    }
    for (const auto& m : j.at("embed")) r.model.embed.push_back(mlp_from_json(m));
    for (const auto& m : j.at("score")) r.model.score.push_back(mlp_from_json(m));
    if (r.model.embed.size() != r.model.config.layers || r.model.score.size() != r.model.config.layers) {
      throw ConfigError("checkpoint layer count does not match its config");
    }
    const auto& opt = j.at("optimizer");
    for (std::size_t t = 0; t < r.model.config.layers; ++t) {
      r.optimizer.embed.push_back(adam_from_json(opt.at("embed").at(t), r.model.embed[t]));
      r.optimizer.score.push_back(adam_from_json(opt.at("score").at(t), r.model.score[t]));
    }
    r.trace.rep_loss = j.at("trace").at("rep_loss").get<std::vector<double>>();
    r.trace.conc_loss = j.at("trace").at("conc_loss").get<std::vector<double>>();
    r.trace.diverged = j.at("trace").at("diverged").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed model checkpoint: ") + e.what());
  }
  return r;
}

void save_model(const TrainResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot write " + path);
  out << to_json(result).dump() << '\n';
}

TrainResult load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed model file: ") + e.what());
  }
  return train_result_from_json(j);
}

}  // namespace motifmine
