#include "motifmine/miner.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <numeric>
#include <string>

#include "motifmine/errors.hpp"

namespace motifmine {

std::string_view to_string(DeltaSign s) { return s == DeltaSign::paper ? "paper" : "prose"; }
std::string_view to_string(DeltaMode m) {
  return m == DeltaMode::difference ? "difference" : "log_ratio";
}

DeltaSign parse_delta_sign(std::string_view name) {
  if (name == "paper") return DeltaSign::paper;
  if (name == "prose") return DeltaSign::prose;
  throw ConfigError("delta_sign must be 'paper' or 'prose'");
}

DeltaMode parse_delta_mode(std::string_view name) {
  if (name == "difference") return DeltaMode::difference;
  if (name == "log_ratio") return DeltaMode::log_ratio;
  throw ConfigError("delta_mode must be 'difference' or 'log_ratio'");
}

void MinerConfig::validate() const {
  if (layers < 1) throw ConfigError("layers must be >= 1");
  if (dim < 1) throw ConfigError("dim must be >= 1");
  if (input_dim < 2) throw ConfigError("input_dim must be >= 2");
  if (hidden < 1) throw ConfigError("hidden must be >= 1");
  if (!(beta >= 0.0) || !(lambda >= 0.0)) throw ConfigError("beta and lambda must be >= 0");
  if (k_nn < 1) throw ConfigError("k_nn must be >= 1");
  if (!(exponent_clip > 0.0)) throw ConfigError("exponent_clip must be positive");
  if (!(density_jitter >= 0.0)) throw ConfigError("density_jitter must be >= 0");
  if (!(kernel.gamma > 0.0)) throw ConfigError("kernel gamma must be positive");
  if (rep_pairs < 1) throw ConfigError("rep_pairs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(learning_rate >= 0.0)) throw ConfigError("learning_rate must be >= 0");
}

nlohmann::json to_json(const MinerConfig& c) {
  return {{"layers", c.layers},
          {"dim", c.dim},
          {"input_dim", c.input_dim},
          {"hidden", c.hidden},
          {"beta", c.beta},
          {"lambda", c.lambda},
          {"k_nn", c.k_nn},
          {"delta_sign", std::string(to_string(c.delta_sign))},
          {"delta_mode", std::string(to_string(c.delta_mode))},
          {"exponent_clip", c.exponent_clip},
          {"density_jitter", c.density_jitter},
          {"dummy", c.dummy},
          {"neighbor_context", c.neighbor_context},
          {"wl_features", c.wl_features},
          {"kernel_iterations", c.kernel.iterations},
          {"kernel_gamma", c.kernel.gamma},
          {"rep_pairs", c.rep_pairs},
          {"batch_size", c.batch_size},
          {"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"train_embedding", c.train_embedding},
          {"train_scoring", c.train_scoring},
          {"seed", c.seed}};
}

MinerConfig miner_config_from_json(const nlohmann::json& j) {
  MinerConfig c;
  try {
    c.layers = j.at("layers").get<std::size_t>();
    c.dim = j.at("dim").get<std::size_t>();
    c.input_dim = j.at("input_dim").get<std::size_t>();
    c.hidden = j.at("hidden").get<std::size_t>();
    c.beta = j.at("beta").get<double>();
    c.lambda = j.at("lambda").get<double>();
    c.k_nn = j.at("k_nn").get<std::size_t>();
    c.delta_sign = parse_delta_sign(j.at("delta_sign").get<std::string>());
    c.delta_mode = parse_delta_mode(j.at("delta_mode").get<std::string>());
    c.exponent_clip = j.at("exponent_clip").get<double>();
    c.density_jitter = j.at("density_jitter").get<double>();
    c.dummy = j.at("dummy").get<bool>();
    c.neighbor_context = j.at("neighbor_context").get<bool>();
    c.wl_features = j.at("wl_features").get<bool>();
    c.kernel.iterations = j.at("kernel_iterations").get<std::size_t>();
    c.kernel.gamma = j.at("kernel_gamma").get<double>();
    c.rep_pairs = j.at("rep_pairs").get<std::size_t>();
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.epochs = j.at("epochs").get<std::size_t>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.train_embedding = j.at("train_embedding").get<bool>();
    c.train_scoring = j.at("train_scoring").get<bool>();
    c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed miner config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_hash(const MinerConfig& config) {
  // FNV-1a over the compact serialization.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(config).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

MinerModel MinerModel::init(const MinerConfig& config) {
  config.validate();
  MinerModel model;
  model.config = config;
  Rng rng = Rng::derive(config.seed, {0x696e6974ULL});
  const std::array<Activation, 2> embed_acts{Activation::relu, Activation::identity};
  const std::array<Activation, 2> score_acts{Activation::relu, Activation::sigmoid};
  for (std::size_t t = 0; t < config.layers; ++t) {
    const std::size_t in = (t == 0 ? config.feature_dim() : config.dim) * (config.neighbor_context ? 2 : 1);
    const std::array<std::size_t, 3> embed_dims{in, config.hidden, config.dim};
    const std::array<std::size_t, 3> score_dims{config.dim, config.hidden, 1};
    model.embed.emplace_back(embed_dims, embed_acts, rng);
    model.score.emplace_back(score_dims, score_acts, rng);
  }
  return model;
}

Graph init_features(const Graph& g, std::size_t d_in) {
  if (d_in < 2) throw ConfigError("init_features needs d_in >= 2");
  Graph out = g;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.num_nodes()),
                                            static_cast<Eigen::Index>(d_in));
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    x(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(std::min(g.degree(u), d_in - 1))) = 1.0;
  }
  out.set_features(std::move(x));
  return out;
}

Graph model_features(const Graph& g, const MinerConfig& config) {
  Graph out = init_features(g, config.input_dim);
  if (!config.wl_features) return out;
  const auto d = static_cast<Eigen::Index>(config.input_dim);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(g.num_nodes()), 2 * d);
  x.leftCols(d) = out.features();
  x.rightCols(d).setZero();
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId w : g.neighbors(u)) x.row(static_cast<Eigen::Index>(u)).tail(d) += out.features().row(static_cast<Eigen::Index>(w));
  }
  out.set_features(std::move(x));
  return out;
}

Eigen::MatrixXd neighbor_context(const Graph& g, const Eigen::MatrixXd& x) {
  if (static_cast<std::size_t>(x.rows()) != g.num_nodes()) throw DimensionMismatch("one row per node expected");
  const Eigen::Index d = x.cols();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.rows(), 2 * d);
  h.leftCols(d) = x;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const auto nb = g.neighbors(u);
    if (nb.empty()) continue;
    Eigen::RowVectorXd m = Eigen::RowVectorXd::Zero(d);
    for (NodeId w : nb) m += x.row(static_cast<Eigen::Index>(w));
    h.row(static_cast<Eigen::Index>(u)).tail(d) = m / static_cast<double>(nb.size());
  }
  return h;
}

Eigen::VectorXd joint_embed(const Mlp& phi, const Eigen::VectorXd& x_u, const Eigen::VectorXd& x_v) {
  if (x_u.size() != x_v.size()) throw DimensionMismatch("joint_embed inputs differ in size");
  return phi.forward(x_u + x_v);
}

namespace {

constexpr double kScoreFloor = 1e-12;

double clamp_score(double s) { return std::clamp(s, kScoreFloor, 1.0 - kScoreFloor); }

}  // namespace

double score_edge(const Mlp& sigma, const Eigen::VectorXd& z) {
  if (sigma.output_dim() != 1) throw DimensionMismatch("scoring head must have one output");
  return clamp_score(sigma.forward(z)[0]);
}

CoarseLayer contract(const LayerState& current, const EdgeProposals& proposals, Rng& rng) {
  const std::size_t n = current.graph.num_nodes();
  const std::size_t m = proposals.edges.size();
  if (static_cast<std::size_t>(proposals.scores.size()) != m ||
      static_cast<std::size_t>(proposals.embeddings.rows()) != m) {
    throw DimensionMismatch("proposal scores/embeddings must cover every edge");
  }
  if (static_cast<std::size_t>(current.embeddings.rows()) != n ||
      static_cast<std::size_t>(current.scores.size()) != n || current.spotlights.size() != n) {
    throw DimensionMismatch("layer state is inconsistent with its graph");
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));

  constexpr std::ptrdiff_t kNone = -1;
  std::vector<std::ptrdiff_t> merged_with(n, kNone);  // partner node
  std::vector<std::ptrdiff_t> merge_edge(n, kNone);   // proposal index
  for (std::size_t idx : order) {
    const Edge& e = proposals.edges[idx];
    if (merged_with[e.u] != kNone || merged_with[e.v] != kNone) continue;
    if (!rng.bernoulli(proposals.scores[static_cast<Eigen::Index>(idx)])) continue;
    merged_with[e.u] = static_cast<std::ptrdiff_t>(e.v);
    merged_with[e.v] = static_cast<std::ptrdiff_t>(e.u);
    merge_edge[e.u] = merge_edge[e.v] = static_cast<std::ptrdiff_t>(idx);
  }

  CoarseLayer out;
  std::vector<NodeId> coarse_of(n);
  std::size_t count = 0;
  for (NodeId u = 0; u < n; ++u) {
    if (merged_with[u] != kNone && static_cast<NodeId>(merged_with[u]) < u) {
      coarse_of[u] = coarse_of[static_cast<NodeId>(merged_with[u])];
      continue;
    }
    coarse_of[u] = count++;
    out.parent.push_back(u);
    out.merged_edge.push_back(merge_edge[u]);
  }

  const auto d = current.embeddings.cols();
  out.graph = Graph(count);
  out.embeddings.resize(static_cast<Eigen::Index>(count), d);
  out.scores.resize(static_cast<Eigen::Index>(count));
  out.spotlights.resize(count);
  for (std::size_t c = 0; c < count; ++c) {
    const NodeId u = out.parent[c];
    const auto row = static_cast<Eigen::Index>(c);
    if (out.merged_edge[c] == kNone) {
      out.embeddings.row(row) = current.embeddings.row(static_cast<Eigen::Index>(u));
      out.scores[row] = current.scores[static_cast<Eigen::Index>(u)];
      out.spotlights[c] = current.spotlights[u];
    } else {
      const auto idx = static_cast<Eigen::Index>(out.merged_edge[c]);
      const NodeId v = static_cast<NodeId>(merged_with[u]);
      out.embeddings.row(row) = proposals.embeddings.row(idx);
      out.scores[row] = proposals.scores[idx];
      Spotlight& sl = out.spotlights[c];
      sl.reserve(current.spotlights[u].size() + current.spotlights[v].size());
      std::merge(current.spotlights[u].begin(), current.spotlights[u].end(),
                 current.spotlights[v].begin(), current.spotlights[v].end(), std::back_inserter(sl));
    }
  }
  for (const Edge& e : current.graph.edges()) {
    const NodeId a = coarse_of[e.u];
    const NodeId b = coarse_of[e.v];
    if (a != b) out.graph.add_edge(a, b);
  }
  out.proposals = proposals;
  return out;
}

std::vector<CoarseLayer> forward_pass(const MinerModel& model, const Graph& g, Rng& rng,
                                      std::vector<LayerTapes>* tapes) {
  const MinerConfig& cfg = model.config;
  if (g.num_nodes() == 0) throw ConfigError("forward_pass needs a non-empty graph");
  if (model.embed.size() != cfg.layers || model.score.size() != cfg.layers) {
    throw ConfigError("model does not have one MLP pair per layer");
  }

  LayerState state;
  state.graph = g.feature_dim() == 0 ? model_features(g, cfg) : g;
  if (state.graph.feature_dim() != cfg.feature_dim()) {
    throw DimensionMismatch("graph features do not match the model's input size");
  }
  state.embeddings = state.graph.features();
  state.scores = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.num_nodes()), cfg.dummy ? 0.5 : 0.0);
  state.spotlights.resize(g.num_nodes());
  for (NodeId u = 0; u < g.num_nodes(); ++u) state.spotlights[u] = {u};

  std::vector<CoarseLayer> layers;
  layers.reserve(cfg.layers);
  if (tapes) tapes->assign(cfg.layers, {});

  for (std::size_t t = 0; t < cfg.layers; ++t) {
    const Mlp& phi = model.embed[t];
    const Mlp& sigma = model.score[t];
    const std::size_t n = state.graph.num_nodes();
    const auto d = static_cast<Eigen::Index>(cfg.dim);

    EdgeProposals proposals;
    proposals.edges = state.graph.edges();
    const auto m = static_cast<Eigen::Index>(proposals.edges.size());
    proposals.embeddings.resize(m, d);
    proposals.scores.resize(m);
    LayerTapes* lt = tapes ? &(*tapes)[t] : nullptr;
    if (lt) {
      lt->proposal_embed.resize(static_cast<std::size_t>(m));
      if (!cfg.dummy) lt->proposal_score.resize(static_cast<std::size_t>(m));
      lt->self_embed.resize(n);
    }
    const Eigen::MatrixXd h =
        cfg.neighbor_context ? neighbor_context(state.graph, state.embeddings) : state.embeddings;
    Tape scratch;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Edge& e = proposals.edges[static_cast<std::size_t>(i)];
      const Eigen::VectorXd x =
          h.row(static_cast<Eigen::Index>(e.u)).transpose() + h.row(static_cast<Eigen::Index>(e.v)).transpose();
      const Eigen::VectorXd z = phi.forward(x, lt ? lt->proposal_embed[static_cast<std::size_t>(i)] : scratch);
      proposals.embeddings.row(i) = z.transpose();
      if (cfg.dummy) {
        proposals.scores[i] = 0.5;
      } else {
        const double s = sigma.forward(z, lt ? lt->proposal_score[static_cast<std::size_t>(i)] : scratch)[0];
        proposals.scores[i] = clamp_score(s);
      }
    }

    LayerState carried;
    carried.graph = state.graph;
    carried.scores = state.scores;
    carried.spotlights = state.spotlights;
    carried.embeddings.resize(static_cast<Eigen::Index>(n), d);
    for (NodeId u = 0; u < n; ++u) {
      const Eigen::VectorXd x = h.row(static_cast<Eigen::Index>(u)).transpose();
      carried.embeddings.row(static_cast<Eigen::Index>(u)) =
          phi.forward(x, lt ? lt->self_embed[u] : scratch).transpose();
    }

    CoarseLayer next = contract(carried, proposals, rng);
    state = static_cast<const LayerState&>(next);
    state.graph = next.graph;
    layers.push_back(std::move(next));
  }
  return layers;
}

}  // namespace motifmine
