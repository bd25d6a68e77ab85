#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include <motifmine/motifmine.hpp>

#include "oracles.hpp"

using namespace motifmine;

namespace {

Graph triangle() {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  return g;
}

LayerState singleton_state(const Graph& g, Eigen::Index d, Rng& rng) {
  LayerState s;
  s.graph = g;
  s.embeddings.resize(static_cast<Eigen::Index>(g.num_nodes()), d);
  for (Eigen::Index i = 0; i < s.embeddings.size(); ++i) s.embeddings.data()[i] = rng.normal();
  s.scores = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.num_nodes()));
  for (NodeId u = 0; u < g.num_nodes(); ++u) s.spotlights.push_back({u});
  return s;
}

EdgeProposals proposals_for(const Graph& g, Eigen::Index d, double score, Rng& rng) {
  EdgeProposals p;
  p.edges = g.edges();
  p.embeddings.resize(static_cast<Eigen::Index>(p.edges.size()), d);
  for (Eigen::Index i = 0; i < p.embeddings.size(); ++i) p.embeddings.data()[i] = rng.normal();
  p.scores = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(p.edges.size()), score);
  return p;
}

MinerConfig small_config() {
  MinerConfig c;
  c.layers = 3;
  c.dim = 4;
  c.hidden = 8;
  c.seed = 5;
  return c;
}

}  // namespace

TEST(InitFeatures, DegreeBuckets) {
  Graph g(13);
  for (NodeId v = 1; v <= 4; ++v) g.add_edge(0, v);     // star hub, degree 4
  for (NodeId u = 5; u < 13; ++u) {
    for (NodeId v = u + 1; v < 13; ++v) g.add_edge(u, v);  // K8 block
  }
  Graph iso(1);
  EXPECT_DOUBLE_EQ(init_features(iso, 10).features()(0, 0), 1.0);
  const Graph f = init_features(g, 10);
  EXPECT_EQ(f.features().cols(), 10);
  EXPECT_DOUBLE_EQ(f.features()(0, 4), 1.0);
  EXPECT_DOUBLE_EQ(f.features().row(0).sum(), 1.0);
  EXPECT_DOUBLE_EQ(f.features()(5, 7), 1.0);
  Graph k12(12);
  for (NodeId u = 0; u < 12; ++u) {
    for (NodeId v = u + 1; v < 12; ++v) k12.add_edge(u, v);
  }
  EXPECT_DOUBLE_EQ(init_features(k12, 10).features()(3, 9), 1.0);
  EXPECT_THROW(init_features(g, 1), ConfigError);
}

TEST(ModelFeatures, AppendsNeighbourHistogram) {
  Graph p(3);
  p.add_edge(0, 1);
  p.add_edge(1, 2);
  MinerConfig c;
  c.input_dim = 4;
  const Graph f = model_features(p, c);
  ASSERT_EQ(f.features().cols(), 8);
  // Endpoint: degree 1, one neighbour of degree 2.
  EXPECT_DOUBLE_EQ(f.features()(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(f.features()(0, 4 + 2), 1.0);
  // Centre: degree 2, two neighbours of degree 1.
  EXPECT_DOUBLE_EQ(f.features()(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(f.features()(1, 4 + 1), 2.0);
  c.wl_features = false;
  EXPECT_EQ(model_features(p, c).features().cols(), 4);
}

TEST(NeighborContext, MeanOfNeighbours) {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  Eigen::MatrixXd x(4, 1);
  x << 1, 2, 4, 8;
  const Eigen::MatrixXd h = neighbor_context(g, x);
  ASSERT_EQ(h.cols(), 2);
  EXPECT_DOUBLE_EQ(h(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(h(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(h(3, 0), 8.0);
  EXPECT_DOUBLE_EQ(h(3, 1), 0.0);
}

TEST(JointEmbed, SymmetricZeroAndOracle) {
  Rng rng(1);
  const std::vector<std::size_t> dims{5, 7, 3};
  const std::vector<Activation> acts{Activation::relu, Activation::identity};
  const Mlp phi(dims, acts, rng);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd a(5), b(5);
    for (Eigen::Index i = 0; i < 5; ++i) {
      a[i] = rng.normal();
      b[i] = rng.normal();
    }
    EXPECT_EQ(joint_embed(phi, a, b), joint_embed(phi, b, a));
    EXPECT_LT((joint_embed(phi, a, b) - oracle::mlp_forward(phi, a + b)).cwiseAbs().maxCoeff(), 1e-12);
  }
  const Mlp zero = Mlp::zeros(dims, acts);
  EXPECT_TRUE(joint_embed(zero, Eigen::VectorXd::Ones(5), Eigen::VectorXd::Ones(5)).isZero(0.0));
}

TEST(ScoreEdge, ZeroMonotoneAndOracle) {
  Rng rng(2);
  const std::vector<std::size_t> dims{4, 6, 1};
  const std::vector<Activation> acts{Activation::relu, Activation::sigmoid};
  EXPECT_DOUBLE_EQ(score_edge(Mlp::zeros(dims, acts), Eigen::VectorXd::Ones(4)), 0.5);
  Mlp head(dims, acts, rng);
  Eigen::VectorXd z(4);
  z << 0.3, -1.0, 2.0, 0.1;
  EXPECT_NEAR(score_edge(head, z), oracle::mlp_forward(head, z)[0], 1e-12);
  double prev = score_edge(head, z);
  for (int i = 0; i < 5; ++i) {
    head.layers().back().bias[0] += 0.5;
    const double s = score_edge(head, z);
    EXPECT_GT(s, prev);
    prev = s;
  }
  head.layers().back().bias[0] = 1e6;
  const double hi = score_edge(head, z);
  EXPECT_LT(hi, 1.0);
  head.layers().back().bias[0] = -1e6;
  EXPECT_GT(score_edge(head, z), 0.0);
}

TEST(Contract, ZeroScoresKeepGraph) {
  Rng rng(3);
  const Graph g = erdos_renyi(10, 0.3, rng);
  const LayerState s = singleton_state(g, 3, rng);
  const CoarseLayer out = contract(s, proposals_for(g, 3, 0.0, rng), rng);
  EXPECT_EQ(out.graph, g);
  EXPECT_EQ(out.spotlights, s.spotlights);
  EXPECT_EQ(out.embeddings, s.embeddings);
  for (std::ptrdiff_t m : out.merged_edge) EXPECT_EQ(m, -1);
}

TEST(Contract, SingleEdgeCertainMerge) {
  Rng rng(4);
  Graph g(2);
  g.add_edge(0, 1);
  const LayerState s = singleton_state(g, 3, rng);
  const EdgeProposals p = proposals_for(g, 3, 1.0, rng);
  const CoarseLayer out = contract(s, p, rng);
  ASSERT_EQ(out.graph.num_nodes(), 1u);
  EXPECT_EQ(out.spotlights[0], (Spotlight{0, 1}));
  EXPECT_EQ(out.embeddings.row(0), p.embeddings.row(0));
  EXPECT_DOUBLE_EQ(out.scores[0], 1.0);
  EXPECT_EQ(out.merged_edge[0], 0);
}

TEST(Contract, TriangleMergesExactlyOnce) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed);
    const Graph g = triangle();
    const LayerState s = singleton_state(g, 2, rng);
    const CoarseLayer out = contract(s, proposals_for(g, 2, 1.0, rng), rng);
    ASSERT_EQ(out.graph.num_nodes(), 2u);
    EXPECT_EQ(out.graph.num_edges(), 1u);
    std::size_t merged = 0;
    for (std::ptrdiff_t m : out.merged_edge) merged += m >= 0 ? 1 : 0;
    EXPECT_EQ(merged, 1u);
  }
}

TEST(Contract, RejectsMismatchedProposals) {
  Rng rng(5);
  const Graph g = triangle();
  const LayerState s = singleton_state(g, 2, rng);
  EdgeProposals p = proposals_for(g, 2, 0.5, rng);
  p.scores.resize(2);
  EXPECT_THROW(contract(s, p, rng), DimensionMismatch);
}

TEST(ForwardPass, EdgelessGraphStaysPut) {
  MinerConfig c = small_config();
  c.layers = 1;
  const MinerModel m = MinerModel::init(c);
  Rng rng(6);
  const auto layers = forward_pass(m, Graph(5), rng);
  ASSERT_EQ(layers.size(), 1u);
  EXPECT_EQ(layers[0].graph.num_nodes(), 5u);
  for (NodeId u = 0; u < 5; ++u) EXPECT_EQ(layers[0].spotlights[u], (Spotlight{u}));
}

TEST(ForwardPass, StructuralInvariants) {
  for (bool dummy : {false, true}) {
    MinerConfig c = small_config();
    c.dummy = dummy;
    const MinerModel m = MinerModel::init(c);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      Rng rng(seed);
      const Graph g = erdos_renyi(3 + rng.below(25), 0.05 + 0.3 * rng.uniform(), rng);
      const auto layers = forward_pass(m, g, rng);
      ASSERT_EQ(layers.size(), c.layers);
      const std::string why = oracle::layer_violation(g, layers);
      ASSERT_TRUE(why.empty()) << why << " (seed " << seed << ", dummy " << dummy << ")";
      std::size_t prev = g.num_nodes();
      for (const auto& l : layers) {
        EXPECT_LE(l.graph.num_nodes(), prev);
        prev = l.graph.num_nodes();
      }
    }
  }
}

TEST(ForwardPass, DummyScoresAreHalf) {
  MinerConfig c = small_config();
  c.dummy = true;
  const MinerModel m = MinerModel::init(c);
  Rng rng(7);
  const auto layers = forward_pass(m, erdos_renyi(12, 0.3, rng), rng);
  for (const auto& l : layers) {
    for (Eigen::Index i = 0; i < l.scores.size(); ++i) EXPECT_DOUBLE_EQ(l.scores[i], 0.5);
    for (Eigen::Index i = 0; i < l.proposals.scores.size(); ++i) EXPECT_DOUBLE_EQ(l.proposals.scores[i], 0.5);
  }
}

TEST(ForwardPass, DeterministicPerSeed) {
  const MinerModel m = MinerModel::init(small_config());
  Rng g_rng(8);
  const Graph g = erdos_renyi(15, 0.3, g_rng);
  Rng a(9), b(9);
  const auto la = forward_pass(m, g, a), lb = forward_pass(m, g, b);
  for (std::size_t t = 0; t < la.size(); ++t) {
    EXPECT_EQ(la[t].spotlights, lb[t].spotlights);
    EXPECT_EQ(la[t].embeddings, lb[t].embeddings);
  }
}

TEST(ForwardPass, RejectsWrongFeatureWidth) {
  const MinerModel m = MinerModel::init(small_config());
  Graph g(3);
  g.set_features(Eigen::MatrixXd::Ones(3, 7));
  Rng rng(1);
  EXPECT_THROW(forward_pass(m, g, rng), DimensionMismatch);
}

TEST(Density, UnitBallVolumes) {
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-15);
  EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, 1e-15);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 / 3.0 * std::numbers::pi, 1e-14);
}

TEST(Density, UniformSquareIsAboutOne) {
  Rng rng(10);
  Eigen::MatrixXd pts(2000, 2);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = rng.uniform();
  const auto est = knn_density_all(pts, pts, 16, true);
  double sum = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const double x = pts(i, 0), y = pts(i, 1);
    if (x < 0.1 || x > 0.9 || y < 0.1 || y > 0.9) continue;
    sum += est[static_cast<std::size_t>(i)].value;
    ++count;
  }
  EXPECT_NEAR(sum / count, 1.0, 0.15);
}

TEST(Density, KthDistanceMatchesSortOracle) {
  Rng rng(11);
  Eigen::MatrixXd pts(200, 3);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = rng.normal();
  for (int q = 0; q < 100; ++q) {
    Eigen::VectorXd z(3);
    for (Eigen::Index i = 0; i < 3; ++i) z[i] = rng.normal();
    const std::size_t k = 1 + rng.below(20);
    EXPECT_EQ(kth_neighbor_distance(z, pts, k), oracle::kth_distance(z, pts, k));
    const std::size_t ex = rng.below(200);
    EXPECT_EQ(kth_neighbor_distance(z, pts, k, ex), oracle::kth_distance(z, pts, k, static_cast<long>(ex)));
  }
}

TEST(Density, BatchedMatchesSingleQueries) {
  Rng rng(12);
  Eigen::MatrixXd pts(60, 4), qs(20, 4);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = rng.normal();
  for (Eigen::Index i = 0; i < qs.size(); ++i) qs.data()[i] = rng.normal();
  const auto self = knn_density_all(pts, pts, 5, true);
  const auto cross = knn_density_all(qs, pts, 5, false);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const auto one = knn_density(pts.row(i).transpose(), pts, 5, static_cast<std::size_t>(i));
    EXPECT_NEAR(self[static_cast<std::size_t>(i)].radius, one.radius, 1e-9);
  }
  for (Eigen::Index i = 0; i < qs.rows(); ++i) {
    const auto one = knn_density(qs.row(i).transpose(), pts, 5);
    EXPECT_NEAR(cross[static_cast<std::size_t>(i)].value / one.value, 1.0, 1e-6);
  }
}

TEST(Density, DuplicatesAreClampedDeterministically) {
  const Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(10, 2);
  const auto est = knn_density(Eigen::VectorXd::Zero(2), pts, 3);
  EXPECT_TRUE(est.degenerate);
  EXPECT_DOUBLE_EQ(est.radius, kMinRadius);
  EXPECT_TRUE(std::isfinite(est.value));
  EXPECT_THROW(knn_density(Eigen::VectorXd::Zero(2), pts, 10), ConfigError);
}

TEST(RepLoss, HandExamples) {
  RepSample same{Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(1.0, 0.0), 1.0};
  EXPECT_DOUBLE_EQ(representation_loss(std::span<const RepSample>(&same, 1)), 0.0);
  std::vector<RepSample> zeros(4, RepSample{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), 0.5});
  EXPECT_DOUBLE_EQ(representation_loss(zeros), 0.25);
  std::vector<RepSample> mixed{{Eigen::Vector2d(1, 2), Eigen::Vector2d(3, -1), 0.2},
                               {Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(2, 2), 1.0}};
  // (1 - 0.2)^2 = 0.64 and (2 - 1)^2 = 1.
  EXPECT_DOUBLE_EQ(representation_loss(mixed), (0.64 + 1.0) / 2.0);
}

TEST(RepLoss, TinyBatchMatchesRecomputation) {
  // Two isolated nodes, one layer: every sampled pair is the same pair.
  MinerConfig c = small_config();
  c.layers = 1;
  const MinerModel m = MinerModel::init(c);
  Graph g(2);
  const Graph kernel_graph = init_features(g, c.input_dim);
  GraphPass pass;
  pass.graph = &kernel_graph;
  Rng rng(13);
  pass.layers = forward_pass(m, g, rng, &pass.tapes);
  const auto& l = pass.layers[0];
  ASSERT_EQ(l.graph.num_nodes(), 2u);
  const double sim = sim_g(kernel_graph.induced_subgraph(l.spotlights[0]),
                           kernel_graph.induced_subgraph(l.spotlights[1]), c.kernel);
  EXPECT_DOUBLE_EQ(sim, 1.0);
  // The stored embeddings are phi applied to [x, 0] of each isolated node.
  const Graph in = model_features(g, c);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(c.feature_dim()));
  h.head(static_cast<Eigen::Index>(c.feature_dim())) = in.features().row(0).transpose();
  const Eigen::VectorXd z = oracle::mlp_forward(m.embed[0], h);
  EXPECT_LT((l.embeddings.row(0).transpose() - z).cwiseAbs().maxCoeff(), 1e-12);
  const double r = z.dot(z) - sim;
  Rng pair_rng(14);
  const RepLossResult res = rep_loss(m, std::span<const GraphPass>(&pass, 1), 8, pair_rng);
  EXPECT_EQ(res.pairs, 8u);
  EXPECT_NEAR(res.loss, r * r, 1e-12);
}

TEST(RepLoss, GradientMatchesFiniteDifferences) {
  for (bool context : {true, false}) {
    MinerConfig c = small_config();
    c.dummy = true;  // fixed contraction probabilities keep the structure stable under perturbation
    c.neighbor_context = context;
    MinerModel m = MinerModel::init(c);
    Rng grng(15);
    // Zero biases put dead units exactly on the relu kink.
    for (Mlp& phi : m.embed) {
      for (auto& layer : phi.layers()) {
        for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias[i] = 0.1 * grng.normal();
      }
    }
    std::vector<Graph> graphs, kernel;
    for (int i = 0; i < 3; ++i) graphs.push_back(erdos_renyi(6 + grng.below(4), 0.35, grng));
    for (const Graph& g : graphs) kernel.push_back(init_features(g, c.input_dim));

    auto run = [&](const MinerModel& model) {
      std::vector<GraphPass> batch(graphs.size());
      for (std::size_t i = 0; i < graphs.size(); ++i) {
        Rng rng = Rng::derive(99, {i});
        batch[i].graph = &kernel[i];
        batch[i].layers = forward_pass(model, graphs[i], rng, &batch[i].tapes);
      }
      Rng pair_rng(16);
      return rep_loss(model, batch, 24, pair_rng);
    };
    const RepLossResult base = run(m);
    for (std::size_t t = 0; t < c.layers; ++t) {
      const Eigen::VectorXd p0 = m.embed[t].parameters();
      const Eigen::VectorXd num = oracle::numeric_gradient(
          [&](const Eigen::VectorXd& p) {
            MinerModel probe = m;
            probe.embed[t].set_parameters(p);
            return run(probe).loss;
          },
          p0);
      EXPECT_LT(oracle::max_relative_error(base.embed_grads[t].flatten(), num), 1e-4)
          << "layer " << t << " context " << context;
    }
  }
}

TEST(ConcLoss, BetaZeroIsQuadratic) {
  const Eigen::Vector3d s(0.2, 0.5, 0.9);
  const Eigen::Vector3d delta(3.0, -1.0, 0.0);
  const ConcLossResult r = concentration_loss(s, delta, 0.0, 1.0, DeltaSign::prose, 10.0);
  EXPECT_NEAR(r.loss, -s.sum() + s.squaredNorm(), 1e-12);
  // Per-term optimum of -s + s^2 is s = 0.5.
  const ConcLossResult at_half = concentration_loss(Eigen::Vector3d::Constant(0.5), delta, 0.0, 1.0,
                                                    DeltaSign::paper, 10.0);
  EXPECT_TRUE(at_half.grad.isZero(1e-15));
}

TEST(ConcLoss, HandComputationBothSigns) {
  const Eigen::Vector2d s(0.3, 0.8);
  const Eigen::Vector2d delta(1.0, -2.0);
  const double beta = 0.5, lambda = 2.0;
  // prose: w = exp(+beta * delta); paper: w = exp(-beta * delta).
  const double wp0 = std::exp(0.5), wp1 = std::exp(-1.0);
  const ConcLossResult prose = concentration_loss(s, delta, beta, lambda, DeltaSign::prose, 10.0);
  EXPECT_NEAR(prose.loss, -0.3 * wp0 - 0.8 * wp1 + 2.0 * (0.09 + 0.64), 1e-12);
  EXPECT_NEAR(prose.grad[0], -wp0 + 4.0 * 0.3, 1e-12);
  const ConcLossResult paper = concentration_loss(s, delta, beta, lambda, DeltaSign::paper, 10.0);
  EXPECT_NEAR(paper.loss, -0.3 * std::exp(-0.5) - 0.8 * std::exp(1.0) + 2.0 * (0.09 + 0.64), 1e-12);
  // Clipping caps the exponent.
  const ConcLossResult clipped = concentration_loss(s, Eigen::Vector2d(100.0, 0.0), 1.0, 1.0, DeltaSign::prose, 3.0);
  EXPECT_NEAR(clipped.weights[0], std::exp(3.0), 1e-12);
}

TEST(ConcLoss, HeadGradientMatchesFiniteDifferences) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<std::size_t> dims{4, 1 + rng.below(12), 1};
    const std::vector<Activation> acts{Activation::relu, Activation::sigmoid};
    const Mlp head(dims, acts, rng);
    const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng.below(10));
    Eigen::MatrixXd Z(n, 4);
    for (Eigen::Index i = 0; i < Z.size(); ++i) Z.data()[i] = rng.normal();
    Eigen::VectorXd delta(n);
    for (Eigen::Index i = 0; i < n; ++i) delta[i] = rng.normal();
    const DeltaSign sign = trial % 2 ? DeltaSign::paper : DeltaSign::prose;
    auto scores_of = [&](const Mlp& h) {
      Eigen::VectorXd s(n);
      for (Eigen::Index i = 0; i < n; ++i) s[i] = score_edge(h, Z.row(i).transpose());
      return s;
    };
    const ConcLossResult r = concentration_loss(scores_of(head), delta, 1.0, 1.0, sign, 10.0);
    MlpGradient g(head);
    for (Eigen::Index i = 0; i < n; ++i) {
      Tape tape;
      head.forward(Z.row(i).transpose(), tape);
      head.backward(tape, Eigen::VectorXd::Constant(1, r.grad[i]), g);
    }
    const Eigen::VectorXd num = oracle::numeric_gradient(
        [&](const Eigen::VectorXd& p) {
          Mlp probe = head;
          probe.set_parameters(p);
          return concentration_loss(scores_of(probe), delta, 1.0, 1.0, sign, 10.0).loss;
        },
        head.parameters());
    EXPECT_LT(oracle::max_relative_error(g.flatten(), num), 1e-4) << "trial " << trial;
  }
}

TEST(DensityContrast, LogRatioAndDifference) {
  Rng rng(18);
  Eigen::MatrixXd Z(40, 2), Zn(50, 2);
  for (Eigen::Index i = 0; i < Z.size(); ++i) Z.data()[i] = 0.1 * rng.normal();
  for (Eigen::Index i = 0; i < Zn.size(); ++i) Zn.data()[i] = 3.0 * rng.normal();
  const Eigen::VectorXd diff = density_contrast(Z, Zn, 5, DeltaMode::difference);
  const Eigen::VectorXd logr = density_contrast(Z, Zn, 5, DeltaMode::log_ratio);
  const auto own = knn_density_all(Z, Z, 5, true);
  const auto null = knn_density_all(Z, Zn, 5, false);
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    const auto u = static_cast<std::size_t>(i);
    EXPECT_NEAR(diff[i], own[u].value - null[u].value, 1e-9 * std::abs(own[u].value));
    EXPECT_NEAR(logr[i], std::log(own[u].value / null[u].value), 1e-9);
    EXPECT_GT(logr[i], 0.0);  // the data cloud is much tighter than the null cloud
  }
}

TEST(Training, ZeroLearningRateKeepsParameters) {
  const DatasetBundle d = build_dataset({Topology::clique, 5, 1, 1.0, 0.0}, 20, 1);
  MinerConfig c = small_config();
  c.epochs = 1;
  c.learning_rate = 0.0;
  const MinerModel init = MinerModel::init(c);
  const TrainResult r = train(d, c);
  for (std::size_t t = 0; t < c.layers; ++t) {
    EXPECT_EQ(r.model.embed[t].parameters(), init.embed[t].parameters());
    EXPECT_EQ(r.model.score[t].parameters(), init.score[t].parameters());
  }
  EXPECT_EQ(r.trace.rep_loss.size(), 1u);
}

TEST(Training, RepresentationLossTrendsDown) {
  const DatasetBundle d = build_dataset({Topology::clique, 5, 1, 1.0, 0.0}, 50, 2);
  MinerConfig c;
  c.train_scoring = false;
  c.epochs = 10;
  c.seed = 3;
  const TrainResult r = train(d, c);
  ASSERT_EQ(r.trace.rep_loss.size(), 10u);
  int violations = 0;
  for (std::size_t e = 1; e < r.trace.rep_loss.size(); ++e) {
    if (!(r.trace.rep_loss[e] < r.trace.rep_loss[e - 1])) ++violations;
  }
  EXPECT_LE(violations, 2);
  EXPECT_LT(r.trace.rep_loss.back(), r.trace.rep_loss.front());
}

TEST(Training, ScheduleIndependentAndResumable) {
  const DatasetBundle d = build_dataset({Topology::star, 5, 1, 1.0, 0.0}, 24, 4);
  MinerConfig c = small_config();
  c.epochs = 2;
  c.batch_size = 8;
  const TrainResult one = train(d, c, 1);
  const TrainResult four = train(d, c, 4);
  EXPECT_EQ(to_json(one).dump(), to_json(four).dump());
  c.epochs = 1;
  TrainResult half = train(d, c, 1);
  TrainResult resumed = train(d, std::move(half), 1);
  resumed.model.config.epochs = 2;
  EXPECT_EQ(to_json(resumed).dump(), to_json(one).dump());
}

TEST(Training, CheckpointRoundTrip) {
  const DatasetBundle d = build_dataset({Topology::star, 5, 1, 1.0, 0.0}, 10, 4);
  MinerConfig c = small_config();
  c.epochs = 1;
  const TrainResult r = train(d, c);
  const nlohmann::json j = to_json(r);
  const TrainResult back = train_result_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(to_json(back).dump(), j.dump());
  nlohmann::json tampered = j;
  tampered["config"]["dim"] = 5;
  EXPECT_THROW(train_result_from_json(tampered), ConfigError);
  EXPECT_EQ(trace_csv(r.trace).substr(0, 18), "epoch,L_rep,L_conc");
}

TEST(Training, RejectsBadConfig) {
  const DatasetBundle d = build_dataset({Topology::star, 5, 1, 1.0, 0.0}, 4, 4);
  MinerConfig c = small_config();
  c.layers = 0;
  EXPECT_THROW(train(d, c), ConfigError);
  c = small_config();
  c.learning_rate = -1.0;
  EXPECT_THROW(train(d, c), ConfigError);
  c = small_config();
  c.k_nn = 0;
  EXPECT_THROW(train(d, c), ConfigError);
}
