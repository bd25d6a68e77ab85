#include <gtest/gtest.h>

#include <numeric>

#include <motifmine/motifmine.hpp>

using namespace motifmine;

namespace {

CoarseLayer scored_layer(const Eigen::MatrixXd& z, const Eigen::VectorXd& s) {
  CoarseLayer l;
  l.graph = Graph(static_cast<std::size_t>(z.rows()));
  l.embeddings = z;
  l.scores = s;
  for (NodeId u = 0; u < l.graph.num_nodes(); ++u) l.spotlights.push_back({u});
  return l;
}

}  // namespace

TEST(GraphEmbedding, HandExamples) {
  Eigen::MatrixXd z1(3, 2), z2(2, 2);
  z1 << 1, 0, 0, 1, 2, 2;
  z2 << 4, 4, 0, 0;
  const std::vector<CoarseLayer> layers{scored_layer(z1, Eigen::Vector3d(0.1, 0.7, 0.3)),
                                        scored_layer(z2, Eigen::Vector2d(0.2, 0.2))};
  Rng rng(1);
  Eigen::VectorXd all(4);
  all << 1, 1, 2, 2;
  EXPECT_TRUE(graph_embedding(layers, 0, Selection::top, rng).isApprox(all));
  EXPECT_TRUE(graph_embedding(layers, 5, Selection::random, rng).isApprox(all));
  // Top-1: node 1 of layer 1; the tie in layer 2 goes to the lower index.
  Eigen::VectorXd top1(4);
  top1 << 0, 1, 4, 4;
  EXPECT_EQ(graph_embedding(layers, 1, Selection::top, rng), top1);
  Eigen::VectorXd top2(4);
  top2 << 1, 1.5, 2, 2;
  EXPECT_TRUE(graph_embedding(layers, 2, Selection::top, rng).isApprox(top2));
  EXPECT_THROW(graph_embedding(std::vector<CoarseLayer>{}, 1, Selection::top, rng), ConfigError);
}

TEST(GraphEmbedding, WidthIsLayersTimesDim) {
  MinerConfig c;
  c.layers = 3;
  c.dim = 5;
  const MinerModel m = MinerModel::init(c);
  Rng rng(2);
  for (std::size_t n : {1, 4, 30}) {
    EXPECT_EQ(graph_embedding(m, erdos_renyi(n, 0.2, rng), 1, Selection::random, rng).size(), 15);
  }
}

TEST(Logistic, SeparableDataIsLearned) {
  Rng rng(3);
  const Eigen::Index n = 400;
  Eigen::MatrixXd X(n, 3);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int label = i % 2;
    y[static_cast<std::size_t>(i)] = label;
    X(i, 0) = (label ? 2.0 : -2.0) + 0.5 * rng.normal();
    X(i, 1) = rng.normal();
    X(i, 2) = 100.0 + rng.normal();  // standardization handles the offset
  }
  const auto acc = cross_validated_accuracy(X, y, {}, 4);
  ASSERT_EQ(acc.size(), 5u);
  for (double a : acc) EXPECT_GT(a, 0.95);
}

TEST(Logistic, ShuffledLabelsAreAtChance) {
  Rng rng(5);
  const Eigen::Index n = 1000;
  Eigen::MatrixXd X(n, 6);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
  std::vector<int> y(static_cast<std::size_t>(n));
  for (auto& v : y) v = static_cast<int>(rng.below(2));
  const auto acc = cross_validated_accuracy(X, y, {}, 6);
  const double mean = std::accumulate(acc.begin(), acc.end(), 0.0) / static_cast<double>(acc.size());
  EXPECT_NEAR(mean, 0.5, 0.05);
  EXPECT_EQ(acc, cross_validated_accuracy(X, y, {}, 6));
  EXPECT_THROW(cross_validated_accuracy(X, std::span<const int>(y).first(10), {}, 6), DimensionMismatch);
}

TEST(Ablation, TableShapeAndAllNodesControl) {
  MinerConfig c;
  c.layers = 2;
  c.dim = 4;
  c.seed = 7;
  const MinerModel m = MinerModel::init(c);
  const DatasetBundle d = build_dataset({Topology::clique, 5, 1, 0.5, 0.0}, 40, 8);
  LogisticConfig lc;
  lc.folds = 4;
  lc.epochs = 50;
  const std::vector<std::size_t> ks{1, 2, 0};
  const auto rows = ablation_study(m, d, ks, 9, lc);
  EXPECT_EQ(rows.size(), ks.size() * 2 * lc.folds);
  // With every node selected the two modes see identical features.
  EXPECT_DOUBLE_EQ(mean_accuracy(rows, 0, Selection::top), mean_accuracy(rows, 0, Selection::random));
  for (const auto& r : rows) {
    EXPECT_GE(r.accuracy, 0.0);
    EXPECT_LE(r.accuracy, 1.0);
  }
  const std::string csv = ablation_csv(rows);
  EXPECT_EQ(csv.rfind("k,mode,fold,accuracy\n", 0), 0u);
  EXPECT_NE(csv.find("\nall,top,0,"), std::string::npos);
  EXPECT_EQ(ablation_study(m, d, ks, 9, lc, 3).size(), rows.size());
  const auto again = ablation_study(m, d, ks, 9, lc, 3);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(again[i].accuracy, rows[i].accuracy);
}
