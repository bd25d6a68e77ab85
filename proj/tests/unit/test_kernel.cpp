#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include <motifmine/motifmine.hpp>

#include "oracles.hpp"

using namespace motifmine;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform() * 10.0;
  return m;
}

Graph with_degree_features(const Graph& g) {
  Graph out = g;
  Eigen::MatrixXd f(static_cast<Eigen::Index>(g.num_nodes()), 1);
  for (NodeId u = 0; u < g.num_nodes(); ++u) f(static_cast<Eigen::Index>(u), 0) = static_cast<double>(g.degree(u));
  out.set_features(f);
  return out;
}

Graph relabel(const Graph& g, const std::vector<NodeId>& perm) {
  Graph out(g.num_nodes());
  for (const Edge& e : g.edges()) out.add_edge(perm[e.u], perm[e.v]);
  Eigen::MatrixXd f(g.features().rows(), g.features().cols());
  for (NodeId u = 0; u < g.num_nodes(); ++u) f.row(static_cast<Eigen::Index>(perm[u])) = g.features().row(static_cast<Eigen::Index>(u));
  out.set_features(f);
  return out;
}

}  // namespace

TEST(Lap, MatchesBruteForceSquareAndRectangular) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index r = 1 + static_cast<Eigen::Index>(rng.below(6));
    const Eigen::Index c = r + static_cast<Eigen::Index>(rng.below(3));
    const Eigen::MatrixXd cost = random_matrix(r, c, rng);
    const Assignment a = solve_min_assignment(cost);
    EXPECT_NEAR(a.cost, oracle::min_assignment(cost), 1e-9);
    double check = 0.0;
    std::vector<bool> used(static_cast<std::size_t>(c), false);
    for (Eigen::Index i = 0; i < r; ++i) {
      const std::size_t j = a.row_to_col[static_cast<std::size_t>(i)];
      ASSERT_LT(j, static_cast<std::size_t>(c));
      EXPECT_FALSE(used[j]);
      used[j] = true;
      check += cost(i, static_cast<Eigen::Index>(j));
    }
    EXPECT_NEAR(check, a.cost, 1e-9);
  }
}

TEST(Lap, MaximizeIsNegatedMinimize) {
  Rng rng(2);
  const Eigen::MatrixXd w = random_matrix(4, 4, rng);
  EXPECT_NEAR(solve_max_assignment(w).cost, -oracle::min_assignment(-w), 1e-9);
  EXPECT_THROW(solve_min_assignment(Eigen::MatrixXd::Zero(3, 2)), ConfigError);
}

TEST(Transport, SquareRoutesAgree) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(6));
    const Eigen::MatrixXd cost = random_matrix(n, n, rng);
    const double expect = oracle::min_assignment(cost) / static_cast<double>(n);
    EXPECT_NEAR(uniform_transport_cost(cost), expect, 1e-9);
    EXPECT_NEAR(uniform_transport_cost_flow(cost), expect, 1e-9);
  }
}

TEST(Transport, UnequalSizesHandExamples) {
  // One source spreads evenly over every target.
  Eigen::MatrixXd one(1, 3);
  one << 1.0, 2.0, 6.0;
  EXPECT_NEAR(uniform_transport_cost(one), 3.0, 1e-12);
  // Two sources of mass 1/2 into three targets of mass 1/3: the cheap plan
  // sends row 0 to columns 0 and half of 1, row 1 to the rest.
  Eigen::MatrixXd two(2, 3);
  two << 0.0, 1.0, 5.0,
         5.0, 1.0, 0.0;
  EXPECT_NEAR(uniform_transport_cost(two), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(uniform_transport_cost(two.transpose()), 1.0 / 3.0, 1e-12);
}

TEST(Transport, UnequalSizesViaReplicationOracle) {
  // Uniform n x m transport equals the n*m-point assignment obtained by
  // replicating each row m times and each column n times.
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(2));
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.below(2));
    if (n * m > 8) continue;
    const Eigen::MatrixXd cost = random_matrix(n, m, rng);
    Eigen::MatrixXd big(n * m, n * m);
    for (Eigen::Index i = 0; i < n * m; ++i) {
      for (Eigen::Index j = 0; j < n * m; ++j) big(i, j) = cost(i / m, j / n);
    }
    EXPECT_NEAR(uniform_transport_cost(cost), oracle::min_assignment(big) / static_cast<double>(n * m), 1e-9);
  }
}

TEST(Wl, ZeroIterationsIsInput) {
  Rng rng(5);
  const Graph g = init_features(erdos_renyi(8, 0.3, rng), 10);
  const WlEmbedding e = wl_refine(g, 0);
  EXPECT_EQ(e.rows, g.features());
}

TEST(Wl, TriangleStaysUniform) {
  Graph k3(3);
  k3.add_edge(0, 1);
  k3.add_edge(1, 2);
  k3.add_edge(0, 2);
  k3.set_features(Eigen::MatrixXd::Constant(3, 2, 0.7));
  const WlEmbedding e = wl_refine(k3, 3);
  EXPECT_EQ(e.rows.cols(), 8);
  EXPECT_TRUE(e.rows.row(0).isApprox(e.rows.row(1)));
  EXPECT_TRUE(e.rows.row(1).isApprox(e.rows.row(2)));
}

TEST(Wl, PathHandComputation) {
  Graph p(3);
  p.add_edge(0, 1);
  p.add_edge(1, 2);
  p.set_features(Eigen::MatrixXd::Ones(3, 1));
  const WlEmbedding flat = wl_refine(p, 1);
  EXPECT_TRUE(flat.rows.row(0).isApprox(flat.rows.row(1)));
  // Degree input: endpoints 0.5 * (1 + 2) = 1.5, centre 0.5 * (2 + 1) = 1.5.
  const WlEmbedding deg = wl_refine(with_degree_features(p), 1);
  EXPECT_DOUBLE_EQ(deg.rows(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(deg.rows(0, 1), 1.5);
  EXPECT_DOUBLE_EQ(deg.rows(1, 0), 2.0);
  EXPECT_DOUBLE_EQ(deg.rows(1, 1), 1.5);
  EXPECT_DOUBLE_EQ(deg.rows(2, 1), 1.5);
}

TEST(SimG, SelfSimilarityAndSymmetry) {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph a = init_features(erdos_renyi(3 + rng.below(6), 0.4, rng), 10);
    const Graph b = init_features(erdos_renyi(3 + rng.below(6), 0.4, rng), 10);
    EXPECT_DOUBLE_EQ(sim_g(a, a), 1.0);
    const double ab = sim_g(a, b), ba = sim_g(b, a);
    EXPECT_NEAR(ab, ba, 1e-12);
    EXPECT_GT(ab, 0.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(SimG, PermutedCopiesAreIdentical) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = init_features(erdos_renyi(7, 0.4, rng), 10);
    std::vector<NodeId> perm(7);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    rng.shuffle(std::span<NodeId>(perm));
    EXPECT_NEAR(sim_g(g, relabel(g, perm)), 1.0, 1e-12);
  }
  Rng r(8);
  const Graph k4 = init_features(make_motif(Topology::clique, 4, r), 10);
  EXPECT_NEAR(sim_g(k4, relabel(k4, {2, 0, 3, 1})), 1.0, 1e-12);
}

TEST(SimG, CliqueCloserToItselfThanToStar) {
  Rng rng(9);
  const Graph k5 = init_features(make_motif(Topology::clique, 5, rng), 10);
  const Graph s5 = init_features(make_motif(Topology::star, 5, rng), 10);
  EXPECT_GE(sim_g(k5, k5), sim_g(k5, s5));
  EXPECT_LT(sim_g(k5, s5), 1.0);
}

TEST(SimG, GammaControlsScale) {
  Rng rng(10);
  const Graph k5 = init_features(make_motif(Topology::clique, 5, rng), 10);
  const Graph s5 = init_features(make_motif(Topology::star, 5, rng), 10);
  const double w = wl_wasserstein(k5, s5, 2);
  EXPECT_NEAR(sim_g(k5, s5, {2, 0.1}), std::exp(-0.1 * w), 1e-12);
  EXPECT_NEAR(sim_g(k5, s5, {2, 1.0}), std::exp(-w), 1e-12);
}
