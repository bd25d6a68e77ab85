#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "motifmine/graph.hpp"

namespace motifmine {

/// Stacked continuous WL refinements: |V| x (h+1)*d_in.
struct WlEmbedding {
  Eigen::MatrixXd rows;
  std::size_t iterations = 0;
};

struct KernelConfig {
  std::size_t iterations = 2;  // h
  double gamma = 1.0;          // similarity = exp(-gamma * W)
};

/// Continuous Weisfeiler-Leman refinement of the node features.
/// Iteration 0 is the feature matrix; each further iteration replaces a node's
/// vector by 0.5 * (own + mean of neighbours). Isolated nodes keep their vector.
WlEmbedding wl_refine(const Graph& g, std::size_t iterations);

/// Wasserstein distance between the WL point clouds of two graphs
/// (uniform node weights, Euclidean ground cost).
double wl_wasserstein(const Graph& a, const Graph& b, std::size_t iterations);

/// Graph similarity in (0, 1]: exp(-gamma * W). Equal to 1 for isomorphic
/// graphs with matching features.
double sim_g(const Graph& a, const Graph& b, const KernelConfig& config = {});

}  // namespace motifmine
