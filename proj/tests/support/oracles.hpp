#pragma once

// Slow reference implementations used to cross-check the library. None of
// these call into the code paths they check.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <motifmine/motifmine.hpp>

namespace oracle {

using motifmine::AssignmentMatrix;
using motifmine::CoarseLayer;
using motifmine::Graph;
using motifmine::Mlp;
using motifmine::NodeId;

/// M-Jaccard by enumerating every column permutation of the padded truth.
double m_jaccard(const AssignmentMatrix& yhat, const AssignmentMatrix& y);

/// Minimum assignment cost by enumerating permutations (rows <= cols <= 8).
double min_assignment(const Eigen::MatrixXd& cost);

/// k-th smallest distance from z to the rows of points, by full sort.
double kth_distance(const Eigen::VectorXd& z, const Eigen::MatrixXd& points, std::size_t k, long exclude = -1);

/// Every k-subset of the nodes that induces a connected subgraph, sorted.
std::vector<std::vector<NodeId>> connected_subsets(const Graph& g, std::size_t k);

/// Connectivity of the subgraph induced by nodes, by DFS on an adjacency matrix.
bool connected(const Graph& g, const std::vector<NodeId>& nodes);

/// Isomorphism of the subgraphs induced by a and b (same size, <= 8 nodes).
bool isomorphic(const Graph& g, const std::vector<NodeId>& a, const Graph& h, const std::vector<NodeId>& b);

/// MLP output with explicit scalar loops.
Eigen::VectorXd mlp_forward(const Mlp& mlp, const Eigen::VectorXd& x);

/// Central differences of f at p with step h.
Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd p,
                                 double h = 1e-5);

/// Largest per-entry |a - n| / max(|a|, |n|, floor). The floor keeps
/// near-zero entries from turning rounding noise into large ratios.
double max_relative_error(const Eigen::VectorXd& analytic, const Eigen::VectorXd& numeric, double floor = 1e-3);

/// Checks spotlight connectivity, partition, monotone coverage and score
/// ranges of one forward pass. Returns an empty string or the first violation.
std::string layer_violation(const Graph& g, const std::vector<CoarseLayer>& layers);

}  // namespace oracle
