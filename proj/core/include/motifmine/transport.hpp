#pragma once

#include <Eigen/Dense>

namespace motifmine {

/// Exact optimal transport cost between two uniform discrete measures
/// (weights 1/n on the rows, 1/m on the columns) for the given n x m ground
/// cost matrix.
///
/// Equal sizes reduce to a linear assignment (a permutation is an optimal
/// vertex of the Birkhoff polytope). Unequal sizes are solved as an integer
/// min-cost flow with supplies m per row and demands n per column by
/// successive shortest paths with Dijkstra potentials, then rescaled by 1/(nm).
double uniform_transport_cost(const Eigen::MatrixXd& cost);

/// The min-cost flow route only; exposed so tests can cross-check it against
/// the assignment route on square instances.
double uniform_transport_cost_flow(const Eigen::MatrixXd& cost);

}  // namespace motifmine
