#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace motifmine {

/// Solution of a linear assignment problem.
struct Assignment {
  std::vector<std::size_t> row_to_col;
  double cost = 0.0;
};

/// Minimum-cost perfect assignment of rows to distinct columns
/// (Hungarian algorithm with potentials, O(n^2 m)). Requires rows <= cols.
Assignment solve_min_assignment(const Eigen::MatrixXd& cost);

/// Same, maximizing total weight.
Assignment solve_max_assignment(const Eigen::MatrixXd& weight);

}  // namespace motifmine
