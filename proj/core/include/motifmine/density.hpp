#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace motifmine {

/// Radius floor used when the k-th neighbour coincides with the query.
inline constexpr double kMinRadius = 1e-12;

/// Volume of the unit ball in R^d: pi^(d/2) / Gamma(d/2 + 1).
double unit_ball_volume(std::size_t d);

struct DensityEstimate {
  double value = 0.0;
  double radius = 0.0;       // distance to the k-th neighbour (after clamping)
  bool degenerate = false;   // raw radius was 0 and got clamped
};

/// Distance from z to its k-th nearest row of `points` (k >= 1), skipping
/// row `exclude` when given. Exact brute force.
double kth_neighbor_distance(const Eigen::VectorXd& z, const Eigen::MatrixXd& points, std::size_t k,
                             std::optional<std::size_t> exclude = std::nullopt);

/// k-NN density estimate f(z) = (k / N) / (c_d * R_k^d), where N counts the
/// reference points actually searched (the excluded row does not count).
/// Requires k >= 1 and more than k searchable points; throws ConfigError
/// otherwise.
DensityEstimate knn_density(const Eigen::VectorXd& z, const Eigen::MatrixXd& points, std::size_t k,
                            std::optional<std::size_t> exclude = std::nullopt);

/// Densities of every row of `queries` under `points`. With `self == true`
/// the queries are the reference set and row i skips itself.
std::vector<DensityEstimate> knn_density_all(const Eigen::MatrixXd& queries,
                                             const Eigen::MatrixXd& points, std::size_t k,
                                             bool self);

}  // namespace motifmine
