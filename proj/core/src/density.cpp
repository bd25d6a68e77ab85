#include "motifmine/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "motifmine/errors.hpp"

namespace motifmine {

double unit_ball_volume(std::size_t d) {
  const double half = 0.5 * static_cast<double>(d);
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double kth_neighbor_distance(const Eigen::VectorXd& z, const Eigen::MatrixXd& points, std::size_t k,
                             std::optional<std::size_t> exclude) {
  if (z.size() != points.cols()) throw DimensionMismatch("query and reference dimensions differ");
  const auto n = static_cast<std::size_t>(points.rows());
  const std::size_t searchable = n - (exclude && *exclude < n ? 1 : 0);
  if (k < 1 || searchable < k) {
    throw ConfigError("kNN needs 1 <= k <= number of reference points (k=" + std::to_string(k) +
                      ", points=" + std::to_string(searchable) + ")");
  }
  std::vector<double> sq;
  sq.reserve(searchable);
  for (std::size_t i = 0; i < n; ++i) {
    if (exclude && *exclude == i) continue;
    double acc = 0.0;
    for (Eigen::Index c = 0; c < z.size(); ++c) {
      const double diff = points(static_cast<Eigen::Index>(i), c) - z[c];
      acc += diff * diff;
    }
    sq.push_back(acc);
  }
  std::nth_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(k - 1), sq.end());
  return std::sqrt(sq[k - 1]);
}

namespace {

DensityEstimate finish(double radius, std::size_t k, std::size_t searched, std::size_t d) {
  DensityEstimate est;
  est.degenerate = !(radius > 0.0);
  est.radius = est.degenerate ? kMinRadius : std::max(radius, kMinRadius);
  est.value = (static_cast<double>(k) / static_cast<double>(searched)) /
              (unit_ball_volume(d) * std::pow(est.radius, static_cast<double>(d)));
  return est;
}

}  // namespace

DensityEstimate knn_density(const Eigen::VectorXd& z, const Eigen::MatrixXd& points, std::size_t k,
                            std::optional<std::size_t> exclude) {
  const auto n = static_cast<std::size_t>(points.rows());
  const std::size_t searched = n - (exclude && *exclude < n ? 1 : 0);
  if (searched <= k) {
    throw ConfigError("kNN density needs more than k reference points");
  }
  const double radius = kth_neighbor_distance(z, points, k, exclude);
  return finish(radius, k, searched, static_cast<std::size_t>(z.size()));
}

std::vector<DensityEstimate> knn_density_all(const Eigen::MatrixXd& queries,
                                             const Eigen::MatrixXd& points, std::size_t k,
                                             bool self) {
  if (queries.cols() != points.cols()) throw DimensionMismatch("query and reference dimensions differ");
  const auto n = static_cast<std::size_t>(points.rows());
  const std::size_t searched = self ? n - 1 : n;
  if (k < 1 || searched <= k) throw ConfigError("kNN density needs more than k reference points");
  if (self && queries.rows() != points.rows()) throw DimensionMismatch("self density needs queries == points");

  // Squared norms let each distance be one dot product.
  const Eigen::VectorXd pnorm = points.rowwise().squaredNorm();
  const Eigen::VectorXd qnorm = queries.rowwise().squaredNorm();
  const Eigen::MatrixXd cross = queries * points.transpose();
  std::vector<DensityEstimate> out(static_cast<std::size_t>(queries.rows()));
  std::vector<double> sq;
  sq.reserve(n);
  for (Eigen::Index q = 0; q < queries.rows(); ++q) {
    sq.clear();
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      if (self && i == q) continue;
      sq.push_back(std::max(0.0, qnorm[q] + pnorm[i] - 2.0 * cross(q, i)));
    }
    std::nth_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(k - 1), sq.end());
    out[static_cast<std::size_t>(q)] =
        finish(std::sqrt(sq[k - 1]), k, searched, static_cast<std::size_t>(queries.cols()));
  }
  return out;
}

}  // namespace motifmine
