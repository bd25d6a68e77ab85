#include "motifmine/kernel.hpp"

#include <cmath>

#include "motifmine/errors.hpp"
#include "motifmine/transport.hpp"

namespace motifmine {

WlEmbedding wl_refine(const Graph& g, std::size_t iterations) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  const Eigen::Index d = g.features().cols();
  WlEmbedding out;
  out.iterations = iterations;
  out.rows.resize(n, d * static_cast<Eigen::Index>(iterations + 1));
  Eigen::MatrixXd current = g.features();
  out.rows.leftCols(d) = current;
  for (std::size_t t = 1; t <= iterations; ++t) {
    Eigen::MatrixXd next(n, d);
    for (Eigen::Index u = 0; u < n; ++u) {
      const auto nbrs = g.neighbors(static_cast<NodeId>(u));
      if (nbrs.empty()) {
        next.row(u) = current.row(u);
        continue;
      }
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(d);
      for (NodeId w : nbrs) mean += current.row(static_cast<Eigen::Index>(w));
      mean /= static_cast<double>(nbrs.size());
      next.row(u) = 0.5 * (current.row(u) + mean);
    }
    current = std::move(next);
    out.rows.middleCols(d * static_cast<Eigen::Index>(t), d) = current;
  }
  return out;
}

double wl_wasserstein(const Graph& a, const Graph& b, std::size_t iterations) {
  if (a.num_nodes() == 0 || b.num_nodes() == 0) throw ConfigError("sim_g needs non-empty graphs");
  if (a.feature_dim() != b.feature_dim()) {
    throw DimensionMismatch("graphs have different feature dimensions");
  }
  const WlEmbedding ea = wl_refine(a, iterations);
  const WlEmbedding eb = wl_refine(b, iterations);
  Eigen::MatrixXd cost(ea.rows.rows(), eb.rows.rows());
  for (Eigen::Index i = 0; i < cost.rows(); ++i) {
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
      cost(i, j) = (ea.rows.row(i) - eb.rows.row(j)).norm();
    }
  }
  return uniform_transport_cost(cost);
}

double sim_g(const Graph& a, const Graph& b, const KernelConfig& config) {
  if (!(config.gamma > 0.0)) throw ConfigError("kernel gamma must be positive");
  return std::exp(-config.gamma * wl_wasserstein(a, b, config.iterations));
}

}  // namespace motifmine
