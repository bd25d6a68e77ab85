#include "motifmine/transport.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "motifmine/errors.hpp"
#include "motifmine/lap.hpp"

namespace motifmine {

namespace {

class MinCostFlow {
 public:
  explicit MinCostFlow(std::size_t nodes) : graph_(nodes) {}

  void add_arc(std::size_t from, std::size_t to, std::int64_t cap, double cost) {
    graph_[from].push_back({to, graph_[to].size(), cap, cost});
    graph_[to].push_back({from, graph_[from].size() - 1, 0, -cost});
  }

  // Returns total cost of pushing `target` units from s to t.
  double run(std::size_t s, std::size_t t, std::int64_t target) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = graph_.size();
    std::vector<double> potential(n, 0.0), dist(n);
    std::vector<std::size_t> prev_node(n), prev_arc(n);
    double total = 0.0;
    std::int64_t pushed = 0;
    using Item = std::pair<double, std::size_t>;
    while (pushed < target) {
      std::fill(dist.begin(), dist.end(), inf);
      dist[s] = 0.0;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      heap.push({0.0, s});
      while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (std::size_t a = 0; a < graph_[u].size(); ++a) {
          const Arc& arc = graph_[u][a];
          if (arc.cap <= 0) continue;
          // Reduced costs are non-negative up to rounding.
          const double reduced = std::max(0.0, arc.cost + potential[u] - potential[arc.to]);
          if (dist[u] + reduced < dist[arc.to]) {
            dist[arc.to] = dist[u] + reduced;
            prev_node[arc.to] = u;
            prev_arc[arc.to] = a;
            heap.push({dist[arc.to], arc.to});
          }
        }
      }
      if (dist[t] == inf) throw RuntimeFailure("transport problem is infeasible");
      for (std::size_t v = 0; v < n; ++v) {
        if (dist[v] < inf) potential[v] += dist[v];
      }
      std::int64_t bottleneck = target - pushed;
      for (std::size_t v = t; v != s; v = prev_node[v]) {
        bottleneck = std::min(bottleneck, graph_[prev_node[v]][prev_arc[v]].cap);
      }
      for (std::size_t v = t; v != s; v = prev_node[v]) {
        Arc& arc = graph_[prev_node[v]][prev_arc[v]];
        arc.cap -= bottleneck;
        graph_[v][arc.rev].cap += bottleneck;
        total += static_cast<double>(bottleneck) * arc.cost;
      }
      pushed += bottleneck;
    }
    return total;
  }

 private:
  struct Arc {
    std::size_t to;
    std::size_t rev;
    std::int64_t cap;
    double cost;
  };
  std::vector<std::vector<Arc>> graph_;
};

}  // namespace

double uniform_transport_cost_flow(const Eigen::MatrixXd& cost) {
  const auto n = static_cast<std::size_t>(cost.rows());
  const auto m = static_cast<std::size_t>(cost.cols());
  if (n == 0 || m == 0) throw ConfigError("transport between empty point sets");
  const std::size_t source = n + m;
  const std::size_t sink = n + m + 1;
  MinCostFlow flow(n + m + 2);
  const auto supply = static_cast<std::int64_t>(m);
  const auto demand = static_cast<std::int64_t>(n);
  for (std::size_t i = 0; i < n; ++i) flow.add_arc(source, i, supply, 0.0);
  for (std::size_t j = 0; j < m; ++j) flow.add_arc(n + j, sink, demand, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      flow.add_arc(i, n + j, supply * demand,
                   cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
  const double total = flow.run(source, sink, supply * demand);
  return total / static_cast<double>(n * m);
}

double uniform_transport_cost(const Eigen::MatrixXd& cost) {
  if (cost.rows() == 0 || cost.cols() == 0) throw ConfigError("transport between empty point sets");
  if (cost.rows() == cost.cols()) {
    return solve_min_assignment(cost).cost / static_cast<double>(cost.rows());
  }
  return uniform_transport_cost_flow(cost);
}

}  // namespace motifmine
