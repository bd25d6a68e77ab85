#include "motifmine/baseline.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <numeric>
#include <sstream>

#include "motifmine/errors.hpp"
#include "motifmine/parallel.hpp"

namespace motifmine {

namespace {

constexpr std::size_t kMaxK = 6;

// ESU: extend from each root v with neighbours whose id exceeds v and which
// are exclusive to the newest member.
struct Esu {
  const Graph& g;
  std::size_t k;
  std::size_t cap;
  std::vector<std::vector<NodeId>>& out;
  std::vector<NodeId> current;
  std::vector<int> in_sub_or_nbr;  // count of current members adjacent or equal

  void extend(std::vector<NodeId> extension, NodeId root) {
    if (current.size() == k) {
      if (out.size() >= cap) throw BudgetExceeded("subgraph enumeration exceeded its cap");
      std::vector<NodeId> s = current;
      std::sort(s.begin(), s.end());
      out.push_back(std::move(s));
      return;
    }
    while (!extension.empty()) {
      const NodeId w = extension.back();
      extension.pop_back();
      std::vector<NodeId> next = extension;
      // Exclusive neighbours of w: not in the current set or adjacent to it.
      for (NodeId u : g.neighbors(w)) {
        if (u > root && in_sub_or_nbr[u] == 0) next.push_back(u);
      }
      current.push_back(w);
      mark(w, +1);
      extend(std::move(next), root);
      mark(w, -1);
      current.pop_back();
    }
  }

  void mark(NodeId w, int delta) {
    in_sub_or_nbr[w] += delta;
    for (NodeId u : g.neighbors(w)) in_sub_or_nbr[u] += delta;
  }
};

std::uint32_t raw_code(const Graph& g, std::span<const NodeId> nodes) {
  std::uint32_t code = 0;
  int bit = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j, ++bit) {
      if (g.has_edge(nodes[i], nodes[j])) code |= 1u << bit;
    }
  }
  return code;
}

CanonicalLabel canonical_from_raw(std::uint32_t raw, std::size_t k) {
  std::array<std::array<bool, kMaxK>, kMaxK> adj{};
  int bit = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j, ++bit) adj[i][j] = adj[j][i] = (raw >> bit) & 1u;
  }
  std::array<std::size_t, kMaxK> perm{};
  std::iota(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k), std::size_t{0});
  std::uint32_t best = UINT32_MAX;
  do {
    std::uint32_t code = 0;
    int b = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j, ++b) {
        if (adj[perm[i]][perm[j]]) code |= 1u << b;
      }
    }
    best = std::min(best, code);
  } while (std::next_permutation(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k)));
  return (static_cast<CanonicalLabel>(k) << 16) | best;
}

}  // namespace

std::vector<std::vector<NodeId>> enumerate_connected(const Graph& g, std::size_t k, std::size_t cap) {
  if (k < 1 || k > kMaxK) throw ConfigError("enumeration needs 1 <= k <= 6");
  std::vector<std::vector<NodeId>> out;
  Esu esu{g, k, cap, out, {}, std::vector<int>(g.num_nodes(), 0)};
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    std::vector<NodeId> ext;
    for (NodeId u : g.neighbors(v)) {
      if (u > v) ext.push_back(u);
    }
    esu.current = {v};
    esu.mark(v, +1);
    esu.extend(std::move(ext), v);
    esu.mark(v, -1);
  }
  return out;
}

CanonicalLabel canonical_form(const Graph& g, std::span<const NodeId> nodes) {
  if (nodes.empty() || nodes.size() > kMaxK) throw ConfigError("canonical_form needs 1..6 nodes");
  return canonical_from_raw(raw_code(g, nodes), nodes.size());
}

CanonicalLabel CanonicalCache::label(const Graph& g, std::span<const NodeId> nodes) {
  if (nodes.empty() || nodes.size() > kMaxK) throw ConfigError("canonical_form needs 1..6 nodes");
  const std::uint32_t key = (static_cast<std::uint32_t>(nodes.size()) << 16) | raw_code(g, nodes);
  const auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  const CanonicalLabel l = canonical_from_raw(key & 0xffffu, nodes.size());
  memo_.emplace(key, l);
  return l;
}

namespace {

using Counts = std::map<CanonicalLabel, std::size_t>;

std::vector<Counts> count_classes(std::span<const Graph> graphs, std::size_t k, std::atomic<std::size_t>& budget,
                                  std::size_t cap, std::size_t jobs) {
  std::vector<Counts> per_graph(graphs.size());
  parallel_for(graphs.size(), jobs, [&](std::size_t i) {
    const auto sets = enumerate_connected(graphs[i], k, cap);
    if (budget.fetch_add(sets.size()) + sets.size() > cap) {
      throw BudgetExceeded("subgraph enumeration exceeded its cap of " + std::to_string(cap));
    }
    CanonicalCache cache;
    for (const auto& s : sets) ++per_graph[i][cache.label(graphs[i], s)];
  });
  return per_graph;
}

}  // namespace

ExactResult exact_mine(std::span<const Graph> data, std::span<const Graph> nulls, const ExactConfig& config,
                       std::size_t jobs) {
  if (config.k < 3 || config.k > kMaxK) throw ConfigError("exact mining needs 3 <= k <= 6");
  if (!(config.c >= 0.0)) throw ConfigError("concentration threshold must be >= 0");
  std::atomic<std::size_t> budget{0};
  const auto data_counts = count_classes(data, config.k, budget, config.max_subgraphs, jobs);
  const auto null_counts = count_classes(nulls, config.k, budget, config.max_subgraphs, jobs);

  Counts total_data, total_null;
  for (const auto& c : data_counts) for (const auto& [l, n] : c) total_data[l] += n;
  for (const auto& c : null_counts) for (const auto& [l, n] : c) total_null[l] += n;

  ExactResult out;
  for (const auto& [label, n] : total_data) {
    MotifClass mc;
    mc.label = label;
    mc.k = config.k;
    mc.count_data = n;
    const auto it = total_null.find(label);
    mc.count_null = it == total_null.end() ? 0 : it->second;
    mc.ratio = static_cast<double>(mc.count_data) / static_cast<double>(mc.count_null + 1);
    if (mc.ratio > config.c) out.classes.push_back(std::move(mc));
  }
  std::sort(out.classes.begin(), out.classes.end(), [](const MotifClass& a, const MotifClass& b) {
    return a.ratio != b.ratio ? a.ratio > b.ratio : a.label < b.label;
  });

  const std::size_t columns = std::min(config.columns, out.classes.size());
  std::map<CanonicalLabel, std::size_t> column_of;
  for (std::size_t j = 0; j < columns; ++j) column_of[out.classes[j].label] = j;

  out.assignments.resize(data.size());
  std::vector<std::vector<std::pair<std::size_t, std::vector<NodeId>>>> found(data.size());
  parallel_for(data.size(), jobs, [&](std::size_t i) {
    AssignmentMatrix a(data[i].num_nodes(), config.columns, true);
    CanonicalCache cache;
    for (auto& s : enumerate_connected(data[i], config.k)) {
      const auto it = column_of.find(cache.label(data[i], s));
      if (it == column_of.end()) continue;
      for (NodeId u : s) a.values(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(it->second)) = 1.0;
      found[i].emplace_back(it->second, std::move(s));
    }
    out.assignments[i] = std::move(a);
  });
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (auto& [col, nodes] : found[i]) out.classes[col].instances.emplace_back(i, std::move(nodes));
  }
  return out;
}

ExactResult exact_mine(const DatasetBundle& data, const ExactConfig& config, std::size_t jobs) {
  if (data.nulls.size() != data.size()) throw ConfigError("exact mining needs a null twin for every graph");
  ExactConfig cfg = config;
  if (cfg.columns == 0) cfg.columns = data.spec.count;
  return exact_mine(data.graphs, data.nulls, cfg, jobs);
}

std::string classes_csv(std::span<const MotifClass> classes) {
  std::ostringstream out;
  out.precision(10);
  out << "label,k,count_data,count_null,ratio\n";
  for (const MotifClass& c : classes) {
    out << c.label << ',' << c.k << ',' << c.count_data << ',' << c.count_null << ',' << c.ratio << '\n';
  }
  return out.str();
}

}  // namespace motifmine
