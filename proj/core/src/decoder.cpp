#include "motifmine/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "motifmine/errors.hpp"
#include "motifmine/eval.hpp"
#include "motifmine/parallel.hpp"

namespace motifmine {

LshTable LshTable::make(std::size_t bits, std::size_t dim, std::uint64_t seed) {
  if (bits < 1 || bits > 64) throw ConfigError("hash size must be in [1, 64]");
  if (dim < 1) throw ConfigError("hash dimension must be >= 1");
  LshTable t;
  t.bits = bits;
  t.seed = seed;
  t.hyperplanes.resize(static_cast<Eigen::Index>(bits), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < bits; ++i) {
    Rng rng = Rng::derive(seed, {i});
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    do {
      for (Eigen::Index c = 0; c < v.size(); ++c) v[c] = rng.normal();
    } while (v.norm() == 0.0);
    t.hyperplanes.row(static_cast<Eigen::Index>(i)) = v.normalized().transpose();
  }
  return t;
}

std::vector<std::uint64_t> lsh_hash(const Eigen::MatrixXd& Z, const LshTable& table) {
  if (Z.cols() != table.hyperplanes.cols()) throw DimensionMismatch("embedding size does not match the hash table");
  std::vector<std::uint64_t> codes(static_cast<std::size_t>(Z.rows()), 0);
  for (Eigen::Index r = 0; r < Z.rows(); ++r) {
    std::uint64_t code = 0;
    for (Eigen::Index b = 0; b < table.hyperplanes.rows(); ++b) {
      if (Z.row(r).dot(table.hyperplanes.row(b)) > 0.0) code |= std::uint64_t{1} << b;
    }
    codes[static_cast<std::size_t>(r)] = code;
  }
  return codes;
}

std::vector<AssignmentMatrix> decode(const DatasetLayers& layers, std::size_t layer, const LshTable& table,
                                     std::size_t rank, double min_support) {
  if (!(min_support >= 0.0 && min_support <= 1.0)) throw ConfigError("min_support must be in [0, 1]");
  struct Bucket {
    double sum = 0.0;
    std::size_t count = 0;
    std::size_t graphs = 0;
    std::size_t last = static_cast<std::size_t>(-1);
  };
  std::map<std::uint64_t, Bucket> buckets;
  std::vector<std::vector<std::uint64_t>> codes(layers.size());
  for (std::size_t g = 0; g < layers.size(); ++g) {
    if (layer < 1 || layer > layers[g].size()) throw ConfigError("decode layer out of range");
    const CoarseLayer& l = layers[g][layer - 1];
    codes[g] = lsh_hash(l.embeddings, table);
    for (std::size_t c = 0; c < codes[g].size(); ++c) {
      Bucket& b = buckets[codes[g][c]];
      b.sum += l.scores[static_cast<Eigen::Index>(c)];
      ++b.count;
      if (b.last != g) {
        b.last = g;
        ++b.graphs;
      }
    }
  }

  std::vector<std::pair<double, std::uint64_t>> ranked;
  ranked.reserve(buckets.size());
  const double needed = min_support * static_cast<double>(layers.size());
  for (const auto& [code, b] : buckets) {
    if (static_cast<double>(b.graphs) >= needed) ranked.emplace_back(b.sum / static_cast<double>(b.count), code);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::map<std::uint64_t, std::size_t> column;
  for (std::size_t i = 0; i < ranked.size() && i < rank; ++i) column[ranked[i].second] = i;

  std::vector<AssignmentMatrix> out;
  out.reserve(layers.size());
  for (std::size_t g = 0; g < layers.size(); ++g) {
    const CoarseLayer& l = layers[g][layer - 1];
    std::size_t n = 0;
    for (const Spotlight& sl : l.spotlights) n += sl.size();
    AssignmentMatrix y(n, rank, true);
    for (std::size_t c = 0; c < codes[g].size(); ++c) {
      const auto it = column.find(codes[g][c]);
      if (it == column.end()) continue;
      for (NodeId u : l.spotlights[c]) {
        y.values(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(it->second)) = 1.0;
      }
    }
    out.push_back(std::move(y));
  }
  return out;
}

DatasetLayers forward_dataset(const MinerModel& model, std::span<const Graph> graphs, std::uint64_t seed,
                              std::size_t jobs) {
  DatasetLayers out(graphs.size());
  parallel_for(graphs.size(), jobs, [&](std::size_t i) {
    Rng rng = Rng::derive(seed, {i});
    out[i] = forward_pass(model, graphs[i], rng);
  });
  return out;
}

namespace {

constexpr std::uint64_t kTableKey = 0x7461626c65ULL;
constexpr std::uint64_t kSweepKey = 0x7377656570ULL;

double mean_m_jaccard(std::span<const AssignmentMatrix> pred, std::span<const AssignmentMatrix> truth) {
  double total = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) total += m_jaccard(pred[i], truth[i]).value;
  return truth.empty() ? 0.0 : total / static_cast<double>(truth.size());
}

}  // namespace

GridResult decode_grid_search(std::span<const DatasetLayers> repetitions, std::span<const AssignmentMatrix> truth,
                              const GridSpec& spec) {
  if (repetitions.empty()) throw ConfigError("grid search needs at least one repetition");
  if (spec.bits.empty() || spec.layers.empty()) throw ConfigError("grid search needs hash sizes and layers");
  if (!(spec.min_support >= 0.0 && spec.min_support <= 1.0)) throw ConfigError("min_support must be in [0, 1]");
  const std::size_t K = truth.empty() ? 1 : truth.front().motifs();
  const std::vector<std::size_t> ranks = spec.ranks.empty() ? std::vector<std::size_t>{K} : spec.ranks;
  const DatasetLayers& first = repetitions.front();
  if (first.empty()) throw ConfigError("grid search needs a non-empty dataset");
  const std::size_t T = first.front().size();
  const auto dim = static_cast<std::size_t>(first.front().front().embeddings.cols());

  GridResult result;
  bool have = false;
  for (std::size_t layer : spec.layers) {
    if (layer < 1 || layer > T) continue;
    for (std::size_t bits : spec.bits) {
      for (std::size_t rank : ranks) {
        GridEntry entry;
        entry.config = {layer, bits, rank, spec.min_support};
        std::vector<AssignmentMatrix> first_assign;
        for (std::size_t r = 0; r < repetitions.size(); ++r) {
          const LshTable table = LshTable::make(bits, dim, Rng::derive(spec.seed, {kTableKey, r}).next_u64());
          std::vector<AssignmentMatrix> a = decode(repetitions[r], layer, table, rank, spec.min_support);
          entry.repetition_means.push_back(mean_m_jaccard(a, truth));
          if (r == 0) first_assign = std::move(a);
        }
        const double n = static_cast<double>(entry.repetition_means.size());
        entry.mean = std::accumulate(entry.repetition_means.begin(), entry.repetition_means.end(), 0.0) / n;
        double ss = 0.0;
        for (double v : entry.repetition_means) ss += (v - entry.mean) * (v - entry.mean);
        entry.std = std::sqrt(ss / n);
        if (!have || entry.mean > result.score) {
          have = true;
          result.best = entry.config;
          result.score = entry.mean;
          result.score_std = entry.std;
          result.assignments = std::move(first_assign);
        }
        result.entries.push_back(std::move(entry));
      }
    }
  }
  if (!have) throw ConfigError("no grid layer is within the model's layer count");
  return result;
}

GridResult decode_grid_search(const MinerModel& model, const DatasetBundle& data, const GridSpec& spec,
                              std::size_t jobs) {
  if (spec.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  std::vector<DatasetLayers> reps;
  for (std::size_t r = 0; r < spec.repetitions; ++r) {
    reps.push_back(forward_dataset(model, data.graphs, Rng::derive(spec.seed, {kSweepKey, r}).next_u64(), jobs));
  }
  return decode_grid_search(reps, data.truth, spec);
}

nlohmann::json assignments_to_json(std::span<const AssignmentMatrix> assignments, const nlohmann::json& config) {
  nlohmann::json per_graph = nlohmann::json::array();
  std::size_t columns = 0;
  for (const AssignmentMatrix& a : assignments) {
    columns = std::max(columns, a.motifs());
    std::vector<long long> labels(a.nodes(), -1);
    for (Eigen::Index i = 0; i < a.values.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.values.cols(); ++j) {
        if (a.values(i, j) > 0.5) {
          labels[static_cast<std::size_t>(i)] = j;
          break;
        }
      }
    }
    per_graph.push_back({{"n", a.nodes()}, {"labels", labels}});
  }
  return {{"config", config}, {"columns", columns}, {"per_graph", std::move(per_graph)}};
}

std::vector<AssignmentMatrix> assignments_from_json(const nlohmann::json& j) {
  std::vector<AssignmentMatrix> out;
  try {
    const auto columns = j.at("columns").get<std::size_t>();
    for (const auto& g : j.at("per_graph")) {
      const auto n = g.at("n").get<std::size_t>();
      const auto labels = g.at("labels").get<std::vector<long long>>();
      if (labels.size() != n) throw ConfigError("label count does not match node count");
      AssignmentMatrix a(n, columns, true);
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] < 0) continue;
        if (static_cast<std::size_t>(labels[i]) >= columns) throw ConfigError("label exceeds column count");
        a.values(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
      }
      out.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed assignment file: ") + e.what());
  }
  return out;
}

}  // namespace motifmine
