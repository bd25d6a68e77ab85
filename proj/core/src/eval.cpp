#include "motifmine/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "motifmine/errors.hpp"
#include "motifmine/lap.hpp"

namespace motifmine {

double column_jaccard(const Eigen::MatrixXd& a, Eigen::Index col_a, const Eigen::MatrixXd& b, Eigen::Index col_b) {
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    num += std::min(a(i, col_a), b(i, col_b));
    den += std::max(a(i, col_a), b(i, col_b));
  }
  return den > 0.0 ? num / den : 1.0;
}

double jaccard(const AssignmentMatrix& yhat, const AssignmentMatrix& y) {
  if (yhat.values.rows() != y.values.rows() || yhat.values.cols() != y.values.cols()) {
    throw DimensionMismatch("jaccard needs matching shapes");
  }
  const Eigen::Index K = y.values.cols();
  if (K == 0) return 1.0;
  double total = 0.0;
  for (Eigen::Index j = 0; j < K; ++j) total += column_jaccard(yhat.values, j, y.values, j);
  return total / static_cast<double>(K);
}

MJaccardResult m_jaccard(const AssignmentMatrix& yhat, const AssignmentMatrix& y) {
  if (yhat.nodes() != y.nodes()) throw DimensionMismatch("m_jaccard needs matching node counts");
  const std::size_t K = std::max(yhat.motifs(), y.motifs());
  MJaccardResult out;
  if (K == 0) {
    out.value = 1.0;
    return out;
  }
  const AssignmentMatrix a = yhat.padded(K);
  const AssignmentMatrix b = y.padded(K);
  Eigen::MatrixXd w(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = column_jaccard(a.values, i, b.values, j);
  }
  const Assignment best = solve_max_assignment(w);
  out.permutation = best.row_to_col;
  // Summed in sorted order so the value does not depend on column order.
  std::vector<double> matched(K);
  for (std::size_t i = 0; i < K; ++i) {
    matched[i] = w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(out.permutation[i]));
  }
  std::sort(matched.begin(), matched.end());
  out.value = std::accumulate(matched.begin(), matched.end(), 0.0) / static_cast<double>(K);
  return out;
}

double mann_whitney_auc(std::span<const double> motif, std::span<const double> other) {
  if (motif.empty() || other.empty()) return 0.5;
  struct Item {
    double v;
    bool motif;
  };
  std::vector<Item> all;
  all.reserve(motif.size() + other.size());
  for (double v : motif) all.push_back({v, true});
  for (double v : other) all.push_back({v, false});
  std::sort(all.begin(), all.end(), [](const Item& a, const Item& b) { return a.v < b.v; });
  // Average ranks over ties.
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].v == all[i].v) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (all[t].motif) rank_sum += avg;
    }
    i = j;
  }
  const auto n1 = static_cast<double>(motif.size());
  const auto n2 = static_cast<double>(other.size());
  return (rank_sum - n1 * (n1 + 1.0) / 2.0) / (n1 * n2);
}

SigmaSeparation sigma_separation(const DatasetLayers& layers, std::span<const AssignmentMatrix> truth,
                                 std::optional<std::size_t> layer) {
  if (layers.size() != truth.size()) throw DimensionMismatch("layers and truth differ in length");
  SigmaSeparation out;
  std::vector<std::size_t> hits;
  for (std::size_t g = 0; g < layers.size(); ++g) {
    const auto& ls = layers[g];
    const Eigen::MatrixXd& y = truth[g].values;
    if (layer && (*layer < 1 || *layer > ls.size())) throw ConfigError("sigma_separation layer out of range");
    const std::size_t first = layer ? *layer - 1 : 0;
    const std::size_t last = layer ? *layer : ls.size();
    for (std::size_t t = first; t < last; ++t) {
      const CoarseLayer& l = ls[t];
      for (std::size_t c = 0; c < l.spotlights.size(); ++c) {
        const Spotlight& sl = l.spotlights[c];
        hits.assign(static_cast<std::size_t>(y.cols()), 0);
        for (NodeId u : sl) {
          for (Eigen::Index j = 0; j < y.cols(); ++j) {
            if (y(static_cast<Eigen::Index>(u), j) > 0.5) ++hits[static_cast<std::size_t>(j)];
          }
        }
        const bool in_motif =
            std::any_of(hits.begin(), hits.end(), [&](std::size_t h) { return 2 * h > sl.size(); });
        (in_motif ? out.motif : out.other).push_back(l.scores[static_cast<Eigen::Index>(c)]);
      }
    }
  }
  out.auc = mann_whitney_auc(out.motif, out.other);
  return out;
}

EvalReport evaluate(std::span<const AssignmentMatrix> predicted, std::span<const AssignmentMatrix> truth) {
  if (predicted.size() != truth.size()) throw DimensionMismatch("prediction and truth counts differ");
  EvalReport r;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    MJaccardResult m = m_jaccard(predicted[i], truth[i]);
    r.per_graph.push_back(m.value);
    r.permutations.push_back(std::move(m.permutation));
  }
  if (!r.per_graph.empty()) {
    const double n = static_cast<double>(r.per_graph.size());
    r.mean = std::accumulate(r.per_graph.begin(), r.per_graph.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : r.per_graph) ss += (v - r.mean) * (v - r.mean);
    r.std = std::sqrt(ss / n);
  }
  return r;
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j = {{"config", r.config},
                      {"mean", r.mean},
                      {"std", r.std},
                      {"per_graph", r.per_graph},
                      {"permutations", r.permutations}};
  j["auc"] = r.auc ? nlohmann::json(*r.auc) : nlohmann::json(nullptr);
  return j;
}

std::string summary_csv_header() { return "condition,epsilon,mean,std,dummy_mean,dummy_std\n"; }

std::string summary_csv_row(const std::string& condition, double epsilon, const EvalReport& trained,
                            const std::optional<EvalReport>& dummy) {
  std::ostringstream out;
  out.precision(6);
  out << condition << ',' << epsilon << ',' << trained.mean << ',' << trained.std << ',';
  if (dummy) out << dummy->mean << ',' << dummy->std;
  else out << ',';
  out << '\n';
  return out.str();
}

}  // namespace motifmine
