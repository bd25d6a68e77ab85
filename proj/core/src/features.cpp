#include "motifmine/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "motifmine/errors.hpp"
#include "motifmine/nn.hpp"
#include "motifmine/parallel.hpp"

namespace motifmine {

std::string_view to_string(Selection s) { return s == Selection::top ? "top" : "random"; }

Eigen::VectorXd graph_embedding(std::span<const CoarseLayer> layers, std::size_t k, Selection mode, Rng& rng) {
  if (layers.empty()) throw ConfigError("graph_embedding needs at least one layer");
  const Eigen::Index d = layers.front().embeddings.cols();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d * static_cast<Eigen::Index>(layers.size()));
  for (std::size_t t = 0; t < layers.size(); ++t) {
    const CoarseLayer& l = layers[t];
    const auto n = static_cast<std::size_t>(l.embeddings.rows());
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const std::size_t take = (k == 0 || k >= n) ? n : k;
    if (take < n) {
      if (mode == Selection::top) {
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
          return l.scores[static_cast<Eigen::Index>(a)] > l.scores[static_cast<Eigen::Index>(b)];
        });
      } else {
        rng.shuffle(std::span<std::size_t>(idx));
      }
    }
    Eigen::VectorXd block = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i < take; ++i) block += l.embeddings.row(static_cast<Eigen::Index>(idx[i])).transpose();
    if (take > 0) block /= static_cast<double>(take);
    out.segment(static_cast<Eigen::Index>(t) * d, d) = block;
  }
  return out;
}

Eigen::VectorXd graph_embedding(const MinerModel& model, const Graph& g, std::size_t k, Selection mode, Rng& rng) {
  const auto layers = forward_pass(model, g, rng);
  return graph_embedding(layers, k, mode, rng);
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::vector<double> cross_validated_accuracy(const Eigen::MatrixXd& X, std::span<const int> labels,
                                             const LogisticConfig& config, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (labels.size() != n) throw DimensionMismatch("feature rows and labels differ");
  if (config.folds < 2 || config.folds > n) throw ConfigError("folds must be in [2, number of samples]");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng(seed);
  shuffle_rng.shuffle(std::span<std::size_t>(order));

  std::vector<double> accuracy;
  for (std::size_t f = 0; f < config.folds; ++f) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < n; ++i) (i % config.folds == f ? test_idx : train_idx).push_back(order[i]);

    const auto dim = X.cols();
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(dim), sd = Eigen::VectorXd::Zero(dim);
    for (std::size_t i : train_idx) mu += X.row(static_cast<Eigen::Index>(i)).transpose();
    mu /= static_cast<double>(train_idx.size());
    for (std::size_t i : train_idx) {
      sd += (X.row(static_cast<Eigen::Index>(i)).transpose() - mu).cwiseAbs2();
    }
    sd = (sd / static_cast<double>(train_idx.size())).cwiseSqrt();
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (!(sd[c] > 1e-12)) sd[c] = 1.0;
    }
    auto standardize = [&](std::size_t i) -> Eigen::VectorXd {
      return (X.row(static_cast<Eigen::Index>(i)).transpose() - mu).cwiseQuotient(sd);
    };

    const std::array<std::size_t, 2> dims{static_cast<std::size_t>(dim), 1};
    const std::array<Activation, 1> acts{Activation::identity};
    Mlp logit = Mlp::zeros(dims, acts);
    AdamState adam(logit, AdamConfig{config.learning_rate, 0.9, 0.999, 1e-8});
    MlpGradient grads(logit);
    Tape tape;
    Eigen::VectorXd up(1);
    for (std::size_t e = 0; e < config.epochs; ++e) {
      grads.set_zero();
      for (std::size_t i : train_idx) {
        const double p = sigmoid(logit.forward(standardize(i), tape)[0]);
        up[0] = (p - labels[i]) / static_cast<double>(train_idx.size());
        logit.backward(tape, up, grads);
      }
      adam_step(logit, grads, adam);
    }
    std::size_t correct = 0;
    for (std::size_t i : test_idx) {
      const int pred = logit.forward(standardize(i))[0] > 0.0 ? 1 : 0;
      if (pred == labels[i]) ++correct;
    }
    accuracy.push_back(static_cast<double>(correct) / static_cast<double>(test_idx.size()));
  }
  return accuracy;
}

std::vector<AblationRow> ablation_study(const MinerModel& model, const DatasetBundle& labeled,
                                        std::span<const std::size_t> ks, std::uint64_t seed,
                                        const LogisticConfig& config, std::size_t jobs) {
  const std::size_t n = labeled.size();
  if (n == 0) throw ConfigError("ablation needs a non-empty dataset");
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = labeled.has_motif(i) ? 1 : 0;

  std::vector<std::vector<CoarseLayer>> layers(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    Rng rng = Rng::derive(seed, {0x666f7277ULL, i});
    layers[i] = forward_pass(model, labeled.graphs[i], rng);
  });

  const std::uint64_t fold_seed = Rng::derive(seed, {0x666f6c64ULL}).next_u64();
  std::vector<AblationRow> rows;
  for (std::size_t k : ks) {
    for (Selection mode : {Selection::top, Selection::random}) {
      const Eigen::Index width = static_cast<Eigen::Index>(model.config.layers * model.config.dim);
      Eigen::MatrixXd X(static_cast<Eigen::Index>(n), width);
      for (std::size_t i = 0; i < n; ++i) {
        Rng pick = Rng::derive(seed, {0x7069636bULL, k, i});
        X.row(static_cast<Eigen::Index>(i)) = graph_embedding(layers[i], k, mode, pick).transpose();
      }
      const auto acc = cross_validated_accuracy(X, labels, config, fold_seed);
      for (std::size_t f = 0; f < acc.size(); ++f) rows.push_back({k, mode, f, acc[f]});
    }
  }
  return rows;
}

double mean_accuracy(std::span<const AblationRow> rows, std::size_t k, Selection mode) {
  double total = 0.0;
  std::size_t count = 0;
  for (const AblationRow& r : rows) {
    if (r.k == k && r.mode == mode) {
      total += r.accuracy;
      ++count;
    }
  }
  return count ? total / static_cast<double>(count) : 0.0;
}

std::string ablation_csv(std::span<const AblationRow> rows) {
  std::ostringstream out;
  out.precision(10);
  out << "k,mode,fold,accuracy\n";
  for (const AblationRow& r : rows) {
    if (r.k == 0) out << "all";
    else out << r.k;
    out << ',' << to_string(r.mode) << ',' << r.fold << ',' << r.accuracy << '\n';
  }
  return out.str();
}

}  // namespace motifmine
