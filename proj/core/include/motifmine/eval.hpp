#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "motifmine/assignment.hpp"
#include "motifmine/decoder.hpp"

namespace motifmine {

/// sum_i min / sum_i max over one column pair; 1 when both columns are empty.
double column_jaccard(const Eigen::MatrixXd& a, Eigen::Index col_a, const Eigen::MatrixXd& b, Eigen::Index col_b);

/// Real-valued Jaccard averaged over columns. Shapes must match.
double jaccard(const AssignmentMatrix& yhat, const AssignmentMatrix& y);

struct MJaccardResult {
  double value = 0.0;
  /// permutation[j] = column of y matched to column j of yhat (after padding).
  std::vector<std::size_t> permutation;
};

/// Jaccard maximized over column permutations of y. The narrower matrix is
/// zero-padded to max(K, r) columns first. Solved as a linear assignment.
MJaccardResult m_jaccard(const AssignmentMatrix& yhat, const AssignmentMatrix& y);

/// P(motif > other) + 0.5 P(tie), via ranks. Empty samples give 0.5.
double mann_whitney_auc(std::span<const double> motif, std::span<const double> other);

struct SigmaSeparation {
  std::vector<double> motif;
  std::vector<double> other;
  double auc = 0.5;
};

/// Coarse-node scores split by whether more than half of the node's spotlight
/// lies in a single truth column. `layer` is 1-based; nullopt pools every layer.
SigmaSeparation sigma_separation(const DatasetLayers& layers, std::span<const AssignmentMatrix> truth,
                                 std::optional<std::size_t> layer = std::nullopt);

struct EvalReport {
  std::vector<double> per_graph;
  std::vector<std::vector<std::size_t>> permutations;
  double mean = 0.0;
  double std = 0.0;
  std::optional<double> auc;
  nlohmann::json config = nlohmann::json::object();
};

EvalReport evaluate(std::span<const AssignmentMatrix> predicted, std::span<const AssignmentMatrix> truth);

nlohmann::json to_json(const EvalReport& report);
/// condition,epsilon,mean,std,dummy_mean,dummy_std
std::string summary_csv_header();
std::string summary_csv_row(const std::string& condition, double epsilon, const EvalReport& trained,
                            const std::optional<EvalReport>& dummy);

}  // namespace motifmine
