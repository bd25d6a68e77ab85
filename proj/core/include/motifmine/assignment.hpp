#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace motifmine {

/// |V| x K node-to-motif assignment with entries in [0,1].
/// `hard` assignments only hold 0 and 1.
struct AssignmentMatrix {
  Eigen::MatrixXd values;
  bool hard = true;

  AssignmentMatrix() = default;
  AssignmentMatrix(std::size_t nodes, std::size_t motifs, bool is_hard = true)
      : values(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nodes),
                                     static_cast<Eigen::Index>(motifs))),
        hard(is_hard) {}

  std::size_t nodes() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t motifs() const { return static_cast<std::size_t>(values.cols()); }

  /// Entries in [0,1]; hard implies {0,1}.
  bool valid() const;

  /// Copy with extra all-zero columns appended up to `motifs` columns.
  AssignmentMatrix padded(std::size_t motifs) const;

  friend bool operator==(const AssignmentMatrix& a, const AssignmentMatrix& b) {
    return a.hard == b.hard && a.values.rows() == b.values.rows() &&
           a.values.cols() == b.values.cols() && a.values == b.values;
  }
};

}  // namespace motifmine
