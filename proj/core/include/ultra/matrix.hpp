#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace ultra {

using Index = Eigen::Index;
using Labels = std::vector<std::string>;

/// Labels "<prefix>0", "<prefix>1", ... used when the caller supplies none.
Labels index_labels(Index n, std::string_view prefix = "");

/// Symmetric, zero-diagonal, nonnegative pairwise dissimilarities.
///
/// Construction validates the metric axioms that do not involve triples:
/// d(i,i) = 0, d(i,j) = d(j,i), d(i,j) >= 0. Asymmetries below
/// 1e-12 * max|d| are resolved in favour of the upper triangle so that
/// values read back from text are accepted.
class DissimilarityMatrix {
 public:
  DissimilarityMatrix() = default;
  explicit DissimilarityMatrix(Eigen::MatrixXd values, Labels labels = {});

  [[nodiscard]] Index size() const noexcept { return values_.rows(); }
  [[nodiscard]] double operator()(Index i, Index j) const { return values_(i, j); }
  [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }
  [[nodiscard]] const Labels& labels() const noexcept { return labels_; }
  [[nodiscard]] double max_value() const;

  friend bool operator==(const DissimilarityMatrix&, const DissimilarityMatrix&) = default;

 private:
  Eigen::MatrixXd values_;
  Labels labels_;
};

/// Cophenetic or otherwise ultrametric distances. Carries the same storage
/// as a dissimilarity; the strong triangle inequality is a property of how
/// the matrix was produced and is checked where it matters.
class UltrametricMatrix : public DissimilarityMatrix {
 public:
  using DissimilarityMatrix::DissimilarityMatrix;
  explicit UltrametricMatrix(DissimilarityMatrix d) : DissimilarityMatrix(std::move(d)) {}
};

/// n points x p Euclidean coordinates. p may be 0 only for a factor space
/// with no retained axes.
class CoordinateMatrix {
 public:
  CoordinateMatrix() = default;
  explicit CoordinateMatrix(Eigen::MatrixXd coords, Labels labels = {});

  [[nodiscard]] Index points() const noexcept { return coords_.rows(); }
  [[nodiscard]] Index dimensions() const noexcept { return coords_.cols(); }
  [[nodiscard]] const Eigen::MatrixXd& coords() const noexcept { return coords_; }
  [[nodiscard]] const Labels& labels() const noexcept { return labels_; }

 private:
  Eigen::MatrixXd coords_;
  Labels labels_;
};

/// Nonnegative contingency table (counts or frequencies).
class FrequencyMatrix {
 public:
  FrequencyMatrix() = default;
  FrequencyMatrix(Eigen::MatrixXd values, Labels row_labels, Labels col_labels);

  [[nodiscard]] Index rows() const noexcept { return values_.rows(); }
  [[nodiscard]] Index cols() const noexcept { return values_.cols(); }
  [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }
  [[nodiscard]] const Labels& row_labels() const noexcept { return row_labels_; }
  [[nodiscard]] const Labels& col_labels() const noexcept { return col_labels_; }
  [[nodiscard]] double total() const { return values_.sum(); }

 private:
  Eigen::MatrixXd values_;
  Labels row_labels_;
  Labels col_labels_;
};

/// Pairwise Euclidean distances between the rows of `coords`.
DissimilarityMatrix euclidean_distances(const CoordinateMatrix& coords);

}  // namespace ultra
