#include "ultra/matrix.hpp"

#include "ultra/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ultra {

Labels index_labels(Index n, std::string_view prefix) {
  Labels labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    labels.push_back(std::string(prefix) + std::to_string(i));
  }
  return labels;
}

namespace {

Labels checked_labels(Labels labels, Index n, const char* what) {
  if (labels.empty()) return index_labels(n);
  if (static_cast<Index>(labels.size()) != n) {
    throw DimensionError(std::string(what) + ": " + std::to_string(labels.size()) +
                         " labels for " + std::to_string(n) + " entries");
  }
  return labels;
}

}  // namespace

DissimilarityMatrix::DissimilarityMatrix(Eigen::MatrixXd values, Labels labels)
    : values_(std::move(values)) {
  const Index n = values_.rows();
  if (values_.cols() != n) {
    throw DimensionError("dissimilarity matrix is " + std::to_string(values_.rows()) + "x" +
                         std::to_string(values_.cols()) + ", expected square");
  }
  labels_ = checked_labels(std::move(labels), n, "dissimilarity matrix");
  if (!values_.allFinite()) throw ValidationError("dissimilarity matrix has non-finite entries");

  const double scale = n > 0 ? values_.cwiseAbs().maxCoeff() : 0.0;
  const double slack = 1e-12 * std::max(scale, 1.0);
  for (Index i = 0; i < n; ++i) {
    if (std::abs(values_(i, i)) > slack) {
      throw ValidationError("nonzero diagonal at '" + labels_[static_cast<std::size_t>(i)] + "'");
    }
    values_(i, i) = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(values_(i, j) - values_(j, i)) > slack) {
        throw DimensionError("asymmetric entries at (" + std::to_string(i) + ", " +
                             std::to_string(j) + ")");
      }
      if (values_(i, j) < 0.0) {
        throw ValidationError("negative dissimilarity at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      }
      values_(j, i) = values_(i, j);
    }
  }
}

double DissimilarityMatrix::max_value() const {
  return size() > 0 ? values_.maxCoeff() : 0.0;
}

CoordinateMatrix::CoordinateMatrix(Eigen::MatrixXd coords, Labels labels)
    : coords_(std::move(coords)) {
  labels_ = checked_labels(std::move(labels), coords_.rows(), "coordinate matrix");
  if (!coords_.allFinite()) throw ValidationError("coordinate matrix has non-finite entries");
}

FrequencyMatrix::FrequencyMatrix(Eigen::MatrixXd values, Labels row_labels, Labels col_labels)
    : values_(std::move(values)) {
  row_labels_ = checked_labels(std::move(row_labels), values_.rows(), "frequency matrix rows");
  col_labels_ = checked_labels(std::move(col_labels), values_.cols(), "frequency matrix columns");
  if (!values_.allFinite()) throw ValidationError("frequency matrix has non-finite entries");
  if (values_.size() > 0 && values_.minCoeff() < 0.0) {
    throw ValidationError("frequency matrix has negative entries");
  }
  if (!(values_.sum() > 0.0)) throw DegenerateInputError("frequency matrix total is zero");
}

DissimilarityMatrix euclidean_distances(const CoordinateMatrix& coords) {
  const auto& x = coords.coords();
  const Index n = x.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double dist = (x.row(i) - x.row(j)).norm();
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return DissimilarityMatrix(std::move(d), coords.labels());
}

}  // namespace ultra
