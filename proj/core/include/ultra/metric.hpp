#pragma once

#include "ultra/matrix.hpp"

#include <vector>

namespace ultra {

enum class ViolationKind { triangle, strong_triangle };

/// One violating unordered triple, i < j < k, with the worst slack over
/// the three ways of choosing the long side.
struct Violation {
  Index i = 0;
  Index j = 0;
  Index k = 0;
  double slack = 0.0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ViolationReport {
  ViolationKind kind = ViolationKind::triangle;
  std::vector<Violation> violations;  ///< sorted by (i, j, k)

  [[nodiscard]] bool empty() const noexcept { return violations.empty(); }
};

/// Triples with d(a,b) - d(a,v) - d(v,b) > tolerance for some vertex v.
ViolationReport check_metric(const DissimilarityMatrix& d, double tolerance = 0.0);

/// Triples with d(a,b) - max(d(a,v), d(v,b)) > tolerance for some vertex v.
ViolationReport check_ultrametric(const DissimilarityMatrix& d, double tolerance = 0.0);

struct AdditiveRepair {
  DissimilarityMatrix matrix;
  double constant = 0.0;
};

/// Smallest additive constant c >= 0 such that d + c (off the diagonal)
/// satisfies the triangle inequality.
AdditiveRepair cailliez_additive(const DissimilarityMatrix& d);

struct PowerRepair {
  DissimilarityMatrix matrix;
  double exponent = 1.0;
};

/// Largest r in (0, 1] (to within `r_tolerance`) such that d^r is metric.
/// Off-diagonal zeros are rejected since no power separates them.
PowerRepair power_shrink(const DissimilarityMatrix& d, double r_tolerance = 1e-6);

}  // namespace ultra
