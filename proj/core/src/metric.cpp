#include "ultra/metric.hpp"

#include "ultra/errors.hpp"
#include "ultra/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ultra {

namespace {

// Worst slack over the three choices of "via" vertex, using `excess(long,
// side_a, side_b)` to score a choice.
template <class Excess>
ViolationReport scan_violations(const DissimilarityMatrix& d, ViolationKind kind,
                                double tolerance, Excess excess) {
  const Index n = d.size();
  const std::size_t chunks = n >= 3 ? static_cast<std::size_t>(n - 2) : 0;
  std::vector<std::vector<Violation>> found(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const auto i = static_cast<Index>(c);
    for (Index j = i + 1; j < n; ++j) {
      for (Index k = j + 1; k < n; ++k) {
        const double dij = d(i, j);
        const double dik = d(i, k);
        const double djk = d(j, k);
        const double worst =
            std::max({excess(dik, dij, djk), excess(dij, dik, djk), excess(djk, dij, dik)});
        if (worst > tolerance) found[c].push_back({i, j, k, worst});
      }
    }
  });

  ViolationReport report{kind, {}};
  for (auto& part : found) {
    report.violations.insert(report.violations.end(), part.begin(), part.end());
  }
  return report;
}

}  // namespace

ViolationReport check_metric(const DissimilarityMatrix& d, double tolerance) {
  return scan_violations(d, ViolationKind::triangle, tolerance,
                         [](double lng, double a, double b) { return lng - a - b; });
}

ViolationReport check_ultrametric(const DissimilarityMatrix& d, double tolerance) {
  return scan_violations(d, ViolationKind::strong_triangle, tolerance,
                         [](double lng, double a, double b) { return lng - std::max(a, b); });
}

AdditiveRepair cailliez_additive(const DissimilarityMatrix& d) {
  const Index n = d.size();
  if (n < 3) return {d, 0.0};

  double c = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      for (Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        c = std::max(c, d(i, j) - d(i, k) - d(j, k));
      }
    }
  }
  if (c == 0.0) return {d, 0.0};

  Eigen::MatrixXd delta = d.values().array() + c;
  delta.diagonal().setZero();
  return {DissimilarityMatrix(std::move(delta), d.labels()), c};
}

namespace {

bool is_metric(const Eigen::MatrixXd& delta, const Labels& labels) {
  const DissimilarityMatrix m(delta, labels);
  return check_metric(m, 1e-12 * m.max_value()).empty();
}

Eigen::MatrixXd powered(const Eigen::MatrixXd& d, double r) {
  Eigen::MatrixXd out = d.array().pow(r);
  out.diagonal().setZero();
  return out;
}

}  // namespace

PowerRepair power_shrink(const DissimilarityMatrix& d, double r_tolerance) {
  if (!(r_tolerance > 0.0) || r_tolerance >= 1.0) {
    throw ArgumentError("r_tolerance must lie in (0, 1)");
  }
  const Index n = d.size();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (d(i, j) == 0.0) {
        const auto& l = d.labels();
        throw ValidationError("zero dissimilarity between '" + l[static_cast<std::size_t>(i)] +
                              "' and '" + l[static_cast<std::size_t>(j)] +
                              "' cannot be separated by a power transform");
      }
    }
  }
  if (is_metric(d.values(), d.labels())) return {d, 1.0};

  // d^r tends to the all-ones (metric) matrix as r -> 0, so the metric side
  // of the bracket is approached from below.
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > r_tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (is_metric(powered(d.values(), mid), d.labels())) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  while (lo == 0.0) {
    hi *= 0.5;
    if (hi < std::numeric_limits<double>::min()) {
      throw DegenerateInputError("no positive exponent makes the dissimilarity metric");
    }
    if (is_metric(powered(d.values(), hi), d.labels())) lo = hi;
  }
  return {DissimilarityMatrix(powered(d.values(), lo), d.labels()), lo};
}

}  // namespace ultra
