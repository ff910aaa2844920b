#include "ultra/consensus.hpp"

#include "ultra/errors.hpp"
#include "ultra/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ultra {

namespace {

bool tied(double a, double b, double tolerance) {
  return std::abs(a - b) <= tolerance * std::max(std::abs(a), std::abs(b));
}

void require_compatible(const UltrametricMatrix& u1, const UltrametricMatrix& u2) {
  if (u1.size() != u2.size()) {
    throw ArgumentError("ultrametric matrices differ in size (" + std::to_string(u1.size()) +
                        " vs " + std::to_string(u2.size()) + ")");
  }
  if (u1.labels() != u2.labels()) throw ArgumentError("ultrametric matrices differ in labels");
}

bool consistent(const TripletSignature& a, const TripletSignature& b) {
  return a.shape == TripletShape::isosceles_small_base &&
         b.shape == TripletShape::isosceles_small_base && a.base == b.base;
}

}  // namespace

TripletSignature triplet_signature(const UltrametricMatrix& u, Index i, Index j, Index k,
                                   double tie_tolerance) {
  Triplet t{i, j, k};
  std::sort(t.begin(), t.end());
  if (t[0] == t[1] || t[1] == t[2]) throw ArgumentError("triplet indices must be distinct");
  if (t[0] < 0 || t[2] >= u.size()) throw ArgumentError("triplet index out of range");

  struct Side {
    double value;
    std::pair<Index, Index> pair;
    Index opposite;
  };
  std::array<Side, 3> sides{{{u(t[0], t[1]), {t[0], t[1]}, t[2]},
                             {u(t[0], t[2]), {t[0], t[2]}, t[1]},
                             {u(t[1], t[2]), {t[1], t[2]}, t[0]}}};
  std::stable_sort(sides.begin(), sides.end(),
                   [](const Side& a, const Side& b) { return a.value < b.value; });

  TripletSignature sig;
  sig.triplet = t;
  sig.base = sides[0].pair;
  sig.apex = sides[0].opposite;
  sig.base_value = sides[0].value;
  if (tied(sides[0].value, sides[2].value, tie_tolerance)) {
    sig.shape = TripletShape::equilateral;
  } else if (tied(sides[1].value, sides[2].value, tie_tolerance) &&
             !tied(sides[0].value, sides[1].value, tie_tolerance)) {
    sig.shape = TripletShape::isosceles_small_base;
  } else {
    sig.shape = TripletShape::tie_other;
  }
  return sig;
}

ConsensusReport consensus_count(const UltrametricMatrix& u1, const UltrametricMatrix& u2,
                                double tie_tolerance) {
  require_compatible(u1, u2);
  const Index n = u1.size();

  struct Partial {
    std::vector<MatchedTriplet> matched;
    std::uint64_t skipped = 0;
  };
  auto parts = scan_triplets<Partial>(n, Exhaustive{}, [&](Partial& p, Index i, Index j,
                                                           Index k) {
    const TripletSignature a = triplet_signature(u1, i, j, k, tie_tolerance);
    const TripletSignature b = triplet_signature(u2, i, j, k, tie_tolerance);
    if (a.shape != TripletShape::isosceles_small_base ||
        b.shape != TripletShape::isosceles_small_base) {
      ++p.skipped;
    } else if (a.base == b.base) {
      p.matched.push_back({a.triplet, a.base, a.apex});
    }
  });

  ConsensusReport report;
  report.total_triplets = triplet_count(n);
  for (auto& p : parts) {
    report.skipped_ties += p.skipped;
    report.matched_set.insert(report.matched_set.end(), p.matched.begin(), p.matched.end());
  }
  report.matched = report.matched_set.size();
  return report;
}

ConsensusTable consensus_table(const DissimilarityMatrix& d, std::span<const Linkage> criteria) {
  if (criteria.empty()) throw ArgumentError("consensus table needs at least one criterion");
  for (const Linkage c : criteria) require_inversion_free(c);

  std::vector<UltrametricMatrix> coph;
  coph.reserve(criteria.size());
  for (const Linkage c : criteria) coph.push_back(cophenetic(linkage(d, c)));

  const std::size_t m = criteria.size();
  ConsensusTable table;
  table.criteria.assign(criteria.begin(), criteria.end());
  table.counts.assign(m, std::vector<std::uint64_t>(m, 0));
  table.tie_skips.assign(m, 0);
  table.total_triplets = triplet_count(d.size());
  for (std::size_t a = 0; a < m; ++a) {
    const ConsensusReport self = consensus_count(coph[a], coph[a]);
    table.counts[a][a] = self.matched;
    table.tie_skips[a] = self.skipped_ties;
    for (std::size_t b = a + 1; b < m; ++b) {
      const std::uint64_t matched = consensus_count(coph[a], coph[b]).matched;
      table.counts[a][b] = matched;
      table.counts[b][a] = matched;
    }
  }
  return table;
}

UltrametricMatrix consensus_ultrametric(const UltrametricMatrix& u1, const UltrametricMatrix& u2,
                                        double tie_tolerance) {
  require_compatible(u1, u2);
  const Index n = u1.size();
  if (n < 2) throw DegenerateInputError("consensus needs at least two observations");

  Eigen::MatrixXd candidate;
  if (n == 2) {
    candidate = u1.values().cwiseMin(u2.values());
  } else {
    candidate = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
    candidate.diagonal().setZero();
    auto offer = [&](Index a, Index b, double v) {
      if (v < candidate(a, b)) {
        candidate(a, b) = v;
        candidate(b, a) = v;
      }
    };
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        for (Index k = j + 1; k < n; ++k) {
          const TripletSignature a = triplet_signature(u1, i, j, k, tie_tolerance);
          const TripletSignature b = triplet_signature(u2, i, j, k, tie_tolerance);
          if (consistent(a, b)) {
            offer(i, j, std::min(u1(i, j), u2(i, j)));
            offer(i, k, std::min(u1(i, k), u2(i, k)));
            offer(j, k, std::min(u1(j, k), u2(j, k)));
          } else {
            const double lowest = std::min({u1(i, j), u1(i, k), u1(j, k), u2(i, j), u2(i, k),
                                            u2(j, k)});
            offer(i, j, lowest);
            offer(i, k, lowest);
            offer(j, k, lowest);
          }
        }
      }
    }
  }
  return minmax_path_closure(DissimilarityMatrix(std::move(candidate), u1.labels()));
}

Dendrogram consensus_dendrogram(const UltrametricMatrix& u, double tolerance) {
  const ViolationReport violations = check_ultrametric(u, tolerance * u.max_value());
  if (!violations.empty()) {
    const Violation& v = violations.violations.front();
    throw ValidationError("input is not ultrametric: triple (" + std::to_string(v.i) + ", " +
                          std::to_string(v.j) + ", " + std::to_string(v.k) + ") exceeds by " +
                          std::to_string(v.slack) + " (" +
                          std::to_string(violations.violations.size()) + " violations)");
  }
  return linkage(u, Linkage::single);
}

}  // namespace ultra
