#pragma once

#include "ultra/hierarchy.hpp"
#include "ultra/matrix.hpp"
#include "ultra/triplets.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ultra {

/// Relative tolerance under which two cophenetic values count as tied.
inline constexpr double default_tie_tolerance = 1e-9;

enum class TripletShape {
  isosceles_small_base,  ///< one strictly smallest side, the other two equal
  equilateral,           ///< all three sides equal
  tie_other,             ///< anything else: the values are not ultrametric
};

struct TripletSignature {
  Triplet triplet{};  ///< i < j < k
  TripletShape shape = TripletShape::tie_other;
  std::pair<Index, Index> base{};  ///< smallest-side pair (meaningful for isosceles)
  Index apex = 0;
  double base_value = 0.0;  ///< smallest of the three values
};

/// Reads the three ultrametric values of a triplet and names its shape.
TripletSignature triplet_signature(const UltrametricMatrix& u, Index i, Index j, Index k,
                                   double tie_tolerance = default_tie_tolerance);

struct MatchedTriplet {
  Triplet triplet{};
  std::pair<Index, Index> base{};
  Index apex = 0;

  friend bool operator==(const MatchedTriplet&, const MatchedTriplet&) = default;
  friend auto operator<=>(const MatchedTriplet&, const MatchedTriplet&) = default;
};

struct ConsensusReport {
  std::uint64_t total_triplets = 0;
  std::uint64_t matched = 0;
  std::uint64_t skipped_ties = 0;  ///< equilateral or tie-other on either side
  std::vector<MatchedTriplet> matched_set;  ///< sorted by triplet
};

/// Triplets that are isosceles-with-small-base in both hierarchies with the
/// same base pair (equivalently, the same apex).
ConsensusReport consensus_count(const UltrametricMatrix& u1, const UltrametricMatrix& u2,
                                double tie_tolerance = default_tie_tolerance);

struct ConsensusTable {
  std::vector<Linkage> criteria;
  std::vector<std::vector<std::uint64_t>> counts;  ///< symmetric
  std::vector<std::uint64_t> tie_skips;            ///< per criterion, self-consensus
  std::uint64_t total_triplets = 0;
};

/// Pairwise consensus counts between the cophenetic matrices of
/// linkage(d, c) for each criterion. Centroid and median are rejected.
ConsensusTable consensus_table(const DissimilarityMatrix& d, std::span<const Linkage> criteria);

/// Consensus ultrametric: each pair takes the minimum candidate over every
/// triplet containing it (pairwise minimum for consistent triplets, the
/// six-way triplet minimum otherwise), then the subdominant closure.
/// Commutative in its arguments.
UltrametricMatrix consensus_ultrametric(const UltrametricMatrix& u1, const UltrametricMatrix& u2,
                                        double tie_tolerance = default_tie_tolerance);

/// Single-link dendrogram of an ultrametric; its cophenetic matrix is `u`.
/// Throws ValidationError when `u` violates the ultrametric inequality
/// beyond `tolerance` * max(u).
Dendrogram consensus_dendrogram(const UltrametricMatrix& u, double tolerance = 1e-9);

}  // namespace ultra
