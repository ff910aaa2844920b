#pragma once

#include "ultra/consensus.hpp"
#include "ultra/hierarchy.hpp"
#include "ultra/matrix.hpp"
#include "ultra/ultrametricity.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ultra {

/// One row of the ultrametric-component listing.
struct ComponentTriplet {
  std::string base_first;   ///< alphabetically first base label
  std::string base_second;  ///< alphabetically second base label
  std::string apex_label;
  double base_angle_diff = 0.0;  ///< radians
  Triplet triplet{};
  std::pair<Index, Index> base{};
  Index apex = 0;
};

/// Sorted base-angle differences over every consensus-matched triplet.
/// Triplets whose consensus apex is not the smallest angle in the original
/// space, or whose triangle is degenerate, enter as +infinity: they pass no
/// threshold.
struct EpsilonProfile {
  std::vector<double> sorted_diffs;
  double threshold = default_epsilon;
  std::uint64_t count_at_threshold = 0;
};

struct ComponentResult {
  std::vector<ComponentTriplet> listing;  ///< sorted by (diff, base labels, apex)
  EpsilonProfile profile;
  ConsensusReport consensus;
  std::uint64_t degenerate = 0;
  std::uint64_t apex_mismatch = 0;
};

/// Stage 2 only: measure the matched triplets of `consensus` on the
/// original coordinates and keep those whose base angles differ by at most
/// `epsilon`.
ComponentResult filter_consensus(const CoordinateMatrix& coords, ConsensusReport consensus,
                                 double epsilon = default_epsilon);

/// Full two-stage extraction: consensus between linkage(d, first) and
/// linkage(d, second) on Euclidean distances, then the angle filter.
ComponentResult ultrametric_component(const CoordinateMatrix& coords, Linkage first,
                                      Linkage second, double epsilon = default_epsilon);

/// Number of profile entries <= epsilon.
std::uint64_t epsilon_threshold_count(const EpsilonProfile& profile, double epsilon);

}  // namespace ultra
