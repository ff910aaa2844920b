#include "ultra/component.hpp"

#include "ultra/errors.hpp"
#include "ultra/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <tuple>

namespace ultra {

namespace {

constexpr double sixty_degrees = std::numbers::pi / 3.0;

// Base-angle difference of a matched triplet, or nullopt when the triangle
// is degenerate or its smallest angle is not at the consensus apex.
struct Measured {
  std::optional<double> diff;
  bool degenerate = false;
};

Measured measure(const DissimilarityMatrix& d, const MatchedTriplet& m) {
  const auto [i, j, k] = m.triplet;
  const TripletGeometry g = triangle_from_sides(i, j, k, d(j, k), d(i, k), d(i, j));
  if (g.degenerate) return {std::nullopt, true};

  std::size_t apex = 0;
  while (g.ids[apex] != m.apex) ++apex;
  const std::size_t b1 = (apex + 1) % 3;
  const std::size_t b2 = (apex + 2) % 3;
  const double apex_angle = g.angles[apex];
  if (apex_angle > std::min(g.angles[b1], g.angles[b2]) || apex_angle > sixty_degrees + 1e-12) {
    return {};
  }
  return {std::abs(g.angles[b1] - g.angles[b2]), false};
}

}  // namespace

ComponentResult filter_consensus(const CoordinateMatrix& coords, ConsensusReport consensus,
                                 double epsilon) {
  if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be nonnegative");
  const DissimilarityMatrix d = euclidean_distances(coords);
  const auto& matched = consensus.matched_set;
  for (const MatchedTriplet& m : matched) {
    if (m.triplet[2] >= d.size()) {
      throw ArgumentError("consensus triplets reference points outside the coordinates");
    }
  }

  std::vector<Measured> measured(matched.size());
  constexpr std::size_t block = 4096;
  parallel_for((matched.size() + block - 1) / block, [&](std::size_t c) {
    const std::size_t end = std::min(matched.size(), (c + 1) * block);
    for (std::size_t t = c * block; t < end; ++t) measured[t] = measure(d, matched[t]);
  });

  ComponentResult out;
  out.profile.threshold = epsilon;
  out.profile.sorted_diffs.reserve(matched.size());
  const Labels& labels = coords.labels();
  for (std::size_t t = 0; t < matched.size(); ++t) {
    const Measured& m = measured[t];
    if (m.degenerate) ++out.degenerate;
    if (!m.diff) {
      if (!m.degenerate) ++out.apex_mismatch;
      out.profile.sorted_diffs.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    out.profile.sorted_diffs.push_back(*m.diff);
    if (*m.diff > epsilon) continue;

    const MatchedTriplet& mt = matched[t];
    std::string a = labels[static_cast<std::size_t>(mt.base.first)];
    std::string b = labels[static_cast<std::size_t>(mt.base.second)];
    if (b < a) std::swap(a, b);
    out.listing.push_back({std::move(a), std::move(b), labels[static_cast<std::size_t>(mt.apex)],
                           *m.diff, mt.triplet, mt.base, mt.apex});
  }

  std::sort(out.profile.sorted_diffs.begin(), out.profile.sorted_diffs.end());
  out.profile.count_at_threshold = epsilon_threshold_count(out.profile, epsilon);
  std::sort(out.listing.begin(), out.listing.end(),
            [](const ComponentTriplet& x, const ComponentTriplet& y) {
              return std::tie(x.base_angle_diff, x.base_first, x.base_second, x.apex_label,
                              x.triplet) < std::tie(y.base_angle_diff, y.base_first,
                                                    y.base_second, y.apex_label, y.triplet);
            });
  out.consensus = std::move(consensus);
  return out;
}

ComponentResult ultrametric_component(const CoordinateMatrix& coords, Linkage first,
                                      Linkage second, double epsilon) {
  if (coords.points() < 3) throw DegenerateInputError("at least three points are needed");
  require_inversion_free(first);
  require_inversion_free(second);
  const DissimilarityMatrix d = euclidean_distances(coords);
  ConsensusReport consensus =
      consensus_count(cophenetic(linkage(d, first)), cophenetic(linkage(d, second)));
  return filter_consensus(coords, std::move(consensus), epsilon);
}

std::uint64_t epsilon_threshold_count(const EpsilonProfile& profile, double epsilon) {
  const auto it =
      std::upper_bound(profile.sorted_diffs.begin(), profile.sorted_diffs.end(), epsilon);
  return static_cast<std::uint64_t>(it - profile.sorted_diffs.begin());
}

}  // namespace ultra
