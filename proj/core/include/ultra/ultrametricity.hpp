#pragma once

#include "ultra/matrix.hpp"
#include "ultra/triplets.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace ultra {

/// Two degrees, in radians.
inline constexpr double default_epsilon = 0.034906585;

/// Triangle on three points. sides[v] is the side opposite vertex ids[v];
/// angles[v] is the interior angle at ids[v].
struct TripletGeometry {
  Triplet ids{};
  std::array<double, 3> sides{};
  std::array<double, 3> angles{};
  bool degenerate = false;
};

struct TripletVerdict {
  TripletGeometry geometry;
  std::optional<Index> apex;
  std::optional<std::pair<Index, Index>> base;
  std::optional<double> base_angle_diff;
  bool ultrametric = false;
};

struct UltrametricityReport {
  double alpha = 0.0;
  std::uint64_t ultrametric = 0;
  std::uint64_t counted = 0;
  std::uint64_t excluded_degenerate = 0;
  double epsilon = default_epsilon;
  bool sampled = false;
  std::optional<std::uint64_t> seed;
};

/// Law-of-cosines geometry from the three side lengths. Degenerate when a
/// side is below 1e-12 or some |cos| exceeds 1 - 1e-12.
TripletGeometry triangle_from_sides(Index i, Index j, Index k, double opposite_i,
                                    double opposite_j, double opposite_k);

TripletGeometry triplet_geometry(const CoordinateMatrix& coords, Index i, Index j, Index k);
TripletGeometry triplet_geometry(const DissimilarityMatrix& d, Index i, Index j, Index k);

/// Ultrametric iff the smallest angle is at most 60 degrees and the two
/// base angles differ by strictly less than `epsilon`. The apex is the
/// smallest-angle vertex, lowest id on ties.
TripletVerdict classify_triplet(const TripletGeometry& g, double epsilon = default_epsilon);

/// Share of non-degenerate triplets classified ultrametric.
UltrametricityReport alpha_epsilon(const CoordinateMatrix& coords,
                                   double epsilon = default_epsilon,
                                   const TripletMode& mode = Exhaustive{});

/// Same coefficient computed from side lengths only.
UltrametricityReport alpha_epsilon(const DissimilarityMatrix& d,
                                   double epsilon = default_epsilon,
                                   const TripletMode& mode = Exhaustive{});

/// Per-triplet verdicts in scan order (for export).
std::vector<TripletVerdict> classify_triplets(const DissimilarityMatrix& d, double epsilon,
                                              const TripletMode& mode);

/// Normalised shrinkage to the subdominant ultrametric:
/// sum(d - d_subdominant) / sum(d) over unordered pairs.
double rammal_index(const DissimilarityMatrix& d);

/// Rank-gap H-classifiability: the mean over triplets of
/// (rank(d_max) - rank(d_med)) / (P - 1), with P the number of pairs and
/// average ranks for ties.
double lerman_h(const DissimilarityMatrix& d, const TripletMode& mode = Exhaustive{});

struct TrevesHartmannPoint {
  Triplet ids{};
  double min_over_max = 0.0;
  double med_over_max = 0.0;
  double max_minus_med = 0.0;
};

struct TrevesHartmannData {
  std::vector<TrevesHartmannPoint> points;
  std::uint64_t skipped_zero = 0;  ///< triplets with d_max = 0
};

TrevesHartmannData treves_hartmann_points(const DissimilarityMatrix& d,
                                          const TripletMode& mode = Exhaustive{});

}  // namespace ultra
