#include "ultra/ultrametricity.hpp"

#include "ultra/errors.hpp"
#include "ultra/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ultra {

namespace {

constexpr double side_floor = 1e-12;
constexpr double cos_ceiling = 1.0 - 1e-12;
constexpr double sixty_degrees = std::numbers::pi / 3.0;

void require_triplets(Index n) {
  if (n < 3) throw DegenerateInputError("at least three points are needed for triplets");
}

double law_of_cosines(double facing, double y, double z) {
  return (y * y + z * z - facing * facing) / (2.0 * y * z);
}

}  // namespace

TripletGeometry triangle_from_sides(Index i, Index j, Index k, double opposite_i,
                                    double opposite_j, double opposite_k) {
  TripletGeometry g;
  g.ids = {i, j, k};
  g.sides = {opposite_i, opposite_j, opposite_k};
  if (std::min({opposite_i, opposite_j, opposite_k}) < side_floor) {
    g.degenerate = true;
    return g;
  }
  const std::array<double, 3> cosines{law_of_cosines(opposite_i, opposite_j, opposite_k),
                                      law_of_cosines(opposite_j, opposite_i, opposite_k),
                                      law_of_cosines(opposite_k, opposite_i, opposite_j)};
  for (std::size_t v = 0; v < 3; ++v) {
    if (std::abs(cosines[v]) > cos_ceiling) g.degenerate = true;
    g.angles[v] = std::acos(std::clamp(cosines[v], -1.0, 1.0));
  }
  return g;
}

TripletGeometry triplet_geometry(const CoordinateMatrix& coords, Index i, Index j, Index k) {
  const Index n = coords.points();
  if (i == j || i == k || j == k) throw ArgumentError("triplet indices must be distinct");
  for (const Index v : {i, j, k}) {
    if (v < 0 || v >= n) throw ArgumentError("triplet index out of range");
  }
  const auto& x = coords.coords();
  return triangle_from_sides(i, j, k, (x.row(j) - x.row(k)).norm(), (x.row(i) - x.row(k)).norm(),
                             (x.row(i) - x.row(j)).norm());
}

TripletGeometry triplet_geometry(const DissimilarityMatrix& d, Index i, Index j, Index k) {
  const Index n = d.size();
  if (i == j || i == k || j == k) throw ArgumentError("triplet indices must be distinct");
  for (const Index v : {i, j, k}) {
    if (v < 0 || v >= n) throw ArgumentError("triplet index out of range");
  }
  return triangle_from_sides(i, j, k, d(j, k), d(i, k), d(i, j));
}

TripletVerdict classify_triplet(const TripletGeometry& g, double epsilon) {
  if (g.degenerate) throw DegenerateInputError("cannot classify a degenerate triangle");

  std::size_t apex = 0;
  for (std::size_t v = 1; v < 3; ++v) {
    if (g.angles[v] < g.angles[apex] ||
        (g.angles[v] == g.angles[apex] && g.ids[v] < g.ids[apex])) {
      apex = v;
    }
  }
  const std::size_t b1 = (apex + 1) % 3;
  const std::size_t b2 = (apex + 2) % 3;

  TripletVerdict verdict;
  verdict.geometry = g;
  verdict.apex = g.ids[apex];
  verdict.base = std::minmax(g.ids[b1], g.ids[b2]);
  verdict.base_angle_diff = std::abs(g.angles[b1] - g.angles[b2]);
  verdict.ultrametric =
      g.angles[apex] <= sixty_degrees + 1e-12 && *verdict.base_angle_diff < epsilon;
  return verdict;
}

UltrametricityReport alpha_epsilon(const CoordinateMatrix& coords, double epsilon,
                                   const TripletMode& mode) {
  require_triplets(coords.points());
  return alpha_epsilon(euclidean_distances(coords), epsilon, mode);
}

UltrametricityReport alpha_epsilon(const DissimilarityMatrix& d, double epsilon,
                                   const TripletMode& mode) {
  require_triplets(d.size());
  if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be nonnegative");

  struct Counts {
    std::uint64_t ultrametric = 0;
    std::uint64_t counted = 0;
    std::uint64_t degenerate = 0;
  };
  const auto parts = scan_triplets<Counts>(d.size(), mode, [&](Counts& c, Index i, Index j,
                                                               Index k) {
    const TripletGeometry g = triangle_from_sides(i, j, k, d(j, k), d(i, k), d(i, j));
    if (g.degenerate) {
      ++c.degenerate;
      return;
    }
    ++c.counted;
    if (classify_triplet(g, epsilon).ultrametric) ++c.ultrametric;
  });

  UltrametricityReport report;
  report.epsilon = epsilon;
  for (const Counts& c : parts) {
    report.ultrametric += c.ultrametric;
    report.counted += c.counted;
    report.excluded_degenerate += c.degenerate;
  }
  report.alpha = report.counted > 0
                     ? static_cast<double>(report.ultrametric) / static_cast<double>(report.counted)
                     : 0.0;
  if (const auto* s = std::get_if<Sampled>(&mode)) {
    report.sampled = true;
    report.seed = s->seed;
  }
  return report;
}

std::vector<TripletVerdict> classify_triplets(const DissimilarityMatrix& d, double epsilon,
                                              const TripletMode& mode) {
  require_triplets(d.size());
  using Verdicts = std::vector<TripletVerdict>;
  auto parts = scan_triplets<Verdicts>(d.size(), mode, [&](Verdicts& out, Index i, Index j,
                                                           Index k) {
    const TripletGeometry g = triangle_from_sides(i, j, k, d(j, k), d(i, k), d(i, j));
    if (g.degenerate) {
      TripletVerdict v;
      v.geometry = g;
      out.push_back(v);
    } else {
      out.push_back(classify_triplet(g, epsilon));
    }
  });
  Verdicts all;
  for (auto& part : parts) {
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return all;
}

double rammal_index(const DissimilarityMatrix& d) {
  const Index n = d.size();
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) total += d(i, j);
  }
  if (!(total > 0.0)) throw DegenerateInputError("Rammal index is undefined for all-zero input");

  const UltrametricMatrix sub = minmax_path_closure(d);
  double shrink = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) shrink += d(i, j) - sub(i, j);
  }
  return shrink / total;
}

double lerman_h(const DissimilarityMatrix& d, const TripletMode& mode) {
  const Index n = d.size();
  require_triplets(n);

  struct PairValue {
    double value;
    Index i;
    Index j;
  };
  std::vector<PairValue> pairs;
  pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) pairs.push_back({d(i, j), i, j});
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const PairValue& a, const PairValue& b) { return a.value < b.value; });

  // 1-based average ranks.
  Eigen::MatrixXd rank = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t lo = 0; lo < pairs.size();) {
    std::size_t hi = lo;
    while (hi + 1 < pairs.size() && pairs[hi + 1].value == pairs[lo].value) ++hi;
    const double avg = 0.5 * static_cast<double>(lo + hi) + 1.0;
    for (std::size_t t = lo; t <= hi; ++t) {
      rank(pairs[t].i, pairs[t].j) = avg;
      rank(pairs[t].j, pairs[t].i) = avg;
    }
    lo = hi + 1;
  }
  const double span = static_cast<double>(pairs.size() - 1);

  struct Sum {
    double total = 0.0;
    std::uint64_t count = 0;
  };
  const auto parts = scan_triplets<Sum>(n, mode, [&](Sum& s, Index i, Index j, Index k) {
    std::array<std::pair<double, double>, 3> sides{
        {{d(i, j), rank(i, j)}, {d(i, k), rank(i, k)}, {d(j, k), rank(j, k)}}};
    std::sort(sides.begin(), sides.end());
    s.total += (sides[2].second - sides[1].second) / span;
    ++s.count;
  });

  Sum all;
  for (const Sum& s : parts) {
    all.total += s.total;
    all.count += s.count;
  }
  return all.count > 0 ? all.total / static_cast<double>(all.count) : 0.0;
}

TrevesHartmannData treves_hartmann_points(const DissimilarityMatrix& d, const TripletMode& mode) {
  require_triplets(d.size());
  const auto parts = scan_triplets<TrevesHartmannData>(
      d.size(), mode, [&](TrevesHartmannData& out, Index i, Index j, Index k) {
        std::array<double, 3> s{d(i, j), d(i, k), d(j, k)};
        std::sort(s.begin(), s.end());
        if (s[2] == 0.0) {
          ++out.skipped_zero;
          return;
        }
        out.points.push_back({{i, j, k}, s[0] / s[2], s[1] / s[2], s[2] - s[1]});
      });

  TrevesHartmannData all;
  for (const auto& part : parts) {
    all.points.insert(all.points.end(), part.points.begin(), part.points.end());
    all.skipped_zero += part.skipped_zero;
  }
  return all;
}

}  // namespace ultra
