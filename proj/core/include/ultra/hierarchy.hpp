#pragma once

#include "ultra/matrix.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ultra {

enum class Linkage { single, complete, average, mcquitty, ward, centroid, median };

std::string_view to_string(Linkage c) noexcept;

/// Parses a criterion name (case-insensitive); throws ArgumentError.
Linkage parse_linkage(std::string_view name);

/// Criteria satisfying the reducibility property: their dendrograms never
/// contain inversions.
bool is_inversion_free(Linkage c) noexcept;

/// Throws ValidationError explaining the inversion risk for centroid and
/// median; used by every consumer that reads triplet morphology off a
/// dendrogram.
void require_inversion_free(Linkage c);

/// Ward, centroid and median run the Lance-Williams recurrence on squared
/// input distances; their heights are reported as square roots.
bool uses_squared_distances(Linkage c) noexcept;

struct Merge {
  Index left = 0;   ///< smaller node id
  Index right = 0;  ///< larger node id
  double height = 0.0;
  Index size = 0;

  friend bool operator==(const Merge&, const Merge&) = default;
};

/// Binary agglomeration sequence. Leaves are nodes 0..n-1; merge t creates
/// node n + t.
class Dendrogram {
 public:
  Dendrogram() = default;

  /// Validates node usage, sizes and heights; throws ValidationError.
  Dendrogram(Index n_leaves, std::vector<Merge> merges, Labels labels = {});

  [[nodiscard]] Index leaves() const noexcept { return n_leaves_; }
  [[nodiscard]] const std::vector<Merge>& merges() const noexcept { return merges_; }
  [[nodiscard]] const Labels& labels() const noexcept { return labels_; }

  /// Height of a node: 0 for leaves.
  [[nodiscard]] double height(Index node) const;

  friend bool operator==(const Dendrogram&, const Dendrogram&) = default;

 private:
  Index n_leaves_ = 0;
  std::vector<Merge> merges_;
  Labels labels_;
};

/// Agglomerative clustering with Lance-Williams updates. Ties between
/// candidate pairs go to the lexicographically smallest
/// (min node id, max node id).
Dendrogram linkage(const DissimilarityMatrix& d, Linkage criterion);

/// d_u(i, j) = height of the first merge joining i and j.
UltrametricMatrix cophenetic(const Dendrogram& h);

struct Inversion {
  Index merge = 0;
  double drop = 0.0;  ///< child height minus merge height, > 0

  friend bool operator==(const Inversion&, const Inversion&) = default;
};

/// Merges sitting strictly below a merge they directly contain.
std::vector<Inversion> detect_inversions(const Dendrogram& h);

struct Edge {
  Index i = 0;
  Index j = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct SpanningTree {
  std::vector<Edge> edges;  ///< in acceptance order, i < j
  double total_weight = 0.0;
};

/// Kruskal over edges ordered by (weight, i, j).
SpanningTree mst_kruskal(const DissimilarityMatrix& d);

/// Largest edge weight on the tree path between each pair of vertices.
UltrametricMatrix mst_path_maxima(const SpanningTree& tree, const Labels& labels);

/// Minimal transitive (min over paths of the max edge) dissimilarity, by a
/// Floyd-Warshall sweep on the (min, max) semiring. Equals the subdominant
/// ultrametric.
UltrametricMatrix minmax_path_closure(const DissimilarityMatrix& d);

/// Pearson correlation between the strict upper triangles of `d` and `u`.
double cophenetic_correlation(const DissimilarityMatrix& d, const DissimilarityMatrix& u);

struct NewickExport {
  std::string text;
  bool branch_lengths = true;  ///< false when inversions forced a topology-only tree
};

/// Rooted binary Newick, children ordered by smallest leaf id.
NewickExport export_newick(const Dendrogram& h);

}  // namespace ultra
