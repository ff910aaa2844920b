#include "ultra/hierarchy.hpp"

#include "ultra/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <tuple>

namespace ultra {

namespace {

constexpr std::array<std::pair<Linkage, std::string_view>, 7> linkage_names{{
    {Linkage::single, "single"},
    {Linkage::complete, "complete"},
    {Linkage::average, "average"},
    {Linkage::mcquitty, "mcquitty"},
    {Linkage::ward, "ward"},
    {Linkage::centroid, "centroid"},
    {Linkage::median, "median"},
}};

}  // namespace

std::string_view to_string(Linkage c) noexcept {
  for (const auto& [value, name] : linkage_names) {
    if (value == c) return name;
  }
  return "unknown";
}

Linkage parse_linkage(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  for (const auto& [value, n] : linkage_names) {
    if (n == lower) return value;
  }
  throw ArgumentError("unknown linkage criterion '" + std::string(name) +
                      "' (expected single, complete, average, mcquitty, ward, centroid or median)");
}

bool is_inversion_free(Linkage c) noexcept {
  return c != Linkage::centroid && c != Linkage::median;
}

void require_inversion_free(Linkage c) {
  if (!is_inversion_free(c)) {
    throw ValidationError(
        std::string(to_string(c)) +
        " linkage can produce inversions (a merge below one it contains), so the lowest "
        "cophenetic side of a triplet need not be its first agglomeration; use single, "
        "complete, average, mcquitty or ward");
  }
}

bool uses_squared_distances(Linkage c) noexcept {
  return c == Linkage::ward || c == Linkage::centroid || c == Linkage::median;
}

// ---------------------------------------------------------------------------

Dendrogram::Dendrogram(Index n_leaves, std::vector<Merge> merges, Labels labels)
    : n_leaves_(n_leaves), merges_(std::move(merges)) {
  if (n_leaves_ < 1) throw ValidationError("dendrogram needs at least one leaf");
  if (static_cast<Index>(merges_.size()) != n_leaves_ - 1) {
    throw ValidationError("dendrogram over " + std::to_string(n_leaves_) + " leaves needs " +
                          std::to_string(n_leaves_ - 1) + " merges, got " +
                          std::to_string(merges_.size()));
  }
  if (labels.empty()) labels = index_labels(n_leaves_);
  if (static_cast<Index>(labels.size()) != n_leaves_) {
    throw ValidationError("dendrogram label count does not match its leaves");
  }
  labels_ = std::move(labels);

  const Index nodes = 2 * n_leaves_ - 1;
  std::vector<Index> size(static_cast<std::size_t>(nodes), 1);
  std::vector<bool> used(static_cast<std::size_t>(nodes), false);
  for (std::size_t t = 0; t < merges_.size(); ++t) {
    const Merge& m = merges_[t];
    const Index id = n_leaves_ + static_cast<Index>(t);
    for (const Index child : {m.left, m.right}) {
      if (child < 0 || child >= id) {
        throw ValidationError("merge " + std::to_string(t) + " references node " +
                              std::to_string(child) + " before it exists");
      }
      if (used[static_cast<std::size_t>(child)]) {
        throw ValidationError("node " + std::to_string(child) + " is merged twice");
      }
      used[static_cast<std::size_t>(child)] = true;
    }
    if (m.left == m.right) throw ValidationError("merge of a node with itself");
    const Index expected =
        size[static_cast<std::size_t>(m.left)] + size[static_cast<std::size_t>(m.right)];
    if (m.size != expected) {
      throw ValidationError("merge " + std::to_string(t) + " has size " +
                            std::to_string(m.size) + ", expected " + std::to_string(expected));
    }
    if (!std::isfinite(m.height) || m.height < 0.0) {
      throw ValidationError("merge " + std::to_string(t) + " has an invalid height");
    }
    size[static_cast<std::size_t>(id)] = expected;
  }
}

double Dendrogram::height(Index node) const {
  if (node < n_leaves_) return 0.0;
  return merges_.at(static_cast<std::size_t>(node - n_leaves_)).height;
}

// ---------------------------------------------------------------------------

namespace {

struct PairKey {
  double dist;
  Index lo;
  Index hi;

  friend bool operator<(const PairKey& a, const PairKey& b) {
    return std::tie(a.dist, a.lo, a.hi) < std::tie(b.dist, b.lo, b.hi);
  }
};

// Dissimilarity between cluster k and the union of i and j.
double lance_williams(Linkage c, double dik, double djk, double dij, double ni, double nj,
                      double nk) {
  const double lower = std::min(dik, djk);
  switch (c) {
    case Linkage::single:
      return lower;
    case Linkage::complete:
      return std::max(dik, djk);
    case Linkage::average:
      // Reducible criteria never fall below min(dik, djk); the clamp only
      // absorbs rounding so heights stay monotone.
      return std::max(lower, (ni * dik + nj * djk) / (ni + nj));
    case Linkage::mcquitty:
      return std::max(lower, 0.5 * (dik + djk));
    case Linkage::ward:
      return std::max(lower, ((ni + nk) * dik + (nj + nk) * djk - nk * dij) / (ni + nj + nk));
    case Linkage::centroid: {
      const double n = ni + nj;
      return (ni * dik + nj * djk) / n - ni * nj * dij / (n * n);
    }
    case Linkage::median:
      return 0.5 * dik + 0.5 * djk - 0.25 * dij;
  }
  return lower;
}

}  // namespace

Dendrogram linkage(const DissimilarityMatrix& d, Linkage criterion) {
  const Index n = d.size();
  if (n < 2) throw DegenerateInputError("linkage needs at least two observations");
  const bool squared = uses_squared_distances(criterion);
  const auto un = static_cast<std::size_t>(n);

  std::vector<double> w(un * un);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double v = d(i, j);
      w[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)] = squared ? v * v : v;
    }
  }
  auto at = [&](Index a, Index b) -> double& {
    return w[static_cast<std::size_t>(a) * un + static_cast<std::size_t>(b)];
  };

  // Slots hold the active clusters; node ids follow the dendrogram numbering.
  std::vector<Index> node(un);
  std::iota(node.begin(), node.end(), Index{0});
  std::vector<Index> size(un, 1);
  std::vector<char> active(un, 1);
  std::vector<Index> best(un, -1);
  std::vector<PairKey> best_key(un);

  auto key = [&](Index a, Index b) {
    const Index na = node[static_cast<std::size_t>(a)];
    const Index nb = node[static_cast<std::size_t>(b)];
    return PairKey{at(a, b), std::min(na, nb), std::max(na, nb)};
  };
  auto refresh = [&](Index a) {
    const auto ua = static_cast<std::size_t>(a);
    best[ua] = -1;
    for (Index b = 0; b < n; ++b) {
      if (b == a || !active[static_cast<std::size_t>(b)]) continue;
      const PairKey k = key(a, b);
      if (best[ua] < 0 || k < best_key[ua]) {
        best[ua] = b;
        best_key[ua] = k;
      }
    }
  };
  for (Index a = 0; a < n; ++a) refresh(a);

  std::vector<Merge> merges;
  merges.reserve(un - 1);
  for (Index step = 0; step < n - 1; ++step) {
    Index a = -1;
    for (Index s = 0; s < n; ++s) {
      const auto us = static_cast<std::size_t>(s);
      if (!active[us] || best[us] < 0) continue;
      if (a < 0 || best_key[us] < best_key[static_cast<std::size_t>(a)]) a = s;
    }
    const Index b = best[static_cast<std::size_t>(a)];
    const auto ua = static_cast<std::size_t>(a);
    const auto ub = static_cast<std::size_t>(b);
    const double level = at(a, b);

    merges.push_back({std::min(node[ua], node[ub]), std::max(node[ua], node[ub]),
                      squared ? std::sqrt(std::max(level, 0.0)) : level, size[ua] + size[ub]});

    const Index keep = std::min(a, b);
    const Index drop = std::max(a, b);
    for (Index k = 0; k < n; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      if (!active[uk] || k == a || k == b) continue;
      const double v =
          lance_williams(criterion, at(a, k), at(b, k), level, static_cast<double>(size[ua]),
                         static_cast<double>(size[ub]), static_cast<double>(size[uk]));
      at(keep, k) = v;
      at(k, keep) = v;
    }
    const auto ukeep = static_cast<std::size_t>(keep);
    active[static_cast<std::size_t>(drop)] = 0;
    size[ukeep] = size[ua] + size[ub];
    node[ukeep] = n + step;

    refresh(keep);
    for (Index k = 0; k < n; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      if (!active[uk] || k == keep) continue;
      if (best[uk] == a || best[uk] == b) {
        refresh(k);
      } else {
        const PairKey candidate = key(k, keep);
        if (candidate < best_key[uk]) {
          best[uk] = keep;
          best_key[uk] = candidate;
        }
      }
    }
  }
  return Dendrogram(n, std::move(merges), d.labels());
}

UltrametricMatrix cophenetic(const Dendrogram& h) {
  const Index n = h.leaves();
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(2 * n - 1));
  for (Index i = 0; i < n; ++i) members[static_cast<std::size_t>(i)] = {i};

  for (std::size_t t = 0; t < h.merges().size(); ++t) {
    const Merge& m = h.merges()[t];
    auto& left = members[static_cast<std::size_t>(m.left)];
    auto& right = members[static_cast<std::size_t>(m.right)];
    for (const Index x : left) {
      for (const Index y : right) {
        u(x, y) = m.height;
        u(y, x) = m.height;
      }
    }
    auto& joined = members[static_cast<std::size_t>(n) + t];
    joined = std::move(left);
    joined.insert(joined.end(), right.begin(), right.end());
    right.clear();
    right.shrink_to_fit();
  }
  return UltrametricMatrix(std::move(u), h.labels());
}

std::vector<Inversion> detect_inversions(const Dendrogram& h) {
  std::vector<Inversion> out;
  for (std::size_t t = 0; t < h.merges().size(); ++t) {
    const Merge& m = h.merges()[t];
    const double child = std::max(h.height(m.left), h.height(m.right));
    if (m.height < child) out.push_back({static_cast<Index>(t), child - m.height});
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }

  Index find(Index x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }

  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    return true;
  }

 private:
  std::vector<Index> parent_;
};

}  // namespace

SpanningTree mst_kruskal(const DissimilarityMatrix& d) {
  const Index n = d.size();
  if (n < 2) throw DegenerateInputError("spanning tree needs at least two vertices");

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) edges.push_back({i, j, d(i, j)});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.weight, a.i, a.j) < std::tie(b.weight, b.i, b.j);
  });

  SpanningTree tree;
  DisjointSets sets(n);
  for (const Edge& e : edges) {
    if (!sets.unite(e.i, e.j)) continue;
    tree.edges.push_back(e);
    tree.total_weight += e.weight;
    if (static_cast<Index>(tree.edges.size()) == n - 1) break;
  }
  return tree;
}

UltrametricMatrix mst_path_maxima(const SpanningTree& tree, const Labels& labels) {
  const auto n = static_cast<Index>(labels.size());
  if (static_cast<Index>(tree.edges.size()) != n - 1) {
    throw DimensionError("spanning tree does not match the label count");
  }
  std::vector<std::vector<std::pair<Index, double>>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : tree.edges) {
    adj[static_cast<std::size_t>(e.i)].push_back({e.j, e.weight});
    adj[static_cast<std::size_t>(e.j)].push_back({e.i, e.weight});
  }

  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
  std::vector<Index> stack;
  std::vector<char> seen(static_cast<std::size_t>(n));
  for (Index src = 0; src < n; ++src) {
    std::fill(seen.begin(), seen.end(), 0);
    seen[static_cast<std::size_t>(src)] = 1;
    stack.assign(1, src);
    while (!stack.empty()) {
      const Index x = stack.back();
      stack.pop_back();
      for (const auto& [y, wgt] : adj[static_cast<std::size_t>(x)]) {
        if (seen[static_cast<std::size_t>(y)]) continue;
        seen[static_cast<std::size_t>(y)] = 1;
        u(src, y) = std::max(u(src, x), wgt);
        stack.push_back(y);
      }
    }
  }
  return UltrametricMatrix(std::move(u), labels);
}

UltrametricMatrix minmax_path_closure(const DissimilarityMatrix& d) {
  const Index n = d.size();
  if (n < 2) throw DegenerateInputError("path closure needs at least two vertices");
  Eigen::MatrixXd u = d.values();
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < n; ++i) {
      const double uik = u(i, k);
      for (Index j = 0; j < n; ++j) {
        const double via = std::max(uik, u(k, j));
        if (via < u(i, j)) u(i, j) = via;
      }
    }
  }
  return UltrametricMatrix(std::move(u), d.labels());
}

double cophenetic_correlation(const DissimilarityMatrix& d, const DissimilarityMatrix& u) {
  const Index n = d.size();
  if (u.size() != n) throw DimensionError("cophenetic correlation needs matching dimensions");
  if (n < 2) throw DegenerateInputError("cophenetic correlation needs at least two points");

  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  double mean_d = 0.0;
  double mean_u = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      mean_d += d(i, j);
      mean_u += u(i, j);
    }
  }
  mean_d /= pairs;
  mean_u /= pairs;

  double sdd = 0.0;
  double suu = 0.0;
  double sdu = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double a = d(i, j) - mean_d;
      const double b = u(i, j) - mean_u;
      sdd += a * a;
      suu += b * b;
      sdu += a * b;
    }
  }
  if (sdd == 0.0 || suu == 0.0) {
    throw DegenerateInputError("correlation is undefined for a constant upper triangle");
  }
  return std::clamp(sdu / std::sqrt(sdd * suu), -1.0, 1.0);
}

// ---------------------------------------------------------------------------

namespace {

std::string newick_label(const std::string& label) {
  const bool plain = !label.empty() && label.find_first_of(" \t\n()[]':;,") == std::string::npos;
  if (plain) return label;
  std::string out = "'";
  for (const char ch : label) {
    out += ch;
    if (ch == '\'') out += '\'';
  }
  out += '\'';
  return out;
}

std::string shortest(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

NewickExport export_newick(const Dendrogram& h) {
  const Index n = h.leaves();
  const bool lengths = detect_inversions(h).empty();

  std::vector<Index> min_leaf(static_cast<std::size_t>(2 * n - 1));
  std::iota(min_leaf.begin(), min_leaf.begin() + n, Index{0});
  for (std::size_t t = 0; t < h.merges().size(); ++t) {
    const Merge& m = h.merges()[t];
    min_leaf[static_cast<std::size_t>(n) + t] = std::min(
        min_leaf[static_cast<std::size_t>(m.left)], min_leaf[static_cast<std::size_t>(m.right)]);
  }

  std::string out;
  auto emit = [&](auto&& self, Index id, double parent_height) -> void {
    if (id < n) {
      out += newick_label(h.labels()[static_cast<std::size_t>(id)]);
    } else {
      const Merge& m = h.merges()[static_cast<std::size_t>(id - n)];
      Index first = m.left;
      Index second = m.right;
      if (min_leaf[static_cast<std::size_t>(second)] < min_leaf[static_cast<std::size_t>(first)]) {
        std::swap(first, second);
      }
      out += '(';
      self(self, first, m.height);
      out += ',';
      self(self, second, m.height);
      out += ')';
    }
    if (lengths && parent_height >= 0.0) {
      out += ':';
      out += shortest(parent_height - h.height(id));
    }
  };
  emit(emit, 2 * n - 2, -1.0);
  out += ';';
  return {std::move(out), lengths};
}

}  // namespace ultra
