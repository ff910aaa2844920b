#pragma once

// Random generators and deliberately naive reference implementations. Nothing
// here calls into the library's algorithms, so tests comparing the two are
// comparing independent code paths.

#include "ultra/ultra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace oracle {

using ultra::Index;

inline Eigen::MatrixXd uniform_points(Index n, Index p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < p; ++k) x(i, k) = u(rng);
  }
  return x;
}

inline ultra::CoordinateMatrix uniform_cloud(Index n, Index p, std::uint64_t seed) {
  return ultra::CoordinateMatrix(uniform_points(n, p, seed));
}

/// Euclidean distances by explicit summation.
inline Eigen::MatrixXd naive_distances(const Eigen::MatrixXd& x) {
  const Index n = x.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Index k = 0; k < x.cols(); ++k) s += (x(i, k) - x(j, k)) * (x(i, k) - x(j, k));
      d(i, j) = std::sqrt(s);
    }
  }
  return d;
}

/// Symmetric matrix of independent uniform (lo, hi) entries; distinct with
/// probability one.
inline ultra::DissimilarityMatrix random_dissimilarity(Index n, std::uint64_t seed,
                                                       double lo = 0.01, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = u(rng);
  }
  return ultra::DissimilarityMatrix(d);
}

/// Ultrametric from random binary agglomeration with strictly increasing,
/// distinct merge heights. Every triplet is isosceles with a strictly
/// smaller base.
inline ultra::UltrametricMatrix random_ultrametric(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<std::vector<Index>> clusters;
  for (Index i = 0; i < n; ++i) clusters.push_back({i});
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  double height = 0.0;
  while (clusters.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, clusters.size() - 1);
    std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    while (b == a) b = pick(rng);
    if (a > b) std::swap(a, b);
    height += u(rng);
    for (Index p : clusters[a]) {
      for (Index q : clusters[b]) d(p, q) = d(q, p) = height;
    }
    clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
  }
  return ultra::UltrametricMatrix(d);
}

/// Subdominant ultrametric by repeated relaxation until nothing changes.
inline Eigen::MatrixXd naive_subdominant(const Eigen::MatrixXd& d) {
  Eigen::MatrixXd u = d;
  const Index n = d.rows();
  for (bool changed = true; changed;) {
    changed = false;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
          const double via = std::max(u(i, k), u(k, j));
          if (via < u(i, j)) {
            u(i, j) = via;
            changed = true;
          }
        }
      }
    }
  }
  return u;
}

/// Interior angles at a, b, c via atan2 of cross and dot products.
inline std::array<double, 3> naive_angles(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                          const Eigen::VectorXd& c) {
  auto at = [](const Eigen::VectorXd& p, const Eigen::VectorXd& q, const Eigen::VectorXd& r) {
    const Eigen::VectorXd u = q - p;
    const Eigen::VectorXd v = r - p;
    const double dot = u.dot(v);
    const double cross2 = std::max(0.0, u.squaredNorm() * v.squaredNorm() - dot * dot);
    return std::atan2(std::sqrt(cross2), dot);
  };
  return {at(a, b, c), at(b, c, a), at(c, a, b)};
}

inline bool tied(double x, double y) {
  return std::abs(x - y) <= 1e-9 * std::max(std::abs(x), std::abs(y));
}

/// Base pair of an isosceles-with-small-base triplet, or nothing.
inline std::optional<std::pair<Index, Index>> naive_base(const Eigen::MatrixXd& u, Index i,
                                                         Index j, Index k) {
  const std::array<std::pair<Index, Index>, 3> pairs{{{i, j}, {i, k}, {j, k}}};
  for (std::size_t s = 0; s < 3; ++s) {
    const double base = u(pairs[s].first, pairs[s].second);
    const auto& o1 = pairs[(s + 1) % 3];
    const auto& o2 = pairs[(s + 2) % 3];
    const double x = u(o1.first, o1.second);
    const double y = u(o2.first, o2.second);
    if (tied(x, y) && base < x && base < y && !tied(base, x) && !tied(base, y)) return pairs[s];
  }
  return std::nullopt;
}

struct NaiveMatch {
  std::array<Index, 3> triplet;
  Index apex;
  auto operator<=>(const NaiveMatch&) const = default;
};

inline std::vector<NaiveMatch> naive_consensus(const Eigen::MatrixXd& u1, const Eigen::MatrixXd& u2) {
  std::vector<NaiveMatch> out;
  const Index n = u1.rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      for (Index k = j + 1; k < n; ++k) {
        const auto b1 = naive_base(u1, i, j, k);
        const auto b2 = naive_base(u2, i, j, k);
        if (b1 && b2 && *b1 == *b2) {
          const Index apex = i + j + k - b1->first - b1->second;
          out.push_back({{i, j, k}, apex});
        }
      }
    }
  }
  return out;
}

/// Two-stage component oracle: consensus, then the angle test with the
/// consensus apex required to carry the smallest angle.
inline std::set<std::array<Index, 3>> naive_component(const Eigen::MatrixXd& x,
                                                      const Eigen::MatrixXd& u1,
                                                      const Eigen::MatrixXd& u2, double eps) {
  std::set<std::array<Index, 3>> out;
  for (const auto& m : naive_consensus(u1, u2)) {
    const auto& t = m.triplet;
    const auto ang = naive_angles(x.row(t[0]).transpose(), x.row(t[1]).transpose(),
                                  x.row(t[2]).transpose());
    const std::size_t a = m.apex == t[0] ? 0 : (m.apex == t[1] ? 1 : 2);
    const double apex_angle = ang[a];
    const double b1 = ang[(a + 1) % 3];
    const double b2 = ang[(a + 2) % 3];
    if (apex_angle > b1 || apex_angle > b2) continue;
    if (apex_angle > std::numbers::pi / 3 + 1e-12) continue;
    if (std::abs(b1 - b2) <= eps) out.insert(t);
  }
  return out;
}

/// Minimal Newick reader: returns the height of every internal node,
/// measured as the path length down to its first leaf, plus leaf names.
struct NewickNode {
  std::string name;
  double length = 0.0;
  std::vector<std::unique_ptr<NewickNode>> children;
};

class NewickReader {
 public:
  explicit NewickReader(std::string text) : s_(std::move(text)) {}

  std::unique_ptr<NewickNode> parse() {
    auto root = node();
    if (pos_ >= s_.size() || s_[pos_] != ';') throw std::runtime_error("missing ';'");
    return root;
  }

 private:
  std::unique_ptr<NewickNode> node() {
    auto n = std::make_unique<NewickNode>();
    if (s_[pos_] == '(') {
      ++pos_;
      n->children.push_back(node());
      while (s_[pos_] == ',') {
        ++pos_;
        n->children.push_back(node());
      }
      if (s_[pos_] != ')') throw std::runtime_error("expected ')'");
      ++pos_;
    } else if (s_[pos_] == '\'') {
      ++pos_;
      for (;;) {
        if (s_[pos_] == '\'') {
          if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '\'') {
            n->name += '\'';
            pos_ += 2;
            continue;
          }
          ++pos_;
          break;
        }
        n->name += s_[pos_++];
      }
    } else {
      while (pos_ < s_.size() && std::string_view(":,();").find(s_[pos_]) == std::string_view::npos) {
        n->name += s_[pos_++];
      }
    }
    if (s_[pos_] == ':') {
      ++pos_;
      const std::size_t end = s_.find_first_of(",);", pos_);
      n->length = std::stod(s_.substr(pos_, end - pos_));
      pos_ = end;
    }
    return n;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

inline double newick_depth(const NewickNode& n) {
  return n.children.empty() ? 0.0 : n.children.front()->length + newick_depth(*n.children.front());
}

inline void newick_collect(const NewickNode& n, std::vector<double>& heights,
                           std::vector<std::string>& leaves) {
  if (n.children.empty()) {
    leaves.push_back(n.name);
    return;
  }
  heights.push_back(newick_depth(n));
  for (const auto& c : n.children) newick_collect(*c, heights, leaves);
}

}  // namespace oracle
