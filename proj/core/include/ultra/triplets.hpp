#pragma once

#include "ultra/matrix.hpp"
#include "ultra/parallel.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <variant>
#include <vector>

namespace ultra {

/// Visit every unordered triplet i < j < k.
struct Exhaustive {};

/// Visit `count` triplets drawn uniformly (with replacement across draws)
/// from the distinct-index space, reproducibly from `seed`.
struct Sampled {
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
};

using TripletMode = std::variant<Exhaustive, Sampled>;

using Triplet = std::array<Index, 3>;

/// n (n - 1) (n - 2) / 6.
constexpr std::uint64_t triplet_count(Index n) noexcept {
  if (n < 3) return 0;
  const auto m = static_cast<std::uint64_t>(n);
  return m * (m - 1) * (m - 2) / 6;
}

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// SplitMix64 stream. Output k is a pure function of (seed, k), which makes
/// the generator platform independent and trivially splittable.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1): top 53 bits over 2^53.
  constexpr double next_unit() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [0, bound) without modulo bias.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

/// The `draw`-th sampled triplet of stream `seed`, sorted ascending. Each
/// draw owns an independent substream so any partition of the draws over
/// threads yields the same triplets.
inline Triplet sampled_triplet(std::uint64_t seed, std::uint64_t draw, Index n) {
  SplitMix64 rng(mix64(seed) ^ mix64(draw + 0x632be59bd9b4e019ULL));
  const auto bound = static_cast<std::uint64_t>(n);
  Triplet t{};
  t[0] = static_cast<Index>(rng.below(bound));
  do {
    t[1] = static_cast<Index>(rng.below(bound));
  } while (t[1] == t[0]);
  do {
    t[2] = static_cast<Index>(rng.below(bound));
  } while (t[2] == t[0] || t[2] == t[1]);
  std::sort(t.begin(), t.end());
  return t;
}

/// Apply `visit(acc, i, j, k)` to every triplet selected by `mode`, in
/// parallel. Returns one accumulator per chunk, in a schedule-independent
/// order: exhaustive chunks are indexed by i, sampled chunks by draw block.
template <class Acc, class Visit>
std::vector<Acc> scan_triplets(Index n, const TripletMode& mode, Visit visit) {
  constexpr std::uint64_t block = 8192;
  if (const auto* s = std::get_if<Sampled>(&mode)) {
    const std::size_t chunks = static_cast<std::size_t>((s->count + block - 1) / block);
    std::vector<Acc> acc(chunks);
    parallel_for(chunks, [&](std::size_t c) {
      const std::uint64_t begin = c * block;
      const std::uint64_t end = std::min(s->count, begin + block);
      for (std::uint64_t draw = begin; draw < end; ++draw) {
        const Triplet t = sampled_triplet(s->seed, draw, n);
        visit(acc[c], t[0], t[1], t[2]);
      }
    });
    return acc;
  }
  const std::size_t chunks = n >= 3 ? static_cast<std::size_t>(n - 2) : 0;
  std::vector<Acc> acc(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const auto i = static_cast<Index>(c);
    for (Index j = i + 1; j < n; ++j) {
      for (Index k = j + 1; k < n; ++k) visit(acc[c], i, j, k);
    }
  });
  return acc;
}

}  // namespace ultra
