#include <ultra/ultra.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace ultra;

namespace {

CoordinateMatrix cloud(Index n, Index p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) x(i, j) = u(rng);
  }
  return CoordinateMatrix(x);
}

void BM_AlphaEpsilon(benchmark::State& state) {
  const CoordinateMatrix x = cloud(state.range(0), 10, 1);
  for (auto _ : state) benchmark::DoNotOptimize(alpha_epsilon(x).ultrametric);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(triplet_count(state.range(0))));
}
BENCHMARK(BM_AlphaEpsilon)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_AlphaEpsilonSampled(benchmark::State& state) {
  const CoordinateMatrix x = cloud(2000, 10, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(alpha_epsilon(x, default_epsilon, Sampled{static_cast<std::uint64_t>(state.range(0)), 7}));
  }
}
BENCHMARK(BM_AlphaEpsilonSampled)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Linkage(benchmark::State& state) {
  const DissimilarityMatrix d = euclidean_distances(cloud(state.range(0), 5, 3));
  const auto method = static_cast<Linkage>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(linkage(d, method));
}
BENCHMARK(BM_Linkage)
    ->Args({200, static_cast<int>(Linkage::single)})
    ->Args({200, static_cast<int>(Linkage::ward)})
    ->Args({500, static_cast<int>(Linkage::average)})
    ->Unit(benchmark::kMillisecond);

void BM_MinmaxClosure(benchmark::State& state) {
  const DissimilarityMatrix d = euclidean_distances(cloud(state.range(0), 5, 4));
  for (auto _ : state) benchmark::DoNotOptimize(minmax_path_closure(d));
}
BENCHMARK(BM_MinmaxClosure)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_ConsensusCount(benchmark::State& state) {
  const DissimilarityMatrix d = euclidean_distances(cloud(state.range(0), 5, 5));
  const UltrametricMatrix u1 = cophenetic(linkage(d, Linkage::ward));
  const UltrametricMatrix u2 = cophenetic(linkage(d, Linkage::single));
  for (auto _ : state) benchmark::DoNotOptimize(consensus_count(u1, u2).matched);
}
BENCHMARK(BM_ConsensusCount)->Arg(30)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_Pcoa(benchmark::State& state) {
  const DissimilarityMatrix d = euclidean_distances(cloud(state.range(0), 10, 6));
  for (auto _ : state) benchmark::DoNotOptimize(pcoa(d));
}
BENCHMARK(BM_Pcoa)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
