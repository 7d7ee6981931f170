#include <benchmark/benchmark.h>

#include "polylink/limits.hpp"
#include "polylink/thresholds.hpp"

namespace {

using namespace polylink;

PointCloud square_cloud(std::size_t n, std::uint64_t seed = 1) {
  static const Polytope square = build_polytope(PolytopeSpec::hypercube(2));
  static const DensityModel uniform(DensitySpec::uniform(), square);
  return sample_points(square, uniform, n, seed);
}

void BM_Hhat(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hhat(3.0, x));
    x = x > 20.0 ? 0.0 : x + 0.01;
  }
}
BENCHMARK(BM_Hhat);

void BM_SampleSquare(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(square_cloud(n, ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleSquare)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_FaceLattice(benchmark::State& state) {
  const auto spec = PolytopeSpec::hypercube(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_polytope(spec));
}
BENCHMARK(BM_FaceLattice)->DenseRange(2, 6)->Unit(benchmark::kMillisecond);

void BM_LimitConstantCube(benchmark::State& state) {
  const auto cube = build_polytope(PolytopeSpec::hypercube(3));
  const DensityModel uniform(DensitySpec::uniform(), cube);
  for (auto _ : state) benchmark::DoNotOptimize(limit_constant(cube, uniform, BetaMode::finite(3.0)));
}
BENCHMARK(BM_LimitConstantCube);

void BM_LargestKnnLink(benchmark::State& state) {
  const auto cloud = square_cloud(static_cast<std::size_t>(state.range(0)));
  const auto k = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(largest_k_nn_link(cloud, k));
}
BENCHMARK(BM_LargestKnnLink)->Args({10'000, 1})->Args({100'000, 1})->Args({100'000, 35})->Unit(benchmark::kMillisecond);

void BM_LongestMstEdge(benchmark::State& state) {
  const auto cloud = square_cloud(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(longest_mst_edge(cloud));
}
BENCHMARK(BM_LongestMstEdge)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_KConnectivityThreshold(benchmark::State& state) {
  const auto cloud = square_cloud(static_cast<std::size_t>(state.range(0)));
  const auto k = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(k_connectivity_threshold(cloud, k));
}
BENCHMARK(BM_KConnectivityThreshold)
    ->Args({10'000, 2})
    ->Args({10'000, 5})
    ->Args({100'000, 5})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
