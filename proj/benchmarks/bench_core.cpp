#include <benchmark/benchmark.h>

#include "symgeo/contract.hpp"
#include "symgeo/optimize.hpp"
#include "symgeo/spectral.hpp"
#include "symgeo/symstate.hpp"

using namespace symgeo;

static void BM_Overlap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto psi = random_nonneg_dense(n, 2, 1);
  const auto phi = ProductState::repeated(UnitVector::uniform(2), n);
  for (auto _ : state) benchmark::DoNotOptimize(overlap(phi, psi));
}
BENCHMARK(BM_Overlap)->DenseRange(4, 16, 4);

static void BM_SymmetricOverlap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto s = random_nonneg_symmetric(n, 3, 1);
  const auto phi = UnitVector::uniform(3);
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_overlap(phi, s));
}
BENCHMARK(BM_SymmetricOverlap)->DenseRange(4, 32, 14);

static void BM_GridSearchProduct(benchmark::State& state) {
  const auto psi = dicke_to_dense(random_nonneg_symmetric(3, 2, 2));
  GridSpec g;
  g.resolution = 8;
  g.complex_phases = true;
  g.refine_top = 4;
  for (auto _ : state) benchmark::DoNotOptimize(grid_search_product(psi, g).lambda);
}
BENCHMARK(BM_GridSearchProduct)->Unit(benchmark::kMillisecond);

static void BM_GridSearchSymmetric(benchmark::State& state) {
  const auto s = random_nonneg_symmetric(6, 2, 3);
  GridSpec g;
  g.resolution = 33;
  for (auto _ : state) benchmark::DoNotOptimize(grid_search_symmetric(s, g).lambda);
}
BENCHMARK(BM_GridSearchSymmetric)->Unit(benchmark::kMillisecond);

static void BM_Shopm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto s = random_nonneg_symmetric(n, 3, 4);
  for (auto _ : state) benchmark::DoNotOptimize(shopm(s, UnitVector::uniform(3)).lambda);
}
BENCHMARK(BM_Shopm)->DenseRange(3, 9, 3);

static void BM_PfPowerIteration(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto m = real_matrix(matricize(dicke_to_dense(random_nonneg_symmetric(2, d, 5))));
  for (auto _ : state) benchmark::DoNotOptimize(pf_power_iteration(m).lambda1);
}
BENCHMARK(BM_PfPowerIteration)->RangeMultiplier(4)->Range(4, 64);

static void BM_Symmetrize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto psi = random_nonneg_dense(n, 2, 6);
  std::vector<UnitVector> init;
  for (int p = 0; p < n; ++p) init.push_back(p < n / 2 ? UnitVector::basis(2, 0) : UnitVector::basis(2, 1));
  const ProductState start(init);
  for (auto _ : state) benchmark::DoNotOptimize(symmetrize(start, psi).trace.steps.size());
}
BENCHMARK(BM_Symmetrize)->DenseRange(4, 12, 4);
BENCHMARK_MAIN();
