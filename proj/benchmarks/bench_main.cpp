#include <benchmark/benchmark.h>

#include <cmath>

#include "cssel/grothendieck.hpp"
#include "cssel/matcore.hpp"
#include "cssel/pietsch.hpp"
#include "cssel/rng.hpp"
#include "cssel/select.hpp"

namespace {

using cssel::Index;
using cssel::Matrix;

Matrix symmetric(Index n, std::uint64_t seed) {
  cssel::Rng rng(seed);
  const Matrix g = cssel::gaussian_matrix(n, n, rng);
  return (g + g.transpose()) / 2.0;
}

Matrix standardized(Index m, Index n, std::uint64_t seed) {
  cssel::Rng rng(seed);
  return cssel::standardize(cssel::gaussian_matrix(m, n, rng));
}

void BM_MaxEigPair(benchmark::State& state) {
  const Matrix h = symmetric(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(cssel::max_eig_pair(h).value);
}
BENCHMARK(BM_MaxEigPair)->RangeMultiplier(2)->Range(8, 128);

void BM_PietschFactorize(benchmark::State& state) {
  const Index s = state.range(0);
  const Matrix b = standardized(32, s, 2);
  const double alpha = 8.0 * cssel::kPietschConstant * std::sqrt(static_cast<double>(s));
  for (auto _ : state) benchmark::DoNotOptimize(cssel::pietsch_factorize(b, alpha).eta);
}
BENCHMARK(BM_PietschFactorize)->RangeMultiplier(2)->Range(4, 64);

void BM_GrothFactorize(benchmark::State& state) {
  const Index s = state.range(0);
  const Matrix g = cssel::hollow_gram(standardized(16, s, 3));
  for (auto _ : state) benchmark::DoNotOptimize(cssel::groth_factorize(g, static_cast<double>(s) / 4.0).eta);
}
BENCHMARK(BM_GrothFactorize)->RangeMultiplier(2)->Range(4, 32);

void BM_NormInf2Exact(benchmark::State& state) {
  const Matrix b = standardized(8, state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(cssel::norm_inf2_exact(b).value);
}
BENCHMARK(BM_NormInf2Exact)->DenseRange(8, 20, 4);

void BM_KtSelect(benchmark::State& state) {
  const Matrix a = standardized(32, 64, 5);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(cssel::kt_select(a, seed++).tau.size());
}
BENCHMARK(BM_KtSelect)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
