#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "laca/corpus.hpp"
#include "laca/stats/kde.hpp"
#include "laca/stats/reliability.hpp"
#include "laca/stats/studentized_range.hpp"
#include "laca/stats/wasserstein.hpp"

namespace {

std::vector<std::vector<laca::stats::Rating>> ratings(std::size_t coders, std::size_t units) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> v(-2, 2);
  std::bernoulli_distribution missing(0.05);
  std::vector<std::vector<laca::stats::Rating>> out(coders, std::vector<laca::stats::Rating>(units));
  for (auto& row : out) {
    for (auto& cell : row) {
      if (!missing(rng)) cell = v(rng);
    }
  }
  return out;
}

std::vector<double> contrasts(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> v(-2, 2);
  std::vector<double> out(n);
  for (auto& x : out) x = v(rng) - v(rng);
  return out;
}

void BM_AlphaOrdinal(benchmark::State& state) {
  const auto table = ratings(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(laca::stats::krippendorff_alpha_ordinal(table).alpha);
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_AlphaOrdinal)->Args({2, 224})->Args({6, 224})->Args({6, 10000});

void BM_Wasserstein(benchmark::State& state) {
  const auto a = contrasts(static_cast<std::size_t>(state.range(0)), 1);
  const auto b = contrasts(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(laca::stats::wasserstein_1d(a, b));
}
BENCHMARK(BM_Wasserstein)->Arg(242)->Arg(100000);

void BM_StudentizedRangeCdf(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(laca::stats::studentized_range_cdf(3.5, k, 1446.0));
}
BENCHMARK(BM_StudentizedRangeCdf)->Arg(2)->Arg(6);

void BM_StudentizedRangeQuantile(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(laca::stats::studentized_range_quantile(0.95, 6, 1446.0));
}
BENCHMARK(BM_StudentizedRangeQuantile);

void BM_Kde(benchmark::State& state) {
  const auto v = contrasts(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(laca::stats::kde(v).density.back());
}
BENCHMARK(BM_Kde)->Arg(242)->Arg(5000);

void BM_Chunk(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += i ? " word" : "word";
  const laca::Transcript t{"t", laca::Source::FoxNews, {}, text};
  for (auto _ : state) benchmark::DoNotOptimize(laca::chunk(t, laca::kDefaultChunkTokens).size());
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_Chunk)->Arg(3300)->Arg(50000);

}  // namespace
BENCHMARK_MAIN();
