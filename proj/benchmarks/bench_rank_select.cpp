#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wavelet/rank_select.hpp"

namespace {

using wavelet::BitArray;
using wavelet::RankSelectBitVector;
using wavelet::RankSelectParams;

RankSelectBitVector make_vector(std::uint64_t n, double fill, RankSelectParams params) {
  BitArray bits(std::span<std::uint64_t const>(&n, 1));
  std::mt19937_64 rng(n);
  std::bernoulli_distribution coin(fill);
  for (std::uint64_t j = 0; j < n; ++j) {
    if (coin(rng)) bits.set_bit(j, true);
  }
  return RankSelectBitVector(std::move(bits), params);
}

std::vector<std::uint64_t> arguments(std::uint64_t bound, std::size_t count) {
  std::mt19937_64 rng(7);
  std::vector<std::uint64_t> out(count);
  for (auto& x : out) x = rng() % bound;
  return out;
}

void BM_Build(benchmark::State& state) {
  std::uint64_t const n = static_cast<std::uint64_t>(state.range(0));
  auto const bv = make_vector(n, 0.5, {});
  for (auto _ : state) {
    auto index = wavelet::RankSelectIndex::build(bv.bits().region(0), RankSelectParams{});
    benchmark::DoNotOptimize(index);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n / 8));
}
BENCHMARK(BM_Build)->Arg(1 << 20)->Arg(1 << 24);

void BM_Rank1(benchmark::State& state) {
  std::uint64_t const n = static_cast<std::uint64_t>(state.range(0));
  auto const bv = make_vector(n, 0.5, {});
  auto const args = arguments(n + 1, 1 << 16);
  std::size_t j = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bv.rank1(args[j++ & 0xFFFF]));
  }
}
BENCHMARK(BM_Rank1)->Arg(1 << 20)->Arg(1 << 26);

// Fill in percent; sample rate as second argument.
void BM_Select1(benchmark::State& state) {
  std::uint64_t const n = 1 << 24;
  double const fill = static_cast<double>(state.range(0)) / 100.0;
  auto const bv = make_vector(n, fill, {512, static_cast<std::uint32_t>(state.range(1))});
  auto const args = arguments(bv.rank1(n), 1 << 16);
  std::size_t j = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bv.select1(args[j++ & 0xFFFF] + 1));
  }
}
BENCHMARK(BM_Select1)->ArgsProduct({{10, 50, 90}, {4096, 16384}});

void BM_Select0(benchmark::State& state) {
  std::uint64_t const n = 1 << 24;
  auto const bv = make_vector(n, 0.5, {});
  auto const args = arguments(bv.rank0(n), 1 << 16);
  std::size_t j = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bv.select0(args[j++ & 0xFFFF] + 1));
  }
}
BENCHMARK(BM_Select0);

}  // namespace

BENCHMARK_MAIN();
