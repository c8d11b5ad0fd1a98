#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wavelet/batch.hpp"
#include "wavelet/wavelet_tree.hpp"

namespace {

using namespace wavelet;

std::vector<Symbol> random_text(std::size_t n, std::uint64_t sigma) {
  std::mt19937_64 rng(sigma);
  std::vector<Symbol> text(n);
  for (auto& s : text) s = static_cast<Symbol>(rng() % sigma);
  return text;
}

// Argument: alphabet size. 25 and 243 need the reduced shape.
void BM_Build(benchmark::State& state) {
  auto const text = random_text(1 << 22, static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    auto wt = WaveletTree::build(text);
    benchmark::DoNotOptimize(wt);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Build)->Arg(4)->Arg(25)->Arg(243)->Arg(256)->Unit(benchmark::kMillisecond);

struct Fixture {
  std::vector<Symbol> text;
  WaveletTree tree;
  std::vector<std::uint64_t> positions;
  std::vector<Symbol> symbols;

  explicit Fixture(std::uint64_t sigma) : text(random_text(1 << 22, sigma)), tree(WaveletTree::build(text)) {
    std::mt19937_64 rng(1);
    for (int j = 0; j < (1 << 16); ++j) {
      positions.push_back(rng() % text.size());
      symbols.push_back(text[rng() % text.size()]);
    }
  }
};

void BM_Access(benchmark::State& state) {
  Fixture const f(static_cast<std::uint64_t>(state.range(0)));
  std::size_t j = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.tree.access(f.positions[j++ & 0xFFFF]));
  }
}
BENCHMARK(BM_Access)->Arg(4)->Arg(25)->Arg(243)->Arg(256);

void BM_Rank(benchmark::State& state) {
  Fixture const f(static_cast<std::uint64_t>(state.range(0)));
  std::size_t j = 0;
  for (auto _ : state) {
    auto const k = j++ & 0xFFFF;
    benchmark::DoNotOptimize(f.tree.rank(f.symbols[k], f.positions[k]));
  }
}
BENCHMARK(BM_Rank)->Arg(4)->Arg(25)->Arg(243)->Arg(256);

void BM_Select(benchmark::State& state) {
  Fixture const f(static_cast<std::uint64_t>(state.range(0)));
  std::size_t j = 0;
  for (auto _ : state) {
    auto const k = j++ & 0xFFFF;
    Symbol const c = f.symbols[k];
    benchmark::DoNotOptimize(f.tree.select(c, 1 + f.positions[k] % f.tree.occurrences(c)));
  }
}
BENCHMARK(BM_Select)->Arg(4)->Arg(25)->Arg(243)->Arg(256);

// Arguments: workers, chunk size.
void BM_RankBatch(benchmark::State& state) {
  Fixture const f(243);
  std::vector<RankQuery> queries;
  for (std::size_t k = 0; k < f.positions.size(); ++k) queries.push_back({f.symbols[k], f.positions[k]});
  BatchOptions const opt{static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1))};
  for (auto _ : state) {
    auto res = rank_batch(f.tree, queries, opt);
    benchmark::DoNotOptimize(res);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * queries.size()));
}
BENCHMARK(BM_RankBatch)->ArgsProduct({{1, 0}, {4096, 0}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
