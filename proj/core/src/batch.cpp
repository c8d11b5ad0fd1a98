#include "wavelet/batch.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <memory>
#include <numeric>
#include <optional>
#include <semaphore>
#include <string>
#include <thread>

#include "wavelet/worker_pool.hpp"

namespace wavelet {

BatchError::BatchError(std::size_t index, Error const& cause)
    : Error(cause.code(), "query " + std::to_string(index) + ": " + cause.what()), index_(index) {}

std::size_t QueryBatch::size() const noexcept {
  return std::visit([](auto const& v) { return v.size(); }, queries);
}

namespace {

struct StagingCounter {
  std::atomic<std::size_t> live{0};
  std::atomic<std::size_t> peak{0};
};

// Allocator that records how many query records the staging buffers hold.
template <typename T>
struct CountingAllocator {
  using value_type = T;

  explicit CountingAllocator(StagingCounter* c) noexcept : counter(c) {}
  template <typename U>
  CountingAllocator(CountingAllocator<U> const& other) noexcept : counter(other.counter) {}

  T* allocate(std::size_t n) {
    std::size_t const now = counter->live.fetch_add(n) + n;
    std::size_t peak = counter->peak.load();
    while (now > peak && !counter->peak.compare_exchange_weak(peak, now)) {
    }
    return std::allocator<T>{}.allocate(n);
  }
  void deallocate(T* p, std::size_t n) noexcept {
    counter->live.fetch_sub(n);
    std::allocator<T>{}.deallocate(p, n);
  }

  template <typename U>
  bool operator==(CountingAllocator<U> const& other) const noexcept {
    return counter == other.counter;
  }

  StagingCounter* counter;
};

void validate(WaveletTree const& tree, AccessQuery const& q) {
  if (q.position >= tree.size()) {
    throw Error(ErrorCode::index_out_of_range, "access position " + std::to_string(q.position));
  }
}

void validate(WaveletTree const& tree, RankQuery const& q) {
  if (!tree.contains(q.symbol)) throw Error(ErrorCode::unknown_symbol, "symbol " + std::to_string(q.symbol));
  if (q.position > tree.size()) {
    throw Error(ErrorCode::index_out_of_range, "rank position " + std::to_string(q.position));
  }
}

void validate(WaveletTree const& tree, SelectQuery const& q) {
  if (!tree.contains(q.symbol)) throw Error(ErrorCode::unknown_symbol, "symbol " + std::to_string(q.symbol));
  if (q.ordinal == 0 || q.ordinal > tree.occurrences(q.symbol)) {
    throw Error(ErrorCode::ordinal_out_of_range, "select ordinal " + std::to_string(q.ordinal));
  }
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Symbol answer(WaveletTree const& tree, AccessQuery const& q) { return tree.access(q.position); }
std::uint64_t answer(WaveletTree const& tree, RankQuery const& q) { return tree.rank(q.symbol, q.position); }
std::uint64_t answer(WaveletTree const& tree, SelectQuery const& q) { return tree.select(q.symbol, q.ordinal); }

// Two staging slots. A stager thread fills slot j % 2 with chunk j (the
// copy plus validation) once the consumer has released it;
// the consumer processes chunk j while chunk j + 1 is being staged.
template <typename Query, typename Result>
std::vector<Result> run_pipeline(WaveletTree const& tree, std::span<Query const> queries,
                                 BatchOptions const& options, BatchStats* stats) {
  std::size_t const n = queries.size();
  std::vector<Result> results(n);
  if (stats) *stats = BatchStats{};
  if (n == 0) return results;

  std::size_t const chunk = options.chunk_size == 0 ? n : std::min(options.chunk_size, n);
  std::size_t const num_chunks = (n + chunk - 1) / chunk;
  WorkerPool pool(options.workers);

  StagingCounter counter;
  using Buffer = std::vector<Query, CountingAllocator<Query>>;
  Buffer slots[2] = {Buffer(CountingAllocator<Query>(&counter)), Buffer(CountingAllocator<Query>(&counter))};
  std::counting_semaphore<2> free_slot[2] = {std::counting_semaphore<2>(1), std::counting_semaphore<2>(1)};
  std::counting_semaphore<2> ready[2] = {std::counting_semaphore<2>(0), std::counting_semaphore<2>(0)};
  std::atomic<bool> cancelled{false};
  std::optional<BatchError> stage_error;  // written by the stager before it releases `ready`
  double stage_ms = 0;                    // read after join
  double process_ms = 0;

  std::thread stager([&] {
    for (std::size_t j = 0; j < num_chunks; ++j) {
      auto& slot = slots[j % 2];
      free_slot[j % 2].acquire();
      if (cancelled.load()) return;
      auto const t0 = Clock::now();
      std::size_t const begin = j * chunk;
      std::size_t const end = std::min(begin + chunk, n);
      if (slot.capacity() == 0) slot.reserve(chunk);
      slot.assign(queries.begin() + static_cast<std::ptrdiff_t>(begin),
                  queries.begin() + static_cast<std::ptrdiff_t>(end));
      for (std::size_t q = begin; q < end; ++q) {
        try {
          validate(tree, queries[q]);
        } catch (Error const& e) {
          stage_error.emplace(q, e);
          stage_ms += ms_since(t0);
          ready[j % 2].release();
          return;
        }
      }
      stage_ms += ms_since(t0);
      ready[j % 2].release();
    }
  });

  std::exception_ptr failure;
  for (std::size_t j = 0; j < num_chunks; ++j) {
    ready[j % 2].acquire();
    if (stage_error) break;
    auto const& slot = slots[j % 2];
    std::size_t const base = j * chunk;
    auto const t0 = Clock::now();
    try {
      pool.parallel_for(slot.size(), 256, [&](std::size_t first, std::size_t last) {
        for (std::size_t q = first; q < last; ++q) results[base + q] = answer(tree, slot[q]);
      });
    } catch (...) {
      failure = std::current_exception();
      break;
    }
    process_ms += ms_since(t0);
    free_slot[j % 2].release();
  }
  cancelled.store(true);
  // Unblock a stager that waits for a slot the consumer will never free.
  if (failure || stage_error) {
    for (auto& s : free_slot) s.release();
  }
  stager.join();

  if (stats) {
    stats->chunks = num_chunks;
    stats->peak_staged_records = counter.peak.load();
    stats->stage_ms = stage_ms;
    stats->process_ms = process_ms;
  }
  if (stage_error) throw *stage_error;
  if (failure) std::rethrow_exception(failure);
  return results;
}

template <typename Query>
SymbolSorted<Query> sort_by_symbol(std::span<Query const> queries) {
  SymbolSorted<Query> out;
  out.order.resize(queries.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return queries[a].symbol < queries[b].symbol; });
  out.queries.reserve(queries.size());
  for (auto j : out.order) out.queries.push_back(queries[j]);
  return out;
}

}  // namespace

std::vector<Symbol> access_batch(WaveletTree const& tree, std::span<AccessQuery const> queries,
                                 BatchOptions const& options, BatchStats* stats) {
  return run_pipeline<AccessQuery, Symbol>(tree, queries, options, stats);
}

std::vector<std::uint64_t> rank_batch(WaveletTree const& tree, std::span<RankQuery const> queries,
                                      BatchOptions const& options, BatchStats* stats) {
  return run_pipeline<RankQuery, std::uint64_t>(tree, queries, options, stats);
}

std::vector<std::uint64_t> select_batch(WaveletTree const& tree, std::span<SelectQuery const> queries,
                                        BatchOptions const& options, BatchStats* stats) {
  return run_pipeline<SelectQuery, std::uint64_t>(tree, queries, options, stats);
}

std::vector<std::uint64_t> run_batch(WaveletTree const& tree, QueryBatch const& batch,
                                     BatchOptions const& options, BatchStats* stats) {
  return std::visit(
      [&](auto const& queries) -> std::vector<std::uint64_t> {
        using Q = typename std::decay_t<decltype(queries)>::value_type;
        if constexpr (std::is_same_v<Q, AccessQuery>) {
          auto symbols = access_batch(tree, queries, options, stats);
          return {symbols.begin(), symbols.end()};
        } else if constexpr (std::is_same_v<Q, RankQuery>) {
          return rank_batch(tree, queries, options, stats);
        } else {
          return select_batch(tree, queries, options, stats);
        }
      },
      batch.queries);
}

SymbolSorted<RankQuery> sort_queries_by_symbol(std::span<RankQuery const> queries) {
  return sort_by_symbol(queries);
}

SymbolSorted<SelectQuery> sort_queries_by_symbol(std::span<SelectQuery const> queries) {
  return sort_by_symbol(queries);
}

}  // namespace wavelet
