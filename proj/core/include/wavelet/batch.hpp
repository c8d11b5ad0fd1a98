#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "wavelet/error.hpp"
#include "wavelet/wavelet_tree.hpp"

namespace wavelet {

enum class QueryKind : std::uint8_t { access, rank, select };

struct AccessQuery {
  std::uint64_t position = 0;
  friend bool operator==(AccessQuery const&, AccessQuery const&) = default;
};
struct RankQuery {
  Symbol symbol = 0;
  std::uint64_t position = 0;
  friend bool operator==(RankQuery const&, RankQuery const&) = default;
};
struct SelectQuery {
  Symbol symbol = 0;
  std::uint64_t ordinal = 0;
  friend bool operator==(SelectQuery const&, SelectQuery const&) = default;
};

/// A kind-homogeneous query array.
struct QueryBatch {
  std::variant<std::vector<AccessQuery>, std::vector<RankQuery>, std::vector<SelectQuery>> queries;

  QueryKind kind() const noexcept { return static_cast<QueryKind>(queries.index()); }
  std::size_t size() const noexcept;
};

inline constexpr std::size_t kDefaultChunkSize = 65536;

struct BatchOptions {
  std::size_t workers = 1;                     // 0 = hardware concurrency
  std::size_t chunk_size = kDefaultChunkSize;  // 0 = one chunk for the whole batch
};

/// Observations from one batch run.
struct BatchStats {
  std::size_t chunks = 0;
  std::size_t peak_staged_records = 0;  // high-water mark of the staging buffers
  double stage_ms = 0;    // copy + validation, summed over chunks
  double process_ms = 0;  // query answering, summed over chunks
};

/// Raised when a query is invalid. Carries the query's index; code() is the
/// underlying failure.
class BatchError : public Error {
 public:
  BatchError(std::size_t index, Error const& cause);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// Queries are staged chunk by chunk into two reusable buffers while the
// previous chunk is processed, so staging never runs more than one chunk
// ahead. Results come back in input order. The first invalid query (lowest
// index) aborts the whole batch with a BatchError.

std::vector<Symbol> access_batch(WaveletTree const& tree, std::span<AccessQuery const> queries,
                                 BatchOptions const& options = {}, BatchStats* stats = nullptr);
std::vector<std::uint64_t> rank_batch(WaveletTree const& tree, std::span<RankQuery const> queries,
                                      BatchOptions const& options = {}, BatchStats* stats = nullptr);
std::vector<std::uint64_t> select_batch(WaveletTree const& tree, std::span<SelectQuery const> queries,
                                        BatchOptions const& options = {}, BatchStats* stats = nullptr);

/// Dispatches on the batch kind; access results are widened to 64 bits.
std::vector<std::uint64_t> run_batch(WaveletTree const& tree, QueryBatch const& batch,
                                     BatchOptions const& options = {}, BatchStats* stats = nullptr);

template <typename Query>
struct SymbolSorted {
  std::vector<Query> queries;
  std::vector<std::size_t> order;  // order[j] = input index of queries[j]
};

/// Stable sort by symbol, so queries on the same symbol run back to back.
SymbolSorted<RankQuery> sort_queries_by_symbol(std::span<RankQuery const> queries);
SymbolSorted<SelectQuery> sort_queries_by_symbol(std::span<SelectQuery const> queries);

/// Puts results computed on sorted queries back into input order.
template <typename T>
std::vector<T> restore_order(std::span<T const> sorted_results, std::span<std::size_t const> order) {
  std::vector<T> out(sorted_results.size());
  for (std::size_t j = 0; j < order.size(); ++j) out[order[j]] = sorted_results[j];
  return out;
}

}  // namespace wavelet
