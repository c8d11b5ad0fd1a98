#include "wavelet/wavelet_tree.hpp"

#include <algorithm>
#include <string>
#include <tuple>

#include "wavelet/bits.hpp"
#include "wavelet/error.hpp"
#include "wavelet/worker_pool.hpp"

namespace wavelet {

void fill_level(std::span<std::uint32_t const> encoded, unsigned num_bits, unsigned level,
                std::span<Word> region, std::uint64_t count, WorkerPool& pool) {
  unsigned const shift = num_bits - 1 - level;
  std::uint64_t const num_words = words_for_bits(count);
  pool.parallel_for(num_words, 1024, [&](std::size_t first, std::size_t last) {
    for (std::size_t w = first; w < last; ++w) {
      std::uint64_t const begin = w * kWordBits;
      std::uint64_t const end = std::min<std::uint64_t>(begin + kWordBits, count);
      Word word = 0;
      for (std::uint64_t j = begin; j < end; ++j) {
        word |= Word{(encoded[j] >> shift) & 1U} << (j - begin);
      }
      region[w] = word;
    }
  });
}

void stable_sort_by_prefix(std::span<std::uint32_t> encoded, std::span<std::uint32_t> scratch,
                           unsigned num_bits, unsigned level, WorkerPool& pool) {
  if (level == 0 || encoded.empty()) return;
  unsigned const shift = num_bits - level;
  std::size_t const buckets = std::size_t{1} << level;
  std::size_t const n = encoded.size();

  // One counting-sort pass on the top `level` bits: per-part histograms,
  // global offsets in (bucket, part) order, then a stable scatter.
  std::size_t const grain = std::max<std::size_t>(1 << 16, buckets * 4);
  std::vector<std::vector<std::uint64_t>> offsets(pool.size());
  std::size_t const parts = pool.parallel_for_parts(n, grain, [&](std::size_t p, std::size_t first, std::size_t last) {
    auto& counts = offsets[p];
    counts.assign(buckets, 0);
    for (std::size_t j = first; j < last; ++j) ++counts[encoded[j] >> shift];
  });
  std::uint64_t running = 0;
  for (std::size_t b = 0; b < buckets; ++b) {
    for (std::size_t p = 0; p < parts; ++p) {
      std::uint64_t const c = offsets[p][b];
      offsets[p][b] = running;
      running += c;
    }
  }
  pool.parallel_for_parts(n, grain, [&](std::size_t p, std::size_t first, std::size_t last) {
    auto& next = offsets[p];
    for (std::size_t j = first; j < last; ++j) {
      std::uint32_t const w = encoded[j];
      scratch[next[w >> shift]++] = w;
    }
  });
  std::copy(scratch.begin(), scratch.end(), encoded.begin());
}

namespace {

struct NodeInterval {
  unsigned level;
  std::uint32_t start;
  std::uint32_t end;
};

// Every node of width >= 2 (i.e. with bits stored), top-down.
std::vector<NodeInterval> internal_nodes(std::uint64_t sigma) {
  std::vector<NodeInterval> out;
  std::vector<NodeInterval> stack;
  if (sigma >= 2) stack.push_back({0, 0, static_cast<std::uint32_t>(sigma)});
  while (!stack.empty()) {
    auto node = stack.back();
    stack.pop_back();
    out.push_back(node);
    auto const split = static_cast<std::uint32_t>(node.start + prev_pow_two(node.end - node.start));
    if (node.end - split >= 2) stack.push_back({node.level + 1, split, node.end});
    if (split - node.start >= 2) stack.push_back({node.level + 1, node.start, split});
  }
  return out;
}

unsigned infer_width(AlphabetMap const& alphabet, unsigned requested) {
  Symbol const max_symbol = alphabet.symbols().empty() ? 0 : alphabet.symbols().back();
  if (requested == 0) return max_symbol > 0xFF ? 16 : 8;
  if (requested != 8 && requested != 16) {
    throw Error(ErrorCode::construction, "symbol width must be 8 or 16");
  }
  if (requested == 8 && max_symbol > 0xFF) {
    throw Error(ErrorCode::unknown_symbol, "symbol " + std::to_string(max_symbol) + " does not fit 8 bits");
  }
  return requested;
}

}  // namespace

WaveletTree WaveletTree::build(std::span<Symbol const> text, BuildOptions const& options) {
  auto [ids, alphabet] = minimal_alphabet(text);
  return build_minimal(std::move(ids), std::move(alphabet), options);
}

WaveletTree WaveletTree::build(std::span<Symbol const> text, AlphabetMap alphabet,
                               BuildOptions const& options) {
  if (alphabet.sigma() == 0) throw Error(ErrorCode::construction, "empty alphabet");
  WorkerPool pool(options.workers);
  auto ids = map_to_alphabet(text, alphabet, pool);
  return build_minimal(std::move(ids), std::move(alphabet), options);
}

WaveletTree WaveletTree::build_minimal(std::vector<std::uint32_t> ids, AlphabetMap alphabet,
                                       BuildOptions const& options) {
  options.rank_select.validate();
  WorkerPool pool(options.workers);

  WaveletTree wt;
  wt.n_ = ids.size();
  wt.symbol_width_ = infer_width(alphabet, options.symbol_width);
  std::uint64_t const sigma = alphabet.sigma();
  wt.alphabet_ = std::move(alphabet);
  wt.codes_ = create_codes(sigma);

  auto encoded = encode_and_histogram(ids, wt.codes_, pool);
  ids = {};
  unsigned const num_levels = ceil_log2(sigma);
  wt.level_sizes_ = wavelet::level_sizes(wt.codes_, encoded.histogram);
  wt.cum_hist_ = encoded.histogram.cumulative();
  wt.levels_ = BitArray(wt.level_sizes_);

  auto& words = encoded.words;
  std::vector<std::uint32_t> scratch(num_levels > 1 ? words.size() : 0);
  for (unsigned l = 0; l < num_levels; ++l) {
    stable_sort_by_prefix(words, scratch, num_levels, l, pool);
    fill_level(words, num_levels, l, wt.levels_.region_words(l), wt.level_sizes_[l], pool);
  }

  wt.rs_.reserve(num_levels);
  for (unsigned l = 0; l < num_levels; ++l) {
    wt.rs_.push_back(RankSelectIndex::build(wt.region(l), options.rank_select, pool));
  }
  wt.compute_node_ranks();
  return wt;
}

void WaveletTree::compute_node_ranks() {
  node_rank0_.assign(num_levels(), {});
  for (auto const& node : internal_nodes(sigma())) {
    node_rank0_[node.level][node.start] = rs_[node.level].rank0(region(node.level), cum_hist_[node.start]);
  }
}

std::uint32_t WaveletTree::id_of(Symbol c) const {
  auto const id = alphabet_.to_id(c);
  if (!id) throw Error(ErrorCode::unknown_symbol, "symbol " + std::to_string(c) + " is not in the alphabet");
  return *id;
}

Symbol WaveletTree::access(std::uint64_t i) const { return alphabet_.to_symbol(access_id(i)); }

std::uint64_t WaveletTree::rank(Symbol c, std::uint64_t i) const { return rank_id(id_of(c), i); }

std::uint64_t WaveletTree::select(Symbol c, std::uint64_t k) const { return select_id(id_of(c), k); }

std::uint64_t WaveletTree::occurrences(Symbol c) const {
  auto const id = id_of(c);
  return cum_hist_[id + 1] - cum_hist_[id];
}

std::uint32_t WaveletTree::access_id(std::uint64_t i) const {
  if (i >= n_) {
    throw Error(ErrorCode::index_out_of_range, "access(" + std::to_string(i) + ") on length " + std::to_string(n_));
  }
  std::uint32_t start = 0;
  auto end = static_cast<std::uint32_t>(sigma());
  for (unsigned l = 0; l < num_levels(); ++l) {
    std::uint64_t const counts = cum_hist_[start];
    std::uint32_t const width = end - start;
    if (width <= 2) {
      return width > 1 && level_bit(l, counts + i) ? start + 1 : start;
    }
    std::uint64_t const zeros_before_node = cached_rank0(l, start);
    auto const [ones, bit] = rs_[l].rank1_with_bit(region(l), counts + i);
    std::uint64_t const zeros = counts + i - ones - zeros_before_node;
    auto const half = static_cast<std::uint32_t>(prev_pow_two(width));
    if (!bit) {
      i = zeros;
      end = start + half;
    } else {
      i -= zeros;
      start += half;
    }
  }
  // Only reachable for sigma == 1.
  return start;
}

std::uint32_t WaveletTree::access_full_depth(std::uint64_t i) const {
  if (i >= n_) {
    throw Error(ErrorCode::index_out_of_range, "access(" + std::to_string(i) + ") on length " + std::to_string(n_));
  }
  std::uint32_t start = 0;
  auto end = static_cast<std::uint32_t>(sigma());
  for (unsigned l = 0; end - start > 1; ++l) {
    std::uint64_t const counts = cum_hist_[start];
    auto const r = region(l);
    std::uint64_t const zeros = rs_[l].rank0(r, counts + i) - rs_[l].rank0(r, counts);
    auto const half = static_cast<std::uint32_t>(prev_pow_two(end - start));
    if (!r.get(counts + i)) {
      i = zeros;
      end = start + half;
    } else {
      i -= zeros;
      start += half;
    }
  }
  return start;
}

std::uint64_t WaveletTree::rank_id(std::uint32_t c, std::uint64_t i) const {
  if (c >= sigma()) throw Error(ErrorCode::unknown_symbol, "symbol id " + std::to_string(c));
  if (i > n_) {
    throw Error(ErrorCode::index_out_of_range, "rank position " + std::to_string(i) + " > " + std::to_string(n_));
  }
  std::uint32_t start = 0;
  auto end = static_cast<std::uint32_t>(sigma());
  std::uint64_t result = i;
  for (unsigned l = 0; l < num_levels(); ++l) {
    // A coded symbol reaches its leaf before the last level.
    if (end - start <= 1) break;
    std::uint64_t const counts = cum_hist_[start];
    std::uint64_t const zeros = rs_[l].rank0(region(l), counts + result) - cached_rank0(l, start);
    auto const split = static_cast<std::uint32_t>(start + prev_pow_two(end - start));
    if (c < split) {
      result = zeros;
      end = split;
    } else {
      result -= zeros;
      start = split;
    }
  }
  return result;
}

std::uint64_t WaveletTree::select_id(std::uint32_t c, std::uint64_t k) const {
  if (c >= sigma()) throw Error(ErrorCode::unknown_symbol, "symbol id " + std::to_string(c));
  std::uint64_t const occ = cum_hist_[c + 1] - cum_hist_[c];
  if (k == 0 || k > occ) {
    throw Error(ErrorCode::ordinal_out_of_range,
                "select(" + std::to_string(k) + ") with " + std::to_string(occ) + " occurrences");
  }
  Code const code = codes_.code(c);
  unsigned const num_bits = num_levels();
  std::uint32_t start = c;
  std::uint64_t result = k;
  for (unsigned l = code.len; l-- > 0;) {
    bool const right = (code.value >> (num_bits - 1 - l)) & 1U;
    if (right) start = node_start(c, l);
    std::uint64_t const counts = cum_hist_[start];
    std::uint64_t const zeros_before_node = cached_rank0(l, start);
    if (right) {
      result = rs_[l].select1(region(l), counts - zeros_before_node + result) + 1;
    } else {
      result = rs_[l].select0(region(l), zeros_before_node + result) + 1;
    }
    result -= counts;
  }
  return result - 1;
}

std::uint32_t WaveletTree::node_start(std::uint32_t c, unsigned level) const {
  std::uint64_t const sigma = this->sigma();
  unsigned const num_bits = num_levels();
  if (is_pow_two(sigma)) {
    std::uint32_t const width = std::uint32_t{1} << (num_bits - level);
    return c & ~(width - 1);
  }
  Code const code = codes_.code(c);
  std::uint32_t const spine = (std::uint32_t{1} << level) - 1;
  if ((code.value >> (num_bits - level)) == spine || level == 0) {
    std::uint64_t start = 0;
    for (unsigned i = 0; i < level; ++i) start += prev_pow_two(sigma - start);
    return static_cast<std::uint32_t>(start);
  }
  return c & ~((std::uint32_t{1} << (code.len - level)) - 1);
}

std::uint64_t WaveletTree::node_rank0(unsigned level, std::uint32_t start_symbol) const {
  if (level < node_rank0_.size()) {
    auto it = node_rank0_[level].find(start_symbol);
    if (it != node_rank0_[level].end()) return it->second;
  }
  throw Error(ErrorCode::index_out_of_range,
              "no node starting at " + std::to_string(start_symbol) + " on level " + std::to_string(level));
}

std::vector<std::uint32_t> WaveletTree::node_starts(unsigned level) const {
  std::vector<std::uint32_t> out;
  if (level >= node_rank0_.size()) return out;
  for (auto const& [start, rank] : node_rank0_[level]) out.push_back(start);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t WaveletTree::level_rank0(unsigned level, std::uint64_t i) const {
  return rs_.at(level).rank0(region(level), i);
}

bool WaveletTree::level_bit(unsigned level, std::uint64_t j) const { return levels_.get_bit(level, j); }

std::uint64_t WaveletTree::stored_bits() const noexcept { return levels_.num_bits(); }

}  // namespace wavelet
