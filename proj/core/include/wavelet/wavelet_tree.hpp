#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wavelet/alphabet.hpp"
#include "wavelet/bitvec.hpp"
#include "wavelet/rank_select.hpp"

namespace wavelet {

class WorkerPool;

struct BuildOptions {
  std::size_t workers = 1;  // 0 = hardware concurrency
  RankSelectParams rank_select = RankSelectParams::for_wavelet_tree();
  unsigned symbol_width = 0;  // 8 or 16; 0 infers from the largest symbol
};

// Construction steps, exposed for testing and reuse.

/// Writes bit (num_bits - 1 - level) of encoded[0, region.size()) into `region`.
void fill_level(std::span<std::uint32_t const> encoded, unsigned num_bits, unsigned level,
                std::span<Word> region, std::uint64_t count, WorkerPool& pool);

/// Stable sort of `encoded` by its top `level` bits (of `num_bits`),
/// using `scratch` (same size) as the second buffer. The result ends up in
/// `encoded`.
void stable_sort_by_prefix(std::span<std::uint32_t> encoded, std::span<std::uint32_t> scratch,
                           unsigned num_bits, unsigned level, WorkerPool& pool);

/// Level-wise wavelet tree over a text of 8- or 16-bit symbols. All levels
/// live in one BitArray; node boundaries come from the cumulative histogram
/// of the minimal alphabet and the tree shape from prev_pow_two splits, with
/// the codes of CodeTable giving every internal node two children.
///
/// Immutable after construction; concurrent queries are safe.
class WaveletTree {
 public:
  WaveletTree() = default;

  /// Builds over the minimal alphabet of `text`.
  /// Throws Error(construction) for an empty text.
  static WaveletTree build(std::span<Symbol const> text, BuildOptions const& options = {});
  /// Builds over a caller-given alphabet, which may contain symbols that do
  /// not occur. Throws Error(unknown_symbol) if the text leaves it.
  static WaveletTree build(std::span<Symbol const> text, AlphabetMap alphabet,
                           BuildOptions const& options = {});

  /// Symbol at position i. Throws Error(index_out_of_range) if i >= size().
  Symbol access(std::uint64_t i) const;
  /// Occurrences of c in [0, i).
  std::uint64_t rank(Symbol c, std::uint64_t i) const;
  /// Position of the k-th occurrence of c, k >= 1.
  std::uint64_t select(Symbol c, std::uint64_t k) const;

  std::uint64_t occurrences(Symbol c) const;
  bool contains(Symbol c) const noexcept { return alphabet_.to_id(c).has_value(); }

  // Same queries on minimal ids; no alphabet lookup.
  std::uint32_t access_id(std::uint64_t i) const;
  std::uint64_t rank_id(std::uint32_t c, std::uint64_t i) const;
  std::uint64_t select_id(std::uint32_t c, std::uint64_t k) const;

  /// Access without the two-symbol shortcut and without the precomputed
  /// node ranks: descends to the leaf with two binary ranks per level.
  std::uint32_t access_full_depth(std::uint64_t i) const;

  /// First minimal symbol of the level-l node that contains c.
  /// Requires l < code length of c.
  std::uint32_t node_start(std::uint32_t c, unsigned level) const;

  /// Precomputed rank0 at the start of the level-l node beginning at
  /// `start_symbol`. Throws Error(index_out_of_range) if there is no such node.
  std::uint64_t node_rank0(unsigned level, std::uint32_t start_symbol) const;
  /// All node starts recorded for a level, ascending.
  std::vector<std::uint32_t> node_starts(unsigned level) const;

  /// Binary queries on one level's bit array.
  std::uint64_t level_rank0(unsigned level, std::uint64_t i) const;
  bool level_bit(unsigned level, std::uint64_t j) const;

  std::uint64_t size() const noexcept { return n_; }
  std::uint64_t sigma() const noexcept { return alphabet_.sigma(); }
  unsigned num_levels() const noexcept { return static_cast<unsigned>(level_sizes_.size()); }
  unsigned symbol_width() const noexcept { return symbol_width_; }
  AlphabetMap const& alphabet() const noexcept { return alphabet_; }
  CodeTable const& codes() const noexcept { return codes_; }
  std::vector<std::uint64_t> const& level_sizes() const noexcept { return level_sizes_; }
  std::vector<std::uint64_t> const& cumulative_histogram() const noexcept { return cum_hist_; }
  BitArray const& levels() const noexcept { return levels_; }
  RankSelectIndex const& level_index(unsigned level) const { return rs_.at(level); }

  /// Sum of stored level bits (padding excluded).
  std::uint64_t stored_bits() const noexcept;

  // Index file I/O. The format is little-endian throughout and versioned.
  void save(std::ostream& out) const;
  std::string to_bytes() const;
  static WaveletTree load(std::istream& in);
  static WaveletTree from_bytes(std::string_view bytes);
  void save_file(std::string const& path) const;
  static WaveletTree load_file(std::string const& path);

  static constexpr char kMagic[8] = {'W', 'T', 'I', 'D', 'X', '0', '0', '1'};
  static constexpr std::uint32_t kVersion = 1;

 private:
  friend class TreeFormat;

  static WaveletTree build_minimal(std::vector<std::uint32_t> ids, AlphabetMap alphabet,
                                   BuildOptions const& options);
  void compute_node_ranks();
  std::uint32_t id_of(Symbol c) const;
  BitRegion region(unsigned level) const { return levels_.region(level); }
  std::uint64_t cached_rank0(unsigned level, std::uint32_t start_symbol) const {
    return node_rank0_[level].find(start_symbol)->second;
  }

  std::uint64_t n_ = 0;
  unsigned symbol_width_ = 8;
  AlphabetMap alphabet_;
  CodeTable codes_;
  std::vector<std::uint64_t> level_sizes_;
  std::vector<std::uint64_t> cum_hist_;
  BitArray levels_;
  std::vector<RankSelectIndex> rs_;
  std::vector<std::unordered_map<std::uint32_t, std::uint64_t>> node_rank0_;
};

}  // namespace wavelet
