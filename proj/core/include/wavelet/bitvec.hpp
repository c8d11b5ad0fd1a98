#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wavelet/bits.hpp"

namespace wavelet {

/// Alignment of every region start, in bits (one 128-byte cache line).
inline constexpr std::uint64_t kRegionAlignBits = 1024;

/// Read-only view of one bit region: the words holding it plus its length.
struct BitRegion {
  std::span<Word const> words;
  std::uint64_t num_bits = 0;

  bool get(std::uint64_t j) const noexcept {
    return (words[j / kWordBits] >> (j % kWordBits)) & 1U;
  }
};

/// Word-packed bit storage. Bit j of a region lives in word j/64 of that
/// region at intra-word position j%64, position 0 being the LSB. Several
/// regions (one per wavelet-tree level) share one allocation; each region
/// starts on a 1024-bit boundary and its padding bits stay zero.
class BitArray {
 public:
  BitArray() = default;

  /// Zero-initialised array with one region per entry of `region_bit_lengths`.
  /// Throws Error(construction) if the padded total overflows.
  explicit BitArray(std::span<std::uint64_t const> region_bit_lengths);

  /// Rebuilds an array from serialized words; validates sizes.
  static BitArray from_parts(std::vector<std::uint64_t> region_bit_lengths,
                             std::vector<Word> words);

  std::size_t num_regions() const noexcept { return lengths_.size(); }
  std::uint64_t region_offset(std::size_t region) const noexcept { return offsets_[region]; }
  std::uint64_t region_size(std::size_t region) const noexcept { return lengths_[region]; }
  std::span<std::uint64_t const> region_offsets() const noexcept { return offsets_; }
  std::span<std::uint64_t const> region_sizes() const noexcept { return lengths_; }

  /// Total valid bits over all regions (padding excluded).
  std::uint64_t num_bits() const noexcept;

  std::span<Word const> words() const noexcept { return words_; }

  BitRegion region(std::size_t r) const;
  /// Mutable words of region r; writers must keep padding bits zero.
  std::span<Word> region_words(std::size_t r);

  // Region-relative accessors, range checked (Error(index_out_of_range)).
  bool get_bit(std::size_t r, std::uint64_t j) const;
  void set_bit(std::size_t r, std::uint64_t j, bool value);
  Word word_at_bit(std::size_t r, std::uint64_t j) const;

  // Single-region shorthands.
  bool get_bit(std::uint64_t j) const { return get_bit(0, j); }
  void set_bit(std::uint64_t j, bool value) { set_bit(0, j, value); }
  Word word_at_bit(std::uint64_t j) const { return word_at_bit(0, j); }

  friend bool operator==(BitArray const&, BitArray const&) = default;

 private:
  void check(std::size_t r, std::uint64_t j) const;

  std::vector<Word> words_;
  std::vector<std::uint64_t> offsets_;  // bit offsets, multiples of kRegionAlignBits
  std::vector<std::uint64_t> lengths_;
};

/// Words needed to hold `bits` bits.
constexpr std::uint64_t words_for_bits(std::uint64_t bits) noexcept {
  return (bits + kWordBits - 1) / kWordBits;
}

}  // namespace wavelet
