#pragma once

#include <bit>
#include <cassert>
#include <cstdint>

namespace wavelet {

using Word = std::uint64_t;
inline constexpr unsigned kWordBits = 64;

/// Keeps the `count` least significant bits of `word`.
constexpr Word partial_word(Word word, unsigned count) noexcept {
  assert(count <= kWordBits);
  if (count >= kWordBits) return word;
  return word & ((Word{1} << count) - 1);
}

constexpr unsigned popcount(Word word) noexcept {
  return static_cast<unsigned>(std::popcount(word));
}

/// Position (LSB-first, 0-based) of the k-th set bit, k in [1, popcount(w)].
/// Binary search on popcounts of halves: lower half first, six halvings.
constexpr unsigned select_in_word(Word word, unsigned k) noexcept {
  assert(k >= 1 && k <= popcount(word));
  unsigned pos = 0;
  for (unsigned width = kWordBits / 2; width > 0; width /= 2) {
    Word const low = word & ((Word{1} << width) - 1);
    unsigned const ones = popcount(low);
    if (k > ones) {
      k -= ones;
      pos += width;
      word >>= width;
    } else {
      word = low;
    }
  }
  return pos;
}

constexpr bool is_pow_two(std::uint64_t x) noexcept { return std::has_single_bit(x); }

/// Largest power of two strictly below x; 1 for x <= 2.
constexpr std::uint64_t prev_pow_two(std::uint64_t x) noexcept {
  if (x <= 2) return 1;
  return std::bit_floor(x - 1);
}

/// ceil(lg x), with ceil_log2(1) == 0.
constexpr unsigned ceil_log2(std::uint64_t x) noexcept {
  if (x <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(x - 1));
}

}  // namespace wavelet
