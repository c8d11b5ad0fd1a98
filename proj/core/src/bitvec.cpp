#include "wavelet/bitvec.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "wavelet/error.hpp"

namespace wavelet {

namespace {

std::vector<std::uint64_t> aligned_offsets(std::span<std::uint64_t const> lengths,
                                           std::uint64_t& total_bits) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  // Cap so the word count stays addressable as a std::vector<Word>.
  std::uint64_t const limit =
      std::min<std::uint64_t>(kMax - kRegionAlignBits,
                              std::uint64_t{std::vector<Word>().max_size()} * kWordBits);
  std::vector<std::uint64_t> offsets;
  offsets.reserve(lengths.size());
  std::uint64_t cursor = 0;
  for (auto len : lengths) {
    offsets.push_back(cursor);
    if (len > limit - cursor) {
      throw Error(ErrorCode::construction, "bit array size overflows");
    }
    std::uint64_t const end = cursor + len;
    cursor = (end + kRegionAlignBits - 1) / kRegionAlignBits * kRegionAlignBits;
  }
  total_bits = cursor;
  return offsets;
}

}  // namespace

BitArray::BitArray(std::span<std::uint64_t const> region_bit_lengths)
    : lengths_(region_bit_lengths.begin(), region_bit_lengths.end()) {
  std::uint64_t total = 0;
  offsets_ = aligned_offsets(lengths_, total);
  words_.assign(static_cast<std::size_t>(total / kWordBits), 0);
}

BitArray BitArray::from_parts(std::vector<std::uint64_t> region_bit_lengths,
                              std::vector<Word> words) {
  BitArray ba;
  std::uint64_t total = 0;
  ba.offsets_ = aligned_offsets(region_bit_lengths, total);
  if (words.size() != total / kWordBits) {
    throw Error(ErrorCode::corrupt, "bit array word count does not match region sizes");
  }
  ba.lengths_ = std::move(region_bit_lengths);
  ba.words_ = std::move(words);
  for (std::size_t r = 0; r < ba.lengths_.size(); ++r) {
    std::uint64_t const end = ba.offsets_[r] + ba.lengths_[r];
    std::uint64_t const padded_end = (end + kRegionAlignBits - 1) / kRegionAlignBits * kRegionAlignBits;
    for (std::uint64_t w = end / kWordBits; w < padded_end / kWordBits; ++w) {
      Word mask = ~Word{0};
      if (w == end / kWordBits) mask = ~partial_word(~Word{0}, end % kWordBits);
      if (ba.words_[w] & mask) {
        throw Error(ErrorCode::corrupt, "nonzero padding bits in region " + std::to_string(r));
      }
    }
  }
  return ba;
}

std::uint64_t BitArray::num_bits() const noexcept {
  std::uint64_t total = 0;
  for (auto len : lengths_) total += len;
  return total;
}

BitRegion BitArray::region(std::size_t r) const {
  if (r >= lengths_.size()) {
    throw Error(ErrorCode::index_out_of_range, "region " + std::to_string(r));
  }
  auto const first = static_cast<std::size_t>(offsets_[r] / kWordBits);
  auto const count = static_cast<std::size_t>(words_for_bits(lengths_[r]));
  return BitRegion{std::span<Word const>(words_).subspan(first, count), lengths_[r]};
}

std::span<Word> BitArray::region_words(std::size_t r) {
  if (r >= lengths_.size()) {
    throw Error(ErrorCode::index_out_of_range, "region " + std::to_string(r));
  }
  auto const first = static_cast<std::size_t>(offsets_[r] / kWordBits);
  auto const count = static_cast<std::size_t>(words_for_bits(lengths_[r]));
  return std::span<Word>(words_).subspan(first, count);
}

void BitArray::check(std::size_t r, std::uint64_t j) const {
  if (r >= lengths_.size() || j >= lengths_[r]) {
    throw Error(ErrorCode::index_out_of_range,
                "bit " + std::to_string(j) + " of region " + std::to_string(r));
  }
}

bool BitArray::get_bit(std::size_t r, std::uint64_t j) const {
  check(r, j);
  std::uint64_t const bit = offsets_[r] + j;
  return (words_[bit / kWordBits] >> (bit % kWordBits)) & 1U;
}

void BitArray::set_bit(std::size_t r, std::uint64_t j, bool value) {
  check(r, j);
  std::uint64_t const bit = offsets_[r] + j;
  Word const mask = Word{1} << (bit % kWordBits);
  if (value) {
    words_[bit / kWordBits] |= mask;
  } else {
    words_[bit / kWordBits] &= ~mask;
  }
}

Word BitArray::word_at_bit(std::size_t r, std::uint64_t j) const {
  check(r, j);
  return words_[(offsets_[r] + j) / kWordBits];
}

}  // namespace wavelet
