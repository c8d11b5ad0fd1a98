#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wavelet/bitvec.hpp"

namespace wavelet::testing {

/// Bits with each position set with probability `fill`.
inline std::vector<bool> random_bits(std::size_t n, double fill, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(fill);
  std::vector<bool> bits(n);
  for (std::size_t j = 0; j < n; ++j) bits[j] = coin(rng);
  return bits;
}

/// 99% of the ones packed into the last `tail_percent` percent of the array,
/// the remaining 1% spread over the front.
inline std::vector<bool> adversarial_bits(std::size_t n, double fill, double tail_percent, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<bool> bits(n, false);
  auto const ones = static_cast<std::size_t>(static_cast<double>(n) * fill);
  auto const tail = std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(n) * tail_percent / 100.0));
  std::size_t const head = n - tail;
  std::size_t const tail_ones = std::min(tail, static_cast<std::size_t>(static_cast<double>(ones) * 0.99));
  std::size_t const head_ones = std::min(head, ones - tail_ones);
  auto scatter = [&](std::size_t begin, std::size_t len, std::size_t count) {
    // Partial Fisher-Yates over [begin, begin + len).
    std::vector<std::size_t> idx(len);
    for (std::size_t j = 0; j < len; ++j) idx[j] = begin + j;
    for (std::size_t j = 0; j < count; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, len - 1);
      std::swap(idx[j], idx[pick(rng)]);
      bits[idx[j]] = true;
    }
  };
  scatter(0, head, head_ones);
  scatter(head, tail, tail_ones);
  return bits;
}

inline BitArray to_bit_array(std::vector<bool> const& bits) {
  std::uint64_t const len = bits.size();
  BitArray ba(std::span<std::uint64_t const>(&len, 1));
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j]) ba.set_bit(j, true);
  }
  return ba;
}

inline std::vector<bool> from_string(char const* s) {
  std::vector<bool> bits;
  for (; *s; ++s) bits.push_back(*s == '1');
  return bits;
}

template <typename T>
std::vector<T> random_text(std::size_t n, std::uint64_t sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, sigma - 1);
  std::vector<T> text(n);
  for (auto& s : text) s = static_cast<T>(pick(rng));
  return text;
}

}  // namespace wavelet::testing
