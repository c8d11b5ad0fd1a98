#pragma once

// Brute-force reference implementations of the library's queries. They
// follow the definitions directly and share no code with the indexed paths;
// tests use them as ground truth. Built only with WAVELET_BUILD_ORACLE.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wavelet/alphabet.hpp"

namespace wavelet::oracle {

// Bits given as one bool per position; linear scans.
std::uint64_t naive_rank1_bits(std::vector<bool> const& bits, std::uint64_t i);
std::uint64_t naive_rank0_bits(std::vector<bool> const& bits, std::uint64_t i);
std::uint64_t naive_select1_bits(std::vector<bool> const& bits, std::uint64_t k);
std::uint64_t naive_select0_bits(std::vector<bool> const& bits, std::uint64_t k);

/// Position of the k-th set bit of a word by testing bits one at a time.
unsigned naive_select_in_word(std::uint64_t word, unsigned k);

template <typename T>
T naive_access(std::span<T const> text, std::uint64_t i);
template <typename T>
std::uint64_t naive_rank(std::span<T const> text, T c, std::uint64_t i);
template <typename T>
std::uint64_t naive_select(std::span<T const> text, T c, std::uint64_t k);

struct Interval {
  std::uint32_t start;
  std::uint32_t end;  // exclusive
  friend bool operator==(Interval const&, Interval const&) = default;
};

/// Node intervals per level obtained by recursively splitting [a, b) at
/// a + prev_pow_two(b - a); leaves (width 1) are included on the level where
/// they appear.
std::vector<std::vector<Interval>> naive_tree_shape(std::uint64_t sigma);

/// Root-to-leaf path of every symbol in the shape above (0 = left), as a
/// string of '0'/'1'.
std::vector<std::string> naive_paths(std::uint64_t sigma);

/// Walks `code` down the naive shape; returns the leaf symbol, or -1 if the
/// code does not end exactly at a leaf.
std::int64_t naive_decode(std::uint64_t sigma, Code code, unsigned num_bits);

/// Recursive pointer-free builder: level bits of the level-wise tree for a
/// minimal-alphabet text, computed node by node.
std::vector<std::vector<bool>> naive_level_bits(std::span<std::uint32_t const> text, std::uint64_t sigma);

}  // namespace wavelet::oracle
