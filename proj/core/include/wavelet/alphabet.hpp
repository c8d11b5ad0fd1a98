#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace wavelet {

class WorkerPool;

/// Input symbols are at most 16 bits wide.
using Symbol = std::uint16_t;

/// Order-preserving map between the symbols that occur in a text and the
/// dense ids [0, sigma).
class AlphabetMap {
 public:
  AlphabetMap() = default;
  /// Accepts any symbol list; it is sorted and deduplicated.
  explicit AlphabetMap(std::vector<Symbol> symbols);

  std::uint64_t sigma() const noexcept { return symbols_.size(); }
  std::vector<Symbol> const& symbols() const noexcept { return symbols_; }
  Symbol to_symbol(std::uint32_t id) const { return symbols_.at(id); }
  std::optional<std::uint32_t> to_id(Symbol symbol) const noexcept {
    if (symbol >= lookup_.size() || lookup_[symbol] < 0) return std::nullopt;
    auto const id = lookup_[symbol];
    return static_cast<std::uint32_t>(id);
  }

  friend bool operator==(AlphabetMap const& a, AlphabetMap const& b) noexcept {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::vector<Symbol> symbols_;
  std::vector<std::int32_t> lookup_;  // indexed by symbol, -1 if absent
};

/// Maps `text` onto its minimal alphabet. Throws Error(construction) on empty
/// text.
std::pair<std::vector<std::uint32_t>, AlphabetMap> minimal_alphabet(std::span<Symbol const> text);

/// Maps `text` through a caller-provided alphabet. Throws
/// Error(unknown_symbol) for a symbol outside it.
std::vector<std::uint32_t> map_to_alphabet(std::span<Symbol const> text, AlphabetMap const& alphabet,
                                           WorkerPool& pool);

/// A tree path: `len` bits, left-aligned in a field of ceil(lg sigma) bits
/// and read MSB-first. Bits below the path are zero.
struct Code {
  std::uint32_t value = 0;
  std::uint8_t len = 0;

  friend bool operator==(Code const&, Code const&) = default;
};

/// Paths of the reduced tree shape. Symbols below prev_pow_two(sigma) keep
/// their plain binary of ceil(lg sigma) bits and are not stored; the table
/// holds the symbols from prev_pow_two(sigma) up. Empty for powers of two.
class CodeTable {
 public:
  CodeTable() = default;
  CodeTable(std::uint64_t sigma, std::vector<Code> codes);

  std::uint64_t sigma() const noexcept { return sigma_; }
  unsigned num_bits() const noexcept { return num_bits_; }
  /// First symbol that has a stored entry.
  std::uint64_t first_coded() const noexcept { return first_coded_; }
  std::vector<Code> const& stored() const noexcept { return codes_; }
  bool empty() const noexcept { return codes_.empty(); }

  Code code(std::uint32_t symbol) const noexcept {
    if (symbol >= first_coded_ && !codes_.empty()) return codes_[symbol - first_coded_];
    return Code{symbol, static_cast<std::uint8_t>(num_bits_)};
  }

  friend bool operator==(CodeTable const&, CodeTable const&) = default;

 private:
  std::uint64_t sigma_ = 0;
  unsigned num_bits_ = 0;
  std::uint64_t first_coded_ = 0;
  std::vector<Code> codes_;
};

/// Builds the code table for an alphabet of `sigma` symbols.
/// Throws Error(construction) if sigma == 0.
CodeTable create_codes(std::uint64_t sigma);

struct Histogram {
  std::vector<std::uint64_t> counts;

  /// Exclusive prefix sum with sigma + 1 entries; the last one is n.
  std::vector<std::uint64_t> cumulative() const;
};

struct EncodedText {
  std::vector<std::uint32_t> words;
  Histogram histogram;
};

/// Replaces each minimal symbol by its code word and counts symbols.
/// Throws Error(unknown_symbol) for a symbol >= sigma.
EncodedText encode_and_histogram(std::span<std::uint32_t const> text, CodeTable const& codes,
                                 WorkerPool& pool);
EncodedText encode_and_histogram(std::span<std::uint32_t const> text, CodeTable const& codes);

/// Bits stored at each level: level l holds every symbol whose path is
/// longer than l.
std::vector<std::uint64_t> level_sizes(CodeTable const& codes, Histogram const& hist);

}  // namespace wavelet
