#include "wavelet/alphabet.hpp"

#include <algorithm>
#include <string>

#include "wavelet/bits.hpp"
#include "wavelet/error.hpp"
#include "wavelet/worker_pool.hpp"

namespace wavelet {

AlphabetMap::AlphabetMap(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  std::sort(symbols_.begin(), symbols_.end());
  symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
  if (!symbols_.empty()) lookup_.assign(std::size_t{symbols_.back()} + 1, -1);
  for (std::size_t id = 0; id < symbols_.size(); ++id) {
    lookup_[symbols_[id]] = static_cast<std::int32_t>(id);
  }
}

std::pair<std::vector<std::uint32_t>, AlphabetMap> minimal_alphabet(std::span<Symbol const> text) {
  if (text.empty()) throw Error(ErrorCode::construction, "empty text");
  std::vector<bool> present(65536, false);
  for (auto s : text) present[s] = true;
  std::vector<Symbol> symbols;
  for (std::size_t s = 0; s < present.size(); ++s) {
    if (present[s]) symbols.push_back(static_cast<Symbol>(s));
  }
  AlphabetMap map(std::move(symbols));
  std::vector<std::uint32_t> mapped(text.size());
  std::transform(text.begin(), text.end(), mapped.begin(), [&](Symbol s) { return *map.to_id(s); });
  return {std::move(mapped), std::move(map)};
}

std::vector<std::uint32_t> map_to_alphabet(std::span<Symbol const> text, AlphabetMap const& alphabet,
                                           WorkerPool& pool) {
  if (text.empty()) throw Error(ErrorCode::construction, "empty text");
  std::vector<std::uint32_t> mapped(text.size());
  pool.parallel_for(text.size(), 1 << 16, [&](std::size_t first, std::size_t last) {
    for (std::size_t j = first; j < last; ++j) {
      auto const id = alphabet.to_id(text[j]);
      if (!id) {
        throw Error(ErrorCode::unknown_symbol, "symbol " + std::to_string(text[j]) + " at position " +
                                                   std::to_string(j) + " is not in the alphabet");
      }
      mapped[j] = *id;
    }
  });
  return mapped;
}

CodeTable::CodeTable(std::uint64_t sigma, std::vector<Code> codes)
    : sigma_(sigma),
      num_bits_(ceil_log2(sigma)),
      first_coded_(is_pow_two(sigma) ? sigma : prev_pow_two(sigma)),
      codes_(std::move(codes)) {}

CodeTable create_codes(std::uint64_t sigma) {
  if (sigma == 0) throw Error(ErrorCode::construction, "alphabet size must be positive");
  if (is_pow_two(sigma)) return CodeTable(sigma, {});

  std::uint64_t const first = prev_pow_two(sigma);
  unsigned const total_bits = ceil_log2(sigma);
  std::uint32_t const field_mask = (std::uint32_t{1} << total_bits) - 1;

  // Every entry starts as the symbol's plain binary; the loop rewrites the
  // ones whose subtree is cut short by a non-power-of-two width.
  std::vector<Code> codes(sigma - first);
  for (std::uint64_t s = first; s < sigma; ++s) {
    codes[s - first] = Code{static_cast<std::uint32_t>(s), static_cast<std::uint8_t>(total_bits)};
  }
  auto at = [&](std::uint64_t s) -> Code& { return codes[s - first]; };

  unsigned start_bit = 0;      // depth of the current right-spine node
  std::uint64_t start_i = 0;   // first symbol under that node
  unsigned code_len = total_bits;
  std::uint64_t num_codes = sigma;
  do {
    // Peel complete power-of-two left subtrees off the right spine.
    for (unsigned i = code_len - 1; i >= 1; --i) {
      std::uint64_t const pow_two = std::uint64_t{1} << i;
      if (num_codes <= pow_two) break;
      num_codes -= pow_two;
      start_i += pow_two;
      ++start_bit;
    }
    if (num_codes == 1) {
      code_len = 1;
      at(sigma - 1) = Code{((std::uint32_t{1} << start_bit) - 1) << (total_bits - start_bit),
                           static_cast<std::uint8_t>(start_bit)};
    } else {
      code_len = ceil_log2(num_codes);
      std::uint32_t const prefix_mask = ~((std::uint32_t{1} << (total_bits - start_bit)) - 1) & field_mask;
      for (std::uint64_t s = sigma - num_codes; s < sigma; ++s) {
        std::uint32_t local = static_cast<std::uint32_t>(s - start_i) << (total_bits - start_bit - code_len);
        local += prefix_mask & at(s).value;
        at(s) = Code{local, static_cast<std::uint8_t>(start_bit + code_len)};
      }
    }
  } while (code_len != 1);

  return CodeTable(sigma, std::move(codes));
}

std::vector<std::uint64_t> Histogram::cumulative() const {
  std::vector<std::uint64_t> cum(counts.size() + 1, 0);
  for (std::size_t s = 0; s < counts.size(); ++s) cum[s + 1] = cum[s] + counts[s];
  return cum;
}

EncodedText encode_and_histogram(std::span<std::uint32_t const> text, CodeTable const& codes) {
  WorkerPool pool(1);
  return encode_and_histogram(text, codes, pool);
}

EncodedText encode_and_histogram(std::span<std::uint32_t const> text, CodeTable const& codes,
                                 WorkerPool& pool) {
  std::uint64_t const sigma = codes.sigma();
  EncodedText out;
  out.words.resize(text.size());
  std::vector<std::vector<std::uint64_t>> local(pool.size());
  pool.parallel_for_parts(text.size(), 1 << 16, [&](std::size_t part, std::size_t first, std::size_t last) {
    std::vector<std::uint64_t> counts(sigma, 0);
    for (std::size_t j = first; j < last; ++j) {
      std::uint32_t const s = text[j];
      if (s >= sigma) {
        throw Error(ErrorCode::unknown_symbol, "symbol id " + std::to_string(s) + " at position " +
                                                   std::to_string(j) + " >= sigma " + std::to_string(sigma));
      }
      ++counts[s];
      out.words[j] = codes.code(s).value;
    }
    local[part] = std::move(counts);
  });
  out.histogram.counts.assign(sigma, 0);
  for (auto const& counts : local) {
    for (std::size_t s = 0; s < counts.size(); ++s) out.histogram.counts[s] += counts[s];
  }
  return out;
}

std::vector<std::uint64_t> level_sizes(CodeTable const& codes, Histogram const& hist) {
  std::vector<std::uint64_t> sizes(codes.num_bits(), 0);
  for (std::uint32_t s = 0; s < hist.counts.size(); ++s) {
    unsigned const len = codes.code(s).len;
    for (unsigned l = 0; l < len; ++l) sizes[l] += hist.counts[s];
  }
  return sizes;
}

}  // namespace wavelet
