#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wavelet/batch.hpp"

namespace wtidx {

// Text format of query files. One query per line:
//   access: <position>
//   rank:   <symbol>,<position>
//   select: <symbol>,<ordinal>
// A symbol is either an all-digit decimal value or a single character taken
// by its byte value. Lines starting with '#' and blank lines are skipped.

/// Parsed queries plus the 1-based source line of each one.
struct QueryFile {
  wavelet::QueryBatch batch;
  std::vector<std::size_t> lines;
};

/// Thrown on malformed input; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string const& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

std::optional<wavelet::QueryKind> parse_kind(std::string_view name);
char const* kind_name(wavelet::QueryKind kind);

/// max_symbol bounds decimal symbols (255 or 65535).
std::optional<std::uint32_t> parse_symbol(std::string_view token, std::uint32_t max_symbol);

QueryFile parse_queries(std::istream& in, wavelet::QueryKind kind, std::uint32_t max_symbol);

/// Access results: printable non-digit bytes other than ',' and '#' are
/// written as themselves for 8-bit indexes, everything else in decimal, so
/// the output reads back under the same symbol grammar.
std::string format_symbol(wavelet::Symbol symbol, unsigned symbol_width);

}  // namespace wtidx
