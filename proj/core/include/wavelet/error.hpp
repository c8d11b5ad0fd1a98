#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wavelet {

enum class ErrorCode : std::uint8_t {
  construction,       // empty text, overflow, invalid parameters
  index_out_of_range, // bit index or text position past the end
  ordinal_out_of_range,
  unknown_symbol,
  bad_magic,
  bad_version,
  truncated,
  corrupt,
  io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure reported by the library. The code is stable and is what
/// callers (and the CLI exit-code mapping) should branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string const& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::construction: return "construction error";
    case ErrorCode::index_out_of_range: return "index out of range";
    case ErrorCode::ordinal_out_of_range: return "ordinal out of range";
    case ErrorCode::unknown_symbol: return "unknown symbol";
    case ErrorCode::bad_magic: return "bad magic";
    case ErrorCode::bad_version: return "unsupported version";
    case ErrorCode::truncated: return "truncated input";
    case ErrorCode::corrupt: return "corrupt index";
    case ErrorCode::io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace wavelet
