#include <cstdio>
#include <sstream>
#include <string>

#include "doctest.h"
#include "support.hpp"
#include "wavelet/error.hpp"
#include "wavelet/wavelet_tree.hpp"

using namespace wavelet;

namespace {

ErrorCode load_error(std::string const& bytes) {
  try {
    WaveletTree::from_bytes(bytes);
  } catch (Error const& e) {
    return e.code();
  }
  return ErrorCode::io;
}

std::string example_bytes() {
  std::string const s = "dbdcaacbcd";
  return WaveletTree::build(std::vector<Symbol>(s.begin(), s.end())).to_bytes();
}

}  // namespace

TEST_CASE("header layout") {
  auto const bytes = example_bytes();
  CHECK(bytes.substr(0, 8) == "WTIDX001");
  CHECK(bytes[8] == 1);  // version, little-endian
  CHECK(bytes[12] == 0);  // flags: 8-bit symbols
  CHECK(bytes[16] == 10);  // n
  CHECK(bytes[24] == 4);  // sigma
  CHECK(bytes[32] == 2);  // levels
  CHECK(bytes.substr(36, 4) == "abcd");
}

TEST_CASE("save, load, save is byte identical") {
  for (std::uint64_t sigma : {1, 2, 6, 11, 256, 3000}) {
    auto text = testing::random_text<Symbol>(50'000, sigma, sigma);
    auto wt = WaveletTree::build(text);
    auto const first = wt.to_bytes();
    auto loaded = WaveletTree::from_bytes(first);
    CHECK(loaded.to_bytes() == first);
    CHECK(loaded.symbol_width() == wt.symbol_width());
    for (std::uint64_t i = 0; i < text.size(); i += 997) REQUIRE(loaded.access(i) == text[i]);
  }
}

TEST_CASE("stream and file round trip") {
  auto text = testing::random_text<Symbol>(1000, 7, 1);
  auto wt = WaveletTree::build(text);
  std::stringstream ss;
  wt.save(ss);
  CHECK(WaveletTree::load(ss).to_bytes() == wt.to_bytes());

  std::string const path = "test_serialize_roundtrip.wtidx";
  wt.save_file(path);
  CHECK(WaveletTree::load_file(path).to_bytes() == wt.to_bytes());
  std::remove(path.c_str());
  CHECK_THROWS_AS(WaveletTree::load_file("does/not/exist.wtidx"), Error);
}

TEST_CASE("corruptions map to distinct errors") {
  auto const good = example_bytes();

  auto magic = good;
  magic[0] = 'X';
  CHECK(load_error(magic) == ErrorCode::bad_magic);

  auto version = good;
  version[8] = 2;
  CHECK(load_error(version) == ErrorCode::bad_version);

  for (std::size_t cut : {std::size_t{0}, std::size_t{4}, std::size_t{20}, good.size() / 2, good.size() - 1}) {
    CHECK(load_error(good.substr(0, cut)) == ErrorCode::truncated);
  }

  CHECK(load_error(good + "x") == ErrorCode::corrupt);

  auto flags = good;
  flags[12] = 4;
  CHECK(load_error(flags) == ErrorCode::corrupt);

  auto alphabet = good;
  alphabet[36] = 'b';  // "bbcd" is not strictly increasing
  CHECK(load_error(alphabet) == ErrorCode::corrupt);

  // Flip a payload bit in the first level: the one count no longer matches.
  auto payload = good;
  std::size_t const words_at = 36 + 4 + 4 + 2 * 8 + 5 * 8 + 8;
  payload[words_at] ^= 0x01;
  CHECK(load_error(payload) == ErrorCode::corrupt);
}
