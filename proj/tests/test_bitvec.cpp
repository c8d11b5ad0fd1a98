#include <random>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "wavelet/bitvec.hpp"
#include "wavelet/error.hpp"

using namespace wavelet;

namespace {
BitArray make(std::vector<std::uint64_t> lengths) { return BitArray(std::span<std::uint64_t const>(lengths)); }
}  // namespace

TEST_CASE("regions are zeroed and aligned to 1024 bits") {
  auto one = make({8});
  CHECK(one.num_regions() == 1);
  CHECK(one.region_offset(0) == 0);
  CHECK(one.region_size(0) == 8);
  for (std::uint64_t j = 0; j < 8; ++j) CHECK_FALSE(one.get_bit(j));

  auto two = make({10, 10});
  CHECK(two.region_offset(0) == 0);
  CHECK(two.region_offset(1) == 1024);

  auto exact = make({1024, 1});
  CHECK(exact.region_offset(1) == 1024);

  auto empty = make({0, 5});
  CHECK(empty.region_offset(1) == 0);
  CHECK(empty.region(0).words.empty());
}

TEST_CASE("total size overflow is a construction error") {
  std::vector<std::uint64_t> lengths{~std::uint64_t{0} - 10, 100};
  try {
    make(lengths);
    FAIL("expected overflow");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::construction);
  }
}

TEST_CASE("bit layout is LSB first") {
  auto ba = make({200});
  ba.set_bit(0, true);
  CHECK(ba.words()[0] == 1);
  ba.set_bit(0, false);
  ba.set_bit(63, true);
  CHECK(ba.words()[0] == (Word{1} << 63));
  CHECK(ba.word_at_bit(64 + 3) == ba.words()[1]);
  ba.set_bit(64 + 3, true);
  CHECK(ba.word_at_bit(64 + 3) == 8);

  auto small = make({10});
  for (auto j : {0, 2, 3}) small.set_bit(j, true);
  std::vector<bool> expect{true, false, true, true, false, false, false, false, false, false};
  for (std::uint64_t j = 0; j < 10; ++j) CHECK(small.get_bit(j) == expect[j]);
}

TEST_CASE("out of range accesses throw") {
  auto ba = make({10});
  CHECK_THROWS_AS(ba.get_bit(10), Error);
  CHECK_THROWS_AS(ba.set_bit(10, true), Error);
  CHECK_THROWS_AS(ba.word_at_bit(64), Error);
  CHECK_THROWS_AS(ba.get_bit(1, 0), Error);
}

TEST_CASE("partial_word masks the low bits") {
  Word const ones = ~Word{0};
  CHECK(partial_word(ones, 0) == 0);
  CHECK(partial_word(ones, 5) == 31);
  CHECK(partial_word(ones, 64) == ones);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 1000; ++t) {
    Word const w = rng();
    for (unsigned k = 0; k <= 64; ++k) {
      unsigned expect = 0;
      for (unsigned p = 0; p < k; ++p) expect += (w >> p) & 1U;
      REQUIRE(popcount(partial_word(w, k)) == expect);
    }
  }
}

TEST_CASE("get_bit reads back every written sequence up to 4W bits") {
  std::mt19937_64 rng(11);
  for (std::uint64_t n = 1; n <= 4 * kWordBits; ++n) {
    auto bits = testing::random_bits(n, 0.5, rng());
    auto ba = testing::to_bit_array(bits);
    for (std::uint64_t j = 0; j < n; ++j) REQUIRE(ba.get_bit(j) == bits[j]);
    // Padding stays zero.
    auto const words = ba.words();
    if (n % kWordBits) CHECK((words[n / kWordBits] >> (n % kWordBits)) == 0);
  }
}

TEST_CASE("writes never leak across region boundaries") {
  std::mt19937_64 rng(3);
  std::vector<std::uint64_t> lengths{1, 1023, 1024, 1025, 64, 0, 777};
  auto ba = make(lengths);
  for (std::size_t r = 0; r < lengths.size(); ++r) CHECK(ba.region_offset(r) % kRegionAlignBits == 0);
  std::vector<std::vector<bool>> shadow;
  for (auto len : lengths) shadow.emplace_back(len, false);
  for (int t = 0; t < 20000; ++t) {
    std::size_t const r = rng() % lengths.size();
    if (lengths[r] == 0) continue;
    std::uint64_t const j = rng() % lengths[r];
    bool const v = rng() & 1U;
    ba.set_bit(r, j, v);
    shadow[r][j] = v;
  }
  for (std::size_t r = 0; r < lengths.size(); ++r) {
    for (std::uint64_t j = 0; j < lengths[r]; ++j) REQUIRE(ba.get_bit(r, j) == shadow[r][j]);
  }
  // Rebuilding from the raw words accepts the array: padding is still zero.
  auto copy = BitArray::from_parts(lengths, {ba.words().begin(), ba.words().end()});
  CHECK(copy == ba);
}

TEST_CASE("from_parts rejects dirty padding and wrong sizes") {
  std::vector<std::uint64_t> lengths{10};
  std::vector<Word> words(16, 0);
  words[0] = Word{1} << 10;
  CHECK_THROWS_AS(BitArray::from_parts(lengths, words), Error);
  CHECK_THROWS_AS(BitArray::from_parts(lengths, std::vector<Word>(15, 0)), Error);
}
