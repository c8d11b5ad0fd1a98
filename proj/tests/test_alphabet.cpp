#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "wavelet/alphabet.hpp"
#include "wavelet/bits.hpp"
#include "wavelet/error.hpp"
#include "wavelet/oracle.hpp"
#include "wavelet/worker_pool.hpp"

using namespace wavelet;

namespace {

std::string bits_of(Code c, unsigned num_bits) {
  std::string s;
  for (unsigned b = 0; b < c.len; ++b) s += ((c.value >> (num_bits - 1 - b)) & 1U) ? '1' : '0';
  return s;
}

std::vector<Symbol> chars(std::string const& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("prev_pow_two and ceil_log2") {
  CHECK(prev_pow_two(1) == 1);
  CHECK(prev_pow_two(2) == 1);
  CHECK(prev_pow_two(3) == 2);
  CHECK(prev_pow_two(4) == 2);
  CHECK(prev_pow_two(6) == 4);
  CHECK(prev_pow_two(11) == 8);
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(5) == 3);
  CHECK(ceil_log2(65536) == 16);
}

TEST_CASE("minimal alphabet is order preserving") {
  auto [ids, map] = minimal_alphabet(chars("dbdcaacbcd"));
  CHECK(map.sigma() == 4);
  CHECK(ids == std::vector<std::uint32_t>{3, 1, 3, 2, 0, 0, 2, 1, 2, 3});

  auto [ones, single] = minimal_alphabet(chars("zzzz"));
  CHECK(single.sigma() == 1);
  CHECK(ones == std::vector<std::uint32_t>{0, 0, 0, 0});

  std::vector<Symbol> text{200, 5, 7, 5};
  auto [mapped, m] = minimal_alphabet(text);
  CHECK(*m.to_id(5) == 0);
  CHECK(*m.to_id(7) == 1);
  CHECK(*m.to_id(200) == 2);
  CHECK_FALSE(m.to_id(6).has_value());
  CHECK_FALSE(m.to_id(60000).has_value());
  CHECK(m.to_symbol(2) == 200);

  CHECK_THROWS_AS(minimal_alphabet({}), Error);
}

TEST_CASE("code table fixtures") {
  CHECK(create_codes(8).empty());
  CHECK(create_codes(1).empty());
  CHECK_THROWS_AS(create_codes(0), Error);

  auto six = create_codes(6);
  CHECK(six.first_coded() == 4);
  CHECK(bits_of(six.code(4), 3) == "10");
  CHECK(bits_of(six.code(5), 3) == "11");
  CHECK(six.code(5).value == 6);
  CHECK(bits_of(six.code(3), 3) == "011");

  auto eleven = create_codes(11);
  CHECK(bits_of(eleven.code(8), 4) == "100");
  CHECK(bits_of(eleven.code(9), 4) == "101");
  CHECK(bits_of(eleven.code(10), 4) == "11");

  // Untouched entries keep plain binary.
  auto seven = create_codes(7);
  CHECK(bits_of(seven.code(4), 3) == "100");
  CHECK(bits_of(seven.code(5), 3) == "101");
  CHECK(bits_of(seven.code(6), 3) == "11");

  CHECK(bits_of(create_codes(5).code(4), 3) == "1");
  CHECK(bits_of(create_codes(3).code(2), 2) == "1");
}

TEST_CASE("codes equal the paths of the prev_pow_two shape for all sigma up to 4096") {
  for (std::uint64_t sigma = 2; sigma <= 4096; ++sigma) {
    auto const table = create_codes(sigma);
    auto const paths = oracle::naive_paths(sigma);
    unsigned const nb = ceil_log2(sigma);
    CHECK_MESSAGE(table.empty() == is_pow_two(sigma), "sigma " << sigma);
    unsigned prev_len = 64;
    std::vector<std::string> all;
    for (std::uint32_t s = 0; s < sigma; ++s) {
      Code const c = table.code(s);
      REQUIRE_MESSAGE(bits_of(c, nb) == paths[s], "sigma " << sigma << " symbol " << s);
      // No bits below the path.
      REQUIRE((c.value & ((std::uint32_t{1} << (nb - c.len)) - 1)) == 0);
      REQUIRE(c.len <= prev_len);
      prev_len = c.len;
      REQUIRE(oracle::naive_decode(sigma, c, nb) == static_cast<std::int64_t>(s));
      all.push_back(bits_of(c, nb));
    }
    // Prefix-free.
    std::sort(all.begin(), all.end());
    for (std::size_t j = 1; j < all.size(); ++j) {
      REQUIRE(all[j].compare(0, all[j - 1].size(), all[j - 1]) != 0);
    }
  }
}

TEST_CASE("encode and histogram") {
  auto [ids, map] = minimal_alphabet(chars("dbdcaacbcd"));
  auto enc = encode_and_histogram(ids, create_codes(4));
  CHECK(enc.words == ids);
  CHECK(enc.histogram.counts == std::vector<std::uint64_t>{2, 2, 3, 3});
  CHECK(enc.histogram.cumulative() == std::vector<std::uint64_t>{0, 2, 4, 7, 10});

  std::vector<std::uint32_t> five{5};
  CHECK(encode_and_histogram(five, create_codes(6)).words == std::vector<std::uint32_t>{6});

  std::vector<std::uint32_t> zeros(7, 0);
  auto one = encode_and_histogram(zeros, create_codes(1));
  CHECK(one.words == zeros);
  CHECK(one.histogram.counts == std::vector<std::uint64_t>{7});

  std::vector<std::uint32_t> bad{0, 6};
  try {
    encode_and_histogram(bad, create_codes(6));
    FAIL("expected error");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::unknown_symbol);
  }
}

TEST_CASE("encoding does not depend on the worker count") {
  auto text = testing::random_text<std::uint32_t>(300'000, 243, 5);
  auto const codes = create_codes(243);
  WorkerPool one(1), many(8);
  auto a = encode_and_histogram(text, codes, one);
  auto b = encode_and_histogram(text, codes, many);
  CHECK(a.words == b.words);
  CHECK(a.histogram.counts == b.histogram.counts);
}

TEST_CASE("level sizes") {
  Histogram h4{{2, 2, 3, 3}};
  CHECK(level_sizes(create_codes(4), h4) == std::vector<std::uint64_t>{10, 10});
  Histogram h6{{1, 1, 1, 1, 1, 1}};
  CHECK(level_sizes(create_codes(6), h6) == std::vector<std::uint64_t>{6, 6, 4});
  Histogram h5{{3, 1, 4, 1, 5}};
  CHECK(level_sizes(create_codes(5), h5) == std::vector<std::uint64_t>{14, 9, 9});
  CHECK(level_sizes(create_codes(1), Histogram{{9}}).empty());
}

TEST_CASE("reduced size never exceeds the plain tree") {
  std::mt19937_64 rng(31);
  for (std::uint64_t sigma = 2; sigma <= 4096; sigma += 1 + rng() % 7) {
    Histogram h;
    h.counts.resize(sigma);
    for (auto& c : h.counts) c = rng() % 50;
    h.counts[sigma - 1] += 1;  // the top symbol always occurs
    auto const codes = create_codes(sigma);
    auto const sizes = level_sizes(codes, h);
    std::uint64_t n = 0, weighted = 0, stored = 0;
    for (std::uint32_t s = 0; s < sigma; ++s) {
      n += h.counts[s];
      weighted += h.counts[s] * codes.code(s).len;
    }
    for (auto v : sizes) stored += v;
    REQUIRE(stored == weighted);
    REQUIRE(sizes.front() == n);
    REQUIRE(std::is_sorted(sizes.rbegin(), sizes.rend()));
    if (is_pow_two(sigma)) {
      REQUIRE(stored == n * ceil_log2(sigma));
    } else {
      REQUIRE(stored < n * ceil_log2(sigma));
    }
  }
}
