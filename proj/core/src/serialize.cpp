// Index file layout, all integers little-endian:
//
//   magic "WTIDX001" | u32 version | u32 flags (bit 0: 16-bit symbols)
//   u64 n | u64 sigma | u32 num_levels
//   alphabet: sigma symbols, u8 or u16 per flags
//   codes: u32 count, then per code u32 value, u8 len
//   level_sizes: num_levels x u64
//   cum_hist: (sigma + 1) x u64
//   words: u64 count, then the bit-array words, padding included
//   per level: u32 l2_bits, u32 sample_rate, u64 total_ones,
//              u64 count + u64 l1[], u64 count + u16 l2[],
//              u64 count + u64 one_samples[], u64 count + u64 zero_samples[]
//   per level: u64 count, then (u32 start_symbol, u64 rank0) sorted by symbol

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "wavelet/bits.hpp"
#include "wavelet/error.hpp"
#include "wavelet/wavelet_tree.hpp"

namespace wavelet {

namespace {

class Writer {
 public:
  explicit Writer(std::string& out) : out_(out) {}

  template <typename T>
  void put(T value) {
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      out_.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * b)) & 0xFF));
    }
  }

  template <typename T>
  void put_array(std::vector<T> const& values) {
    put<std::uint64_t>(values.size());
    for (auto v : values) put<T>(v);
  }

  void put_raw(char const* data, std::size_t size) { out_.append(data, size); }

 private:
  std::string& out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      v |= std::uint64_t{static_cast<unsigned char>(in_[pos_ + b])} << (8 * b);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  template <typename T>
  std::vector<T> get_array(std::uint64_t count) {
    if (count > remaining() / sizeof(T)) truncated();
    std::vector<T> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(get<T>());
    return out;
  }

  template <typename T>
  std::vector<T> get_array() {
    return get_array<T>(get<std::uint64_t>());
  }

  std::string_view get_raw(std::size_t size) {
    need(size);
    auto out = in_.substr(pos_, size);
    pos_ += size;
    return out;
  }

  std::size_t remaining() const noexcept { return in_.size() - pos_; }

 private:
  void need(std::size_t size) const {
    if (size > remaining()) truncated();
  }
  [[noreturn]] static void truncated() { throw Error(ErrorCode::truncated, "index ends early"); }

  std::string_view in_;
  std::size_t pos_ = 0;
};

[[noreturn]] void corrupt(std::string const& what) { throw Error(ErrorCode::corrupt, what); }

}  // namespace

class TreeFormat {
 public:
  static void write(WaveletTree const& wt, std::string& bytes) {
    Writer w(bytes);
    w.put_raw(WaveletTree::kMagic, sizeof(WaveletTree::kMagic));
    w.put<std::uint32_t>(WaveletTree::kVersion);
    w.put<std::uint32_t>(wt.symbol_width_ == 16 ? 1U : 0U);
    w.put<std::uint64_t>(wt.n_);
    w.put<std::uint64_t>(wt.sigma());
    w.put<std::uint32_t>(wt.num_levels());
    for (auto s : wt.alphabet_.symbols()) {
      if (wt.symbol_width_ == 16) {
        w.put<std::uint16_t>(s);
      } else {
        w.put<std::uint8_t>(static_cast<std::uint8_t>(s));
      }
    }
    auto const& codes = wt.codes_.stored();
    w.put<std::uint32_t>(static_cast<std::uint32_t>(codes.size()));
    for (auto const& c : codes) {
      w.put<std::uint32_t>(c.value);
      w.put<std::uint8_t>(c.len);
    }
    for (auto s : wt.level_sizes_) w.put<std::uint64_t>(s);
    for (auto c : wt.cum_hist_) w.put<std::uint64_t>(c);
    auto const words = wt.levels_.words();
    w.put<std::uint64_t>(words.size());
    for (auto word : words) w.put<std::uint64_t>(word);
    for (auto const& rs : wt.rs_) {
      w.put<std::uint32_t>(rs.params().l2_bits);
      w.put<std::uint32_t>(rs.params().sample_rate);
      w.put<std::uint64_t>(rs.total_ones());
      w.put_array(rs.l1_counts());
      w.put_array(rs.l2_counts());
      w.put_array(rs.one_samples());
      w.put_array(rs.zero_samples());
    }
    for (unsigned l = 0; l < wt.num_levels(); ++l) {
      auto const starts = wt.node_starts(l);
      w.put<std::uint64_t>(starts.size());
      for (auto s : starts) {
        w.put<std::uint32_t>(s);
        w.put<std::uint64_t>(wt.cached_rank0(l, s));
      }
    }
  }

  static WaveletTree read(std::string_view bytes) {
    Reader r(bytes);
    if (r.remaining() < sizeof(WaveletTree::kMagic)) {
      throw Error(ErrorCode::truncated, "index ends before the magic");
    }
    if (std::memcmp(r.get_raw(sizeof(WaveletTree::kMagic)).data(), WaveletTree::kMagic,
                    sizeof(WaveletTree::kMagic)) != 0) {
      throw Error(ErrorCode::bad_magic, "not a wavelet tree index");
    }
    auto const version = r.get<std::uint32_t>();
    if (version != WaveletTree::kVersion) {
      throw Error(ErrorCode::bad_version, "index version " + std::to_string(version) + ", expected " +
                                              std::to_string(WaveletTree::kVersion));
    }
    auto const flags = r.get<std::uint32_t>();
    if (flags & ~1U) corrupt("unknown flag bits");

    WaveletTree wt;
    wt.symbol_width_ = (flags & 1U) ? 16 : 8;
    wt.n_ = r.get<std::uint64_t>();
    auto const sigma = r.get<std::uint64_t>();
    auto const num_levels = r.get<std::uint32_t>();
    if (sigma == 0 || sigma > (std::uint64_t{1} << wt.symbol_width_)) corrupt("alphabet size");
    if (wt.n_ == 0) corrupt("empty text");
    if (num_levels != ceil_log2(sigma)) corrupt("level count does not match alphabet size");

    std::vector<Symbol> symbols = wt.symbol_width_ == 16 ? r.get_array<std::uint16_t>(sigma)
                                                         : [&] {
                                                             auto bytes8 = r.get_array<std::uint8_t>(sigma);
                                                             return std::vector<Symbol>(bytes8.begin(), bytes8.end());
                                                           }();
    if (!std::is_sorted(symbols.begin(), symbols.end()) ||
        std::adjacent_find(symbols.begin(), symbols.end()) != symbols.end()) {
      corrupt("alphabet not strictly increasing");
    }
    wt.alphabet_ = AlphabetMap(std::move(symbols));

    auto const num_codes = r.get<std::uint32_t>();
    if (num_codes > r.remaining() / 5) throw Error(ErrorCode::truncated, "index ends early");
    std::vector<Code> codes(num_codes);
    for (auto& c : codes) {
      c.value = r.get<std::uint32_t>();
      c.len = r.get<std::uint8_t>();
    }
    wt.codes_ = CodeTable(sigma, std::move(codes));
    if (!(wt.codes_ == create_codes(sigma))) corrupt("code table does not match alphabet size");

    wt.level_sizes_ = r.get_array<std::uint64_t>(num_levels);
    wt.cum_hist_ = r.get_array<std::uint64_t>(sigma + 1);
    if (wt.cum_hist_.front() != 0 || wt.cum_hist_.back() != wt.n_ ||
        !std::is_sorted(wt.cum_hist_.begin(), wt.cum_hist_.end())) {
      corrupt("cumulative histogram");
    }
    Histogram hist;
    hist.counts.resize(sigma);
    for (std::uint64_t s = 0; s < sigma; ++s) hist.counts[s] = wt.cum_hist_[s + 1] - wt.cum_hist_[s];
    if (wt.level_sizes_ != wavelet::level_sizes(wt.codes_, hist)) corrupt("level sizes do not match histogram");

    auto words = r.get_array<Word>();
    wt.levels_ = BitArray::from_parts(wt.level_sizes_, std::move(words));

    wt.rs_.reserve(num_levels);
    for (unsigned l = 0; l < num_levels; ++l) {
      RankSelectParams params;
      params.l2_bits = r.get<std::uint32_t>();
      params.sample_rate = r.get<std::uint32_t>();
      try {
        params.validate();
      } catch (Error const&) {
        corrupt("rank/select parameters on level " + std::to_string(l));
      }
      auto const total_ones = r.get<std::uint64_t>();
      auto l1 = r.get_array<std::uint64_t>();
      auto l2 = r.get_array<std::uint16_t>();
      auto ones = r.get_array<std::uint64_t>();
      auto zeros = r.get_array<std::uint64_t>();
      auto const region = wt.levels_.region(l);
      std::uint64_t actual = 0;
      for (auto word : region.words) actual += popcount(word);
      if (actual != total_ones) corrupt("one count on level " + std::to_string(l));
      wt.rs_.push_back(RankSelectIndex::from_parts(region, params, total_ones, std::move(l1), std::move(l2),
                                                   std::move(ones), std::move(zeros)));
    }

    wt.compute_node_ranks();
    for (unsigned l = 0; l < num_levels; ++l) {
      auto const count = r.get<std::uint64_t>();
      if (count != wt.node_rank0_[l].size()) corrupt("node rank count on level " + std::to_string(l));
      for (std::uint64_t e = 0; e < count; ++e) {
        auto const start = r.get<std::uint32_t>();
        auto const rank = r.get<std::uint64_t>();
        auto it = wt.node_rank0_[l].find(start);
        if (it == wt.node_rank0_[l].end() || it->second != rank) {
          corrupt("node rank entry on level " + std::to_string(l));
        }
      }
    }
    if (r.remaining() != 0) corrupt("trailing bytes");
    return wt;
  }
};

void WaveletTree::save(std::ostream& out) const {
  auto const bytes = to_bytes();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::io, "write failed");
}

std::string WaveletTree::to_bytes() const {
  std::string bytes;
  TreeFormat::write(*this, bytes);
  return bytes;
}

WaveletTree WaveletTree::load(std::istream& in) {
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::io, "read failed");
  return from_bytes(bytes);
}

WaveletTree WaveletTree::from_bytes(std::string_view bytes) { return TreeFormat::read(bytes); }

void WaveletTree::save_file(std::string const& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
  save(out);
}

WaveletTree WaveletTree::load_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  return load(in);
}

}  // namespace wavelet
