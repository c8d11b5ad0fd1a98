#include "wavelet/oracle.hpp"

#include <string>

#include "wavelet/error.hpp"

namespace wavelet::oracle {

namespace {

// Width of the left child; kept separate from the production helper.
std::uint64_t left_width(std::uint64_t width) {
  std::uint64_t p = 1;
  while (p * 2 < width) p *= 2;
  return p;
}

[[noreturn]] void ordinal_error(std::uint64_t k) {
  throw Error(ErrorCode::ordinal_out_of_range, "naive select(" + std::to_string(k) + ")");
}

}  // namespace

std::uint64_t naive_rank1_bits(std::vector<bool> const& bits, std::uint64_t i) {
  if (i > bits.size()) throw Error(ErrorCode::index_out_of_range, "naive rank");
  std::uint64_t count = 0;
  for (std::uint64_t j = 0; j < i; ++j) count += bits[j] ? 1 : 0;
  return count;
}

std::uint64_t naive_rank0_bits(std::vector<bool> const& bits, std::uint64_t i) {
  return i - naive_rank1_bits(bits, i);
}

std::uint64_t naive_select1_bits(std::vector<bool> const& bits, std::uint64_t k) {
  if (k == 0) ordinal_error(k);
  std::uint64_t seen = 0;
  for (std::uint64_t j = 0; j < bits.size(); ++j) {
    if (bits[j] && ++seen == k) return j;
  }
  ordinal_error(k);
}

std::uint64_t naive_select0_bits(std::vector<bool> const& bits, std::uint64_t k) {
  if (k == 0) ordinal_error(k);
  std::uint64_t seen = 0;
  for (std::uint64_t j = 0; j < bits.size(); ++j) {
    if (!bits[j] && ++seen == k) return j;
  }
  ordinal_error(k);
}

unsigned naive_select_in_word(std::uint64_t word, unsigned k) {
  unsigned seen = 0;
  for (unsigned p = 0; p < 64; ++p) {
    if (((word >> p) & 1U) && ++seen == k) return p;
  }
  ordinal_error(k);
}

template <typename T>
T naive_access(std::span<T const> text, std::uint64_t i) {
  if (i >= text.size()) throw Error(ErrorCode::index_out_of_range, "naive access");
  return text[i];
}

template <typename T>
std::uint64_t naive_rank(std::span<T const> text, T c, std::uint64_t i) {
  if (i > text.size()) throw Error(ErrorCode::index_out_of_range, "naive rank");
  std::uint64_t count = 0;
  for (std::uint64_t j = 0; j < i; ++j) count += text[j] == c ? 1 : 0;
  return count;
}

template <typename T>
std::uint64_t naive_select(std::span<T const> text, T c, std::uint64_t k) {
  if (k == 0) ordinal_error(k);
  std::uint64_t seen = 0;
  for (std::uint64_t j = 0; j < text.size(); ++j) {
    if (text[j] == c && ++seen == k) return j;
  }
  ordinal_error(k);
}

template std::uint16_t naive_access(std::span<std::uint16_t const>, std::uint64_t);
template std::uint32_t naive_access(std::span<std::uint32_t const>, std::uint64_t);
template std::uint64_t naive_rank(std::span<std::uint16_t const>, std::uint16_t, std::uint64_t);
template std::uint64_t naive_rank(std::span<std::uint32_t const>, std::uint32_t, std::uint64_t);
template std::uint64_t naive_select(std::span<std::uint16_t const>, std::uint16_t, std::uint64_t);
template std::uint64_t naive_select(std::span<std::uint32_t const>, std::uint32_t, std::uint64_t);

std::vector<std::vector<Interval>> naive_tree_shape(std::uint64_t sigma) {
  std::vector<std::vector<Interval>> levels;
  std::vector<Interval> current{{0, static_cast<std::uint32_t>(sigma)}};
  while (!current.empty()) {
    levels.push_back(current);
    std::vector<Interval> next;
    for (auto iv : current) {
      std::uint64_t const width = iv.end - iv.start;
      if (width < 2) continue;
      auto const split = static_cast<std::uint32_t>(iv.start + left_width(width));
      next.push_back({iv.start, split});
      next.push_back({split, iv.end});
    }
    current = std::move(next);
  }
  return levels;
}

std::vector<std::string> naive_paths(std::uint64_t sigma) {
  std::vector<std::string> paths(sigma);
  struct Frame {
    std::uint32_t start, end;
    std::string path;
  };
  std::vector<Frame> stack{{0, static_cast<std::uint32_t>(sigma), ""}};
  while (!stack.empty()) {
    auto f = std::move(stack.back());
    stack.pop_back();
    if (f.end - f.start == 1) {
      paths[f.start] = f.path;
      continue;
    }
    auto const split = static_cast<std::uint32_t>(f.start + left_width(f.end - f.start));
    stack.push_back({f.start, split, f.path + "0"});
    stack.push_back({split, f.end, f.path + "1"});
  }
  return paths;
}

std::int64_t naive_decode(std::uint64_t sigma, Code code, unsigned num_bits) {
  std::uint64_t start = 0;
  std::uint64_t end = sigma;
  for (unsigned b = 0; b < code.len; ++b) {
    if (end - start < 2) return -1;
    bool const bit = (code.value >> (num_bits - 1 - b)) & 1U;
    std::uint64_t const split = start + left_width(end - start);
    if (bit) {
      start = split;
    } else {
      end = split;
    }
  }
  return end - start == 1 ? static_cast<std::int64_t>(start) : -1;
}

std::vector<std::vector<bool>> naive_level_bits(std::span<std::uint32_t const> text, std::uint64_t sigma) {
  std::vector<std::vector<bool>> levels;
  // Each node keeps the subsequence of the text that falls into it; nodes of
  // one level are visited left to right.
  struct Node {
    std::uint32_t start, end;
    std::vector<std::uint32_t> seq;
  };
  std::vector<Node> current{{0, static_cast<std::uint32_t>(sigma), {text.begin(), text.end()}}};
  while (true) {
    std::vector<bool> bits;
    std::vector<Node> next;
    bool any = false;
    for (auto& node : current) {
      if (node.end - node.start < 2) continue;
      any = true;
      auto const split = static_cast<std::uint32_t>(node.start + left_width(node.end - node.start));
      Node left{node.start, split, {}};
      Node right{split, node.end, {}};
      for (auto s : node.seq) {
        bits.push_back(s >= split);
        (s >= split ? right : left).seq.push_back(s);
      }
      next.push_back(std::move(left));
      next.push_back(std::move(right));
    }
    if (!any) break;
    levels.push_back(std::move(bits));
    current = std::move(next);
  }
  return levels;
}

}  // namespace wavelet::oracle
