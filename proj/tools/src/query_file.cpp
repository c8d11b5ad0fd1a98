#include "wtidx/query_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace wtidx {

using wavelet::AccessQuery;
using wavelet::QueryKind;
using wavelet::RankQuery;
using wavelet::SelectQuery;

ParseError::ParseError(std::size_t line, std::string const& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::optional<QueryKind> parse_kind(std::string_view name) {
  if (name == "access") return QueryKind::access;
  if (name == "rank") return QueryKind::rank;
  if (name == "select") return QueryKind::select;
  return std::nullopt;
}

char const* kind_name(QueryKind kind) {
  switch (kind) {
    case QueryKind::access: return "access";
    case QueryKind::rank: return "rank";
    case QueryKind::select: return "select";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  auto const is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  if (!all_digits(s)) return std::nullopt;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::optional<std::uint32_t> parse_symbol(std::string_view token, std::uint32_t max_symbol) {
  if (all_digits(token)) {
    auto v = parse_u64(token);
    if (!v || *v > max_symbol) return std::nullopt;
    return static_cast<std::uint32_t>(*v);
  }
  if (token.size() == 1) return static_cast<unsigned char>(token[0]);
  return std::nullopt;
}

QueryFile parse_queries(std::istream& in, QueryKind kind, std::uint32_t max_symbol) {
  std::vector<AccessQuery> access;
  std::vector<RankQuery> rank;
  std::vector<SelectQuery> select;
  QueryFile out;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (kind == QueryKind::access) {
      auto pos = parse_u64(line);
      if (!pos) throw ParseError(line_no, "expected a decimal position");
      access.push_back({*pos});
    } else {
      // The last comma separates, so ',' itself can appear as a symbol.
      auto const comma = line.rfind(',');
      if (comma == std::string_view::npos) throw ParseError(line_no, "expected <symbol>,<number>");
      auto const sym_token = trim(line.substr(0, comma));
      auto const num_token = trim(line.substr(comma + 1));
      auto sym = parse_symbol(sym_token, max_symbol);
      if (!sym) throw ParseError(line_no, "bad symbol '" + std::string(sym_token) + "'");
      auto num = parse_u64(num_token);
      if (!num) throw ParseError(line_no, "bad number '" + std::string(num_token) + "'");
      auto const s = static_cast<wavelet::Symbol>(*sym);
      if (kind == QueryKind::rank) {
        rank.push_back({s, *num});
      } else {
        select.push_back({s, *num});
      }
    }
    out.lines.push_back(line_no);
  }

  switch (kind) {
    case QueryKind::access: out.batch.queries = std::move(access); break;
    case QueryKind::rank: out.batch.queries = std::move(rank); break;
    case QueryKind::select: out.batch.queries = std::move(select); break;
  }
  return out;
}

std::string format_symbol(wavelet::Symbol symbol, unsigned symbol_width) {
  if (symbol_width == 8 && symbol >= 0x21 && symbol <= 0x7E && !(symbol >= '0' && symbol <= '9') &&
      symbol != ',' && symbol != '#') {
    return std::string(1, static_cast<char>(symbol));
  }
  return std::to_string(symbol);
}

}  // namespace wtidx
