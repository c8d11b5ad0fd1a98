#include "wtidx/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <json.hpp>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wavelet/batch.hpp"
#include "wavelet/error.hpp"
#include "wavelet/rank_select.hpp"
#include "wavelet/wavelet_tree.hpp"
#include "wavelet/worker_pool.hpp"
#include "wtidx/query_file.hpp"

namespace wtidx {

namespace {

using wavelet::BatchOptions;
using wavelet::BatchStats;
using wavelet::QueryBatch;
using wavelet::QueryKind;
using wavelet::Symbol;
using wavelet::WaveletTree;
using Clock = std::chrono::steady_clock;

// Raised for problems with input data or files; maps to kExitData.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// key=value lines on the text stream, mirrored into a JSON object.
class Report {
 public:
  explicit Report(std::string command) { add("command", std::move(command)); }

  template <typename T>
  void add(std::string const& key, T const& value) {
    json_[key] = value;
    std::ostringstream s;
    s << value;
    lines_.emplace_back(key, s.str());
  }
  void add_ms(std::string const& key, double ms) {
    json_[key] = ms;
    lines_.emplace_back(key, fixed(ms, 3));
  }
  void add_pct(std::string const& key, double pct) {
    json_[key] = pct;
    lines_.emplace_back(key, fixed(pct));
  }

  void print(std::ostream& out) const {
    for (auto const& [k, v] : lines_) out << k << '=' << v << '\n';
  }
  void write_json(std::string const& path) const {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write report " + path);
    f << json_.dump(2) << '\n';
    if (!f) throw DataError("cannot write report " + path);
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
  nlohmann::ordered_json json_;
};

std::string read_file(std::string const& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot read " + path);
  std::string bytes{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
  if (f.bad()) throw DataError("cannot read " + path);
  return bytes;
}

std::vector<Symbol> decode_symbols(std::string const& bytes, unsigned width, std::string const& path) {
  std::vector<Symbol> out;
  if (width == 8) {
    out.reserve(bytes.size());
    for (char c : bytes) out.push_back(static_cast<unsigned char>(c));
    return out;
  }
  if (bytes.size() % 2 != 0) throw DataError(path + ": odd byte count for 16-bit symbols");
  out.reserve(bytes.size() / 2);
  for (std::size_t j = 0; j < bytes.size(); j += 2) {
    out.push_back(static_cast<Symbol>(static_cast<unsigned char>(bytes[j]) |
                                      (static_cast<unsigned char>(bytes[j + 1]) << 8)));
  }
  return out;
}

// Storage numbers recomputed from the sizes of the stored arrays.
void add_storage(Report& r, WaveletTree const& tree, std::uint64_t index_bytes) {
  std::uint64_t data_bits = 0, rank_bits = 0, select_bits = 0;
  for (unsigned l = 0; l < tree.num_levels(); ++l) {
    data_bits += tree.level_sizes()[l];
    rank_bits += tree.level_index(l).rank_bits();
    select_bits += tree.level_index(l).select_bits();
  }
  auto const pct = [&](std::uint64_t bits) { return data_bits == 0 ? 0.0 : 100.0 * double(bits) / double(data_bits); };
  auto const params = tree.num_levels() > 0 ? tree.level_index(0).params() : wavelet::RankSelectParams::for_wavelet_tree();

  r.add("index_bytes", index_bytes);
  r.add("level_bits", data_bits);
  r.add("bits_per_symbol", fixed(tree.size() ? 8.0 * double(index_bytes) / double(tree.size()) : 0.0));
  r.add("level_bits_per_symbol", fixed(tree.size() ? double(data_bits) / double(tree.size()) : 0.0));
  r.add("l2_bits", params.l2_bits);
  r.add("sample_rate", params.sample_rate);
  r.add_pct("rank_overhead_pct", pct(rank_bits));
  r.add_pct("select_overhead_pct", pct(select_bits));
  r.add_pct("total_overhead_pct", pct(rank_bits + select_bits));
  r.add_pct("rank_formula_pct", 100.0 * (64.0 / double(wavelet::kL1Bits) + 16.0 / double(params.l2_bits)));
}

void add_shape(Report& r, WaveletTree const& tree) {
  r.add("n", tree.size());
  r.add("sigma", tree.sigma());
  r.add("levels", tree.num_levels());
  r.add("symbol_width", tree.symbol_width());
}

std::uint32_t max_symbol(WaveletTree const& tree) { return tree.symbol_width() == 8 ? 0xFFu : 0xFFFFu; }

// Runs one batch; rank/select optionally grouped by symbol first.
std::vector<std::uint64_t> execute(WaveletTree const& tree, QueryBatch const& batch, BatchOptions const& opt,
                                   bool sort_by_symbol, BatchStats* stats) {
  if (sort_by_symbol) {
    if (auto const* rq = std::get_if<std::vector<wavelet::RankQuery>>(&batch.queries)) {
      auto sorted = wavelet::sort_queries_by_symbol(*rq);
      auto res = wavelet::rank_batch(tree, sorted.queries, opt, stats);
      return wavelet::restore_order<std::uint64_t>(res, sorted.order);
    }
    if (auto const* sq = std::get_if<std::vector<wavelet::SelectQuery>>(&batch.queries)) {
      auto sorted = wavelet::sort_queries_by_symbol(*sq);
      auto res = wavelet::select_batch(tree, sorted.queries, opt, stats);
      return wavelet::restore_order<std::uint64_t>(res, sorted.order);
    }
  }
  return wavelet::run_batch(tree, batch, opt, stats);
}

void write_results(std::string const& path, std::vector<std::uint64_t> const& results, QueryKind kind,
                   unsigned width) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path);
  for (auto v : results) {
    if (kind == QueryKind::access) {
      f << format_symbol(static_cast<Symbol>(v), width) << '\n';
    } else {
      f << v << '\n';
    }
  }
  if (!f) throw DataError("cannot write " + path);
}

std::uint64_t checksum(std::vector<std::uint64_t> const& values) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over little-endian bytes
  for (auto v : values) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xFF;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

QueryBatch random_queries(WaveletTree const& tree, QueryKind kind, std::size_t num, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto const n = tree.size();
  std::vector<Symbol> present;
  std::vector<std::uint64_t> occ;
  for (Symbol c : tree.alphabet().symbols()) {
    if (auto k = tree.occurrences(c); k > 0) {
      present.push_back(c);
      occ.push_back(k);
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, present.size() - 1);
  QueryBatch batch;
  switch (kind) {
    case QueryKind::access: {
      std::uniform_int_distribution<std::uint64_t> pos(0, n - 1);
      std::vector<wavelet::AccessQuery> q(num);
      for (auto& a : q) a.position = pos(rng);
      batch.queries = std::move(q);
      break;
    }
    case QueryKind::rank: {
      std::uniform_int_distribution<std::uint64_t> pos(0, n);
      std::vector<wavelet::RankQuery> q(num);
      for (auto& r : q) {
        r.symbol = present[pick(rng)];
        r.position = pos(rng);
      }
      batch.queries = std::move(q);
      break;
    }
    case QueryKind::select: {
      std::vector<wavelet::SelectQuery> q(num);
      for (auto& s : q) {
        auto const j = pick(rng);
        s.symbol = present[j];
        s.ordinal = std::uniform_int_distribution<std::uint64_t>(1, occ[j])(rng);
      }
      batch.queries = std::move(q);
      break;
    }
  }
  return batch;
}

struct BuildArgs {
  std::string input, output, alphabet, report;
  unsigned width = 8;
  std::size_t workers = 0;
  std::uint32_t l2_bits = wavelet::RankSelectParams::for_wavelet_tree().l2_bits;
  std::uint32_t sample_rate = wavelet::RankSelectParams::for_wavelet_tree().sample_rate;
};

int cmd_build(BuildArgs const& a, std::ostream& out) {
  wavelet::BuildOptions opt;
  opt.workers = a.workers;
  opt.symbol_width = a.width;
  opt.rank_select = {a.l2_bits, a.sample_rate};
  opt.rank_select.validate();

  auto const text = decode_symbols(read_file(a.input), a.width, a.input);
  auto const t0 = Clock::now();
  WaveletTree tree;
  if (a.alphabet.empty()) {
    tree = WaveletTree::build(text, opt);
  } else {
    auto symbols = decode_symbols(read_file(a.alphabet), a.width, a.alphabet);
    tree = WaveletTree::build(text, wavelet::AlphabetMap(std::move(symbols)), opt);
  }
  double const build_ms = ms_since(t0);

  auto const bytes = tree.to_bytes();
  {
    std::ofstream f(a.output, std::ios::binary);
    if (!f) throw DataError("cannot write " + a.output);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw DataError("cannot write " + a.output);
  }

  Report r("build");
  add_shape(r, tree);
  r.add_ms("build_ms", build_ms);
  add_storage(r, tree, bytes.size());
  r.print(out);
  if (!a.report.empty()) r.write_json(a.report);
  return kExitOk;
}

struct QueryArgs {
  std::string index, type, queries, output, report;
  std::size_t workers = 0;
  std::size_t chunk = wavelet::kDefaultChunkSize;
  bool sort = false;
};

int cmd_query(QueryArgs const& a, std::ostream& out) {
  auto const kind = *parse_kind(a.type);
  auto const tree = WaveletTree::load_file(a.index);

  std::ifstream in(a.queries);
  if (!in) throw DataError("cannot read " + a.queries);
  auto const file = parse_queries(in, kind, max_symbol(tree));

  BatchStats stats;
  auto const t0 = Clock::now();
  std::vector<std::uint64_t> results;
  try {
    results = execute(tree, file.batch, {a.workers, a.chunk}, a.sort, &stats);
  } catch (wavelet::BatchError const& e) {
    // With sorting the index refers to the sorted order; report the
    // earliest offending line instead by revalidating in input order.
    std::size_t idx = e.index();
    if (a.sort) {
      try {
        wavelet::run_batch(tree, file.batch, {1, 0});
      } catch (wavelet::BatchError const& inner) {
        idx = inner.index();
      }
    }
    throw ParseError(file.lines.at(idx), e.what());
  }
  double const total_ms = ms_since(t0);
  write_results(a.output, results, kind, tree.symbol_width());

  Report r("query");
  r.add("type", kind_name(kind));
  r.add("queries", results.size());
  r.add("chunks", stats.chunks);
  r.add_ms("stage_ms", stats.stage_ms);
  r.add_ms("process_ms", stats.process_ms);
  r.add_ms("total_ms", total_ms);
  r.add("throughput_qps", fixed(total_ms > 0 ? 1000.0 * double(results.size()) / total_ms : 0.0, 1));
  r.print(out);
  if (!a.report.empty()) r.write_json(a.report);
  return kExitOk;
}

struct BenchArgs {
  std::string index, type, output, report;
  std::size_t num = 0;
  std::uint64_t seed = 1;
  std::size_t workers = 0;
  std::size_t chunk = wavelet::kDefaultChunkSize;
  std::size_t iterations = 10;
};

int cmd_bench(BenchArgs const& a, std::ostream& out) {
  auto const kind = *parse_kind(a.type);
  auto const tree = WaveletTree::load_file(a.index);
  auto const batch = random_queries(tree, kind, a.num, a.seed);

  std::vector<double> times;
  std::vector<std::uint64_t> results;
  BatchStats stats;
  for (std::size_t it = 0; it < a.iterations; ++it) {
    auto const t0 = Clock::now();
    results = wavelet::run_batch(tree, batch, {a.workers, a.chunk}, &stats);
    times.push_back(ms_since(t0));
  }
  std::sort(times.begin(), times.end());
  double const median = times.size() % 2 ? times[times.size() / 2]
                                         : 0.5 * (times[times.size() / 2 - 1] + times[times.size() / 2]);
  if (!a.output.empty()) write_results(a.output, results, kind, tree.symbol_width());

  std::ostringstream sum;
  sum << std::hex << std::setw(16) << std::setfill('0') << checksum(results);

  Report r("bench");
  r.add("type", kind_name(kind));
  r.add("num", a.num);
  r.add("seed", a.seed);
  r.add("iterations", a.iterations);
  r.add("workers", wavelet::resolve_workers(a.workers));
  r.add_ms("median_ms", median);
  r.add_ms("min_ms", times.front());
  r.add("throughput_qps", fixed(median > 0 ? 1000.0 * double(a.num) / median : 0.0, 1));
  r.add("checksum", sum.str());
  r.print(out);
  if (!a.report.empty()) r.write_json(a.report);
  return kExitOk;
}

int cmd_stats(std::string const& index, std::string const& report, std::ostream& out) {
  auto const bytes = read_file(index);
  auto const tree = WaveletTree::from_bytes(bytes);
  Report r("stats");
  add_shape(r, tree);
  add_storage(r, tree, bytes.size());
  r.print(out);
  if (!report.empty()) r.write_json(report);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build, query and inspect wavelet tree indexes", "wtidx"};
  app.require_subcommand(1);
  auto const kinds = CLI::IsMember({"access", "rank", "select"});

  BuildArgs b;
  auto* build = app.add_subcommand("build", "Build an index from a symbol file");
  build->add_option("--input", b.input, "Text file of raw symbols")->required();
  build->add_option("--symbol-width", b.width, "Bits per symbol")->check(CLI::IsMember({8u, 16u}))->required();
  build->add_option("--output", b.output, "Index file to write")->required();
  build->add_option("--alphabet", b.alphabet, "File listing the alphabet, same encoding as the input");
  build->add_option("--workers", b.workers, "Worker threads, 0 = all cores");
  build->add_option("--l2-bits", b.l2_bits, "Small rank block size in bits");
  build->add_option("--sample-rate", b.sample_rate, "Select sample rate");
  build->add_option("--report", b.report, "Also write the report as JSON");

  QueryArgs q;
  auto* query = app.add_subcommand("query", "Answer a file of queries");
  query->add_option("--index", q.index, "Index file")->required();
  query->add_option("--type", q.type, "Query kind")->check(kinds)->required();
  query->add_option("--queries", q.queries, "Query file")->required();
  query->add_option("--output", q.output, "Result file, one line per query")->required();
  query->add_option("--workers", q.workers, "Worker threads, 0 = all cores");
  query->add_option("--chunk-size", q.chunk, "Queries per staged chunk, 0 = one chunk");
  query->add_flag("--sort-by-symbol", q.sort, "Group rank/select queries by symbol");
  query->add_option("--report", q.report, "Also write the report as JSON");

  BenchArgs be;
  auto* bench = app.add_subcommand("bench", "Time random valid queries");
  bench->add_option("--index", be.index, "Index file")->required();
  bench->add_option("--type", be.type, "Query kind")->check(kinds)->required();
  bench->add_option("--num", be.num, "Number of queries")->check(CLI::PositiveNumber)->required();
  bench->add_option("--seed", be.seed, "Query generator seed");
  bench->add_option("--workers", be.workers, "Worker threads, 0 = all cores");
  bench->add_option("--chunk-size", be.chunk, "Queries per staged chunk, 0 = one chunk");
  bench->add_option("--iterations", be.iterations, "Timed runs (at least 10)")->check(CLI::Range(std::size_t{10}, std::numeric_limits<std::size_t>::max()));
  bench->add_option("--output", be.output, "Write the results of the last run");
  bench->add_option("--report", be.report, "Also write the report as JSON");

  std::string stats_index, stats_report;
  auto* stats = app.add_subcommand("stats", "Print storage statistics of an index");
  stats->add_option("--index", stats_index, "Index file")->required();
  stats->add_option("--report", stats_report, "Also write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) return cmd_build(b, out);
    if (*query) return cmd_query(q, out);
    if (*bench) return cmd_bench(be, out);
    return cmd_stats(stats_index, stats_report, out);
  } catch (std::runtime_error const& e) {  // library, parse and file errors
    err << "error: " << e.what() << '\n';
  }
  return kExitData;
}

}  // namespace wtidx
