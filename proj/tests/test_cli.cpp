#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "wtidx/cli.hpp"
#include "wtidx/query_file.hpp"

namespace fs = std::filesystem;
using namespace wtidx;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "wtidx");
  std::vector<char const*> argv;
  for (auto const& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int const code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("wtidx_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(std::string const& name, std::string const& content) const {
    auto p = (path / name).string();
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
  std::string file(std::string const& name) const { return (path / name).string(); }
};

std::string slurp(std::string const& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string value(std::string const& report, std::string const& key) {
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

}  // namespace

TEST_CASE("symbol grammar") {
  CHECK(parse_symbol("c", 255) == 'c');
  CHECK(parse_symbol("99", 255) == 99);
  CHECK(parse_symbol("7", 255) == 7);
  CHECK(parse_symbol(",", 255) == ',');
  CHECK_FALSE(parse_symbol("256", 255));
  CHECK(parse_symbol("256", 65535) == 256);
  CHECK_FALSE(parse_symbol("ab", 255));
  CHECK_FALSE(parse_symbol("", 255));

  CHECK(format_symbol('c', 8) == "c");
  CHECK(format_symbol('7', 8) == "55");
  CHECK(format_symbol(',', 8) == "44");
  CHECK(format_symbol(' ', 8) == "32");
  CHECK(format_symbol('c', 16) == "99");
}

TEST_CASE("query file parsing") {
  std::istringstream in("# header\n\nc,6\n 99 , 2 \r\n,,1\n");
  auto f = parse_queries(in, wavelet::QueryKind::rank, 255);
  auto const& q = std::get<std::vector<wavelet::RankQuery>>(f.batch.queries);
  REQUIRE(q.size() == 3);
  CHECK(q[0] == wavelet::RankQuery{'c', 6});
  CHECK(q[1] == wavelet::RankQuery{'c', 2});
  CHECK(q[2] == wavelet::RankQuery{',', 1});
  CHECK(f.lines == std::vector<std::size_t>{3, 4, 5});

  std::istringstream bad("1\n2\nx\n");
  try {
    parse_queries(bad, wavelet::QueryKind::access, 255);
    FAIL("expected parse error");
  } catch (ParseError const& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("build and query the example text") {
  TempDir dir;
  auto input = dir.write("text.bin", "dbdcaacbcd");
  auto index = dir.file("text.wtidx");
  auto b = cli({"build", "--input", input, "--symbol-width", "8", "--output", index, "--workers", "2"});
  REQUIRE(b.code == 0);
  CHECK(value(b.out, "n") == "10");
  CHECK(value(b.out, "sigma") == "4");
  CHECK(value(b.out, "levels") == "2");

  auto run_query = [&](std::string type, std::string content) {
    auto qf = dir.write(type + ".q", content);
    auto of = dir.file(type + ".out");
    auto r = cli({"query", "--index", index, "--type", type, "--queries", qf, "--output", of});
    REQUIRE(r.code == 0);
    return slurp(of);
  };
  CHECK(run_query("access", "6\n") == "c\n");
  CHECK(run_query("rank", "c,6\n") == "1\n");
  CHECK(run_query("select", "c,2\n") == "6\n");
  CHECK(run_query("access", "# all\n0\n1\n2\n3\n4\n5\n6\n7\n8\n9\n") == "d\nb\nd\nc\na\na\nc\nb\nc\nd\n");

  auto s = cli({"stats", "--index", index});
  REQUIRE(s.code == 0);
  CHECK(value(s.out, "index_bytes") == std::to_string(fs::file_size(index)));
  CHECK(value(s.out, "level_bits") == "20");
}

TEST_CASE("errors and exit codes") {
  TempDir dir;
  auto empty = dir.write("empty.bin", "");
  CHECK(cli({"build", "--input", empty, "--symbol-width", "8", "--output", dir.file("e.wtidx")}).code == 2);

  auto text = dir.write("text.bin", "abcz");
  auto alpha = dir.write("alpha.bin", "abcd");
  auto r = cli({"build", "--input", text, "--symbol-width", "8", "--output", dir.file("a.wtidx"), "--alphabet", alpha});
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown symbol") != std::string::npos);

  auto odd = dir.write("odd.bin", "abc");
  CHECK(cli({"build", "--input", odd, "--symbol-width", "16", "--output", dir.file("o.wtidx")}).code == 2);
  CHECK(cli({"build", "--input", odd, "--symbol-width", "12", "--output", dir.file("o.wtidx")}).code == 1);
  CHECK(cli({"build", "--input", dir.file("missing"), "--symbol-width", "8", "--output", dir.file("m.wtidx")}).code == 2);
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"--help"}).code == 0);

  auto input = dir.write("t.bin", "dbdcaacbcd");
  auto index = dir.file("t.wtidx");
  REQUIRE(cli({"build", "--input", input, "--symbol-width", "8", "--output", index}).code == 0);
  auto qf = dir.write("q", "c,1\nc,2\nc,3\nc,4\n");
  auto bad = cli({"query", "--index", index, "--type", "select", "--queries", qf, "--output", dir.file("o")});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 4") != std::string::npos);
  auto bad_sorted = cli({"query", "--index", index, "--type", "select", "--queries", dir.write("q2", "a,1\nz,1\nb,9\n"),
                         "--output", dir.file("o"), "--sort-by-symbol"});
  CHECK(bad_sorted.code == 2);
  CHECK(bad_sorted.err.find("line 2") != std::string::npos);
  CHECK(cli({"bench", "--index", index, "--type", "rank", "--num", "0"}).code == 1);
  CHECK(cli({"stats", "--index", input}).code == 2);
}

TEST_CASE("16-bit input and explicit alphabet") {
  TempDir dir;
  std::string bytes;
  for (std::uint16_t v : {1000, 7, 1000, 300}) {
    bytes.push_back(static_cast<char>(v & 0xFF));
    bytes.push_back(static_cast<char>(v >> 8));
  }
  std::string alpha;
  for (std::uint16_t v : {7, 300, 500, 1000}) {
    alpha.push_back(static_cast<char>(v & 0xFF));
    alpha.push_back(static_cast<char>(v >> 8));
  }
  auto index = dir.file("w.wtidx");
  auto b = cli({"build", "--input", dir.write("w.bin", bytes), "--symbol-width", "16", "--output", index, "--alphabet",
                dir.write("a.bin", alpha), "--report", dir.file("r.json")});
  REQUIRE(b.code == 0);
  CHECK(value(b.out, "sigma") == "4");
  CHECK(slurp(dir.file("r.json")).find("\"command\": \"build\"") != std::string::npos);

  auto out = dir.file("o");
  REQUIRE(cli({"query", "--index", index, "--type", "access", "--queries", dir.write("q", "0\n1\n3\n"), "--output", out})
              .code == 0);
  CHECK(slurp(out) == "1000\n7\n300\n");
  REQUIRE(cli({"query", "--index", index, "--type", "rank", "--queries", dir.write("r", "1000,4\n500,4\n"), "--output",
               out}).code == 0);
  CHECK(slurp(out) == "2\n0\n");
}

TEST_CASE("sorting and worker counts leave output unchanged") {
  TempDir dir;
  auto text = wavelet::testing::random_text<std::uint8_t>(20'000, 200, 3);
  std::string bytes(text.begin(), text.end());
  auto index = dir.file("r.wtidx");
  REQUIRE(cli({"build", "--input", dir.write("r.bin", bytes), "--symbol-width", "8", "--output", index}).code == 0);

  std::string queries;
  for (std::size_t j = 0; j < 3000; ++j) {
    queries += std::to_string(text[(j * 7919) % text.size()]) + "," + std::to_string((j * 104729) % 20'001) + "\n";
  }
  auto qf = dir.write("q", queries);
  std::string reference;
  for (std::string workers : {"1", "2", "8"}) {
    for (bool sort : {false, true}) {
      auto of = dir.file("o" + workers + (sort ? "s" : ""));
      std::vector<std::string> args{"query", "--index", index, "--type", "rank", "--queries", qf, "--output", of,
                                    "--workers", workers, "--chunk-size", "37"};
      if (sort) args.push_back("--sort-by-symbol");
      REQUIRE(cli(args).code == 0);
      if (reference.empty()) reference = slurp(of);
      CHECK(slurp(of) == reference);
    }
  }
}

TEST_CASE("bench is reproducible for a seed") {
  TempDir dir;
  auto index = dir.file("b.wtidx");
  REQUIRE(cli({"build", "--input", dir.write("b.bin", "mississippi river banks"), "--symbol-width", "8", "--output",
               index}).code == 0);
  for (std::string type : {"access", "rank", "select"}) {
    auto a = cli({"bench", "--index", index, "--type", type, "--num", "1000", "--seed", "42", "--output", dir.file("a")});
    auto b = cli({"bench", "--index", index, "--type", type, "--num", "1000", "--seed", "42", "--workers", "3",
                  "--output", dir.file("b")});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(value(a.out, "checksum") == value(b.out, "checksum"));
    CHECK(value(a.out, "iterations") == "10");
    CHECK(slurp(dir.file("a")) == slurp(dir.file("b")));
  }
}

TEST_CASE("stats overheads on a half-full binary text") {
  TempDir dir;
  auto bits = wavelet::testing::random_bits(2'000'000, 0.5, 11);
  std::string bytes;
  for (bool b : bits) bytes.push_back(b ? 'b' : 'a');
  auto input = dir.write("bin.txt", bytes);

  auto index = dir.file("s.wtidx");
  REQUIRE(cli({"build", "--input", input, "--symbol-width", "8", "--output", index, "--l2-bits", "512", "--sample-rate",
               "16384"}).code == 0);
  auto s = cli({"stats", "--index", index});
  REQUIRE(s.code == 0);
  CHECK(std::abs(std::stod(value(s.out, "rank_overhead_pct")) - 3.22) <= 0.05);
  CHECK(std::abs(std::stod(value(s.out, "total_overhead_pct")) - 3.6) <= 0.1);

  REQUIRE(cli({"build", "--input", input, "--symbol-width", "8", "--output", index, "--sample-rate", "4096"}).code == 0);
  s = cli({"stats", "--index", index});
  CHECK(std::abs(std::stod(value(s.out, "total_overhead_pct")) - 4.8) <= 0.1);
  CHECK(cli({"build", "--input", input, "--symbol-width", "8", "--output", index, "--l2-bits", "100"}).code == 2);
}
