#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chromoseg/cli.hpp"

using namespace chromoseg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("chromoseg_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
  fs::path path;
};

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream log, err;
  const int rc = run_cli(args, log, err);
  if (err_text) *err_text = err.str();
  return rc;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

const char* kScoredInput =
    "chrom\tpos\tgt\tgt_conf\tcn\tcn_se\n"
    "1\t100\tAA\t3.0\t2.0\t1.0\n"
    "1\t200\tAB\t3.0\t2.1\t1.0\n";

}  // namespace

TEST_CASE("segment flags map onto the run config") {
  TempDir d;
  write(d.file("a.tsv"), kScoredInput);
  REQUIRE(run({"train-ref", "--synthetic", "--out", d.file("ref")}) == 0);
  const std::vector<std::string> args{"segment", "--model", "joint", "--ice", "--input", d.file("a.tsv"),
                                      "--ref", d.file("ref/reference.tsv"), "--out", d.file("out")};
  const auto rc = parse_config(args);
  CHECK(rc.command == Command::Segment);
  CHECK(rc.model == ModelKind::Joint);
  CHECK(rc.ice);
  CHECK(rc.out == d.file("out"));
  CHECK(rc.tracks.size() == 1);
  CHECK(rc.reference);
}

TEST_CASE("ice with scores and no reference is rejected") {
  TempDir d;
  write(d.file("a.tsv"), kScoredInput);
  const std::vector<std::string> args{"segment", "--ice", "--input", d.file("a.tsv"), "--out", d.file("out")};
  CHECK_THROWS_AS(parse_config(args), ConfigError);
  std::string err;
  CHECK(run(args, &err) == 1);
  CHECK(err.rfind("chromoseg: error: ", 0) == 0);
  CHECK(std::count(err.begin(), err.end(), '\n') == 1);
  CHECK_FALSE(fs::exists(d.file("out/segments.tsv")));
}

TEST_CASE("flags override the config file") {
  TempDir d;
  write(d.file("run.conf"), "# sim settings\nseed = 3\nn-snps = 800\nepsilon = 0.3\n");
  const std::vector<std::string> args{"simulate", "--config", d.file("run.conf"), "--seed", "9",
                                      "--out", d.file("o")};
  const auto rc = parse_config(args);
  CHECK(rc.seed == 9);
  CHECK(rc.sim.seed == 9);
  CHECK(rc.sim.n_snps == 800);
  CHECK(rc.sim.epsilon == 0.3);
}

TEST_CASE("config errors") {
  TempDir d;
  auto fails = [](std::vector<std::string> a) {
    CHECK_THROWS_AS(parse_config(a), ConfigError);
  };
  fails({"simulate", "--bogus", "1", "--out", d.file("o")});
  fails({"simulate", "--sizes", "2", "--out", d.file("o")});  // bench-only key
  fails({"simulate", "--seed", "x", "--out", d.file("o")});
  fails({"simulate"});
  fails({"frobnicate", "--out", d.file("o")});
  fails({"segment", "--out", d.file("o")});
  write(d.file("bad.conf"), "seed 3\n");
  fails({"simulate", "--config", d.file("bad.conf"), "--out", d.file("o")});
  write(d.file("cn.tsv"), "chrom\tpos\tcn\n1\t5\t2.0\n");
  fails({"segment", "--model", "gt", "--input", d.file("cn.tsv"), "--out", d.file("o")});
  fails({"segment", "--model", "cn", "--input", d.file("cn.tsv"), "--initial-probs", "0.5,0.5",
         "--out", d.file("o")});
  std::string err;
  CHECK(run({"segment", "--input", d.file("missing.tsv"), "--out", d.file("o")}, &err) == 1);
  CHECK(err.find("missing.tsv") != std::string::npos);
}

TEST_CASE("config text parsing") {
  const auto kv = parse_config_text("a = 1\n\n# c\n  distance-scale-bp=5e7  \nlast = x");
  CHECK(kv.at("a") == "1");
  CHECK(kv.at("distance_scale_bp") == "5e7");
  CHECK(kv.at("last") == "x");
  CHECK_THROWS_AS(parse_config_text("novalue\n"), ConfigError);
}

TEST_CASE("bench writes one delta row per method, K, size and replicate") {
  TempDir d;
  REQUIRE(run({"bench", "--datasets-per-size", "2", "--sizes", "2,3", "--null-arms", "3",
               "--out", d.file("b")}) == 0);
  const auto deltas = data_lines(slurp(d.file("b/delta_loglik.csv")));
  REQUIRE(deltas.size() == 1 + 2 * 2 * 2 * 4);
  CHECK(deltas[0] == "method,K,size,replicate,delta");
  const auto fp = data_lines(slurp(d.file("b/fp_counts.csv")));
  CHECK(fp.size() == 1 + 2 * 3);
  CHECK(fp[0] == "method,arm,spurious_segments,spurious_snps");
  CHECK(slurp(d.file("b/delta_loglik.csv")).rfind("# chromoseg 0.1.0 bench seed=1 ", 0) == 0);
}

TEST_CASE("seed-7 simulated chromosome decodes region B under the joint ice model") {
  TempDir d;
  REQUIRE(run({"simulate", "--seed", "7", "--out", d.file("sim")}) == 0);
  REQUIRE(run({"train-ref", "--synthetic", "--out", d.file("ref")}) == 0);
  REQUIRE(run({"segment", "--model", "joint", "--ice", "--input", d.file("sim/simulated.tsv"), "--ref",
               d.file("ref/reference.tsv"), "--out", d.file("seg")}) == 0);

  // region-B positions from the truth table
  std::vector<std::int64_t> b;
  for (const auto& line : data_lines(slurp(d.file("sim/truth.tsv")))) {
    std::istringstream row(line);
    std::string chrom, pos, state, region;
    row >> chrom >> pos >> state >> region;
    if (region == "B") b.push_back(std::stoll(pos));
  }
  REQUIRE(b.size() == 100);
  std::vector<std::pair<std::string, int>> rows;
  for (const auto& line : data_lines(slurp(d.file("seg/segments.tsv")))) {
    std::istringstream row(line);
    std::string chrom, start, end, state, n;
    row >> chrom >> start >> end >> state >> n;
    if (chrom == "chrom") continue;
    const auto s = std::stoll(start), e = std::stoll(end);
    if (e >= b.front() && s <= b.back()) rows.emplace_back(state, std::stoi(n));
  }
  CHECK(rows == std::vector<std::pair<std::string, int>>{{"deletion", 49}, {"normal", 2}, {"deletion", 49}});
  const auto summary = slurp(d.file("seg/run_summary.tsv"));
  CHECK(summary.find("cn_sigma\t") != std::string::npos);
  CHECK(summary.find("loglik_total\t") != std::string::npos);
  CHECK(data_lines(slurp(d.file("seg/per_snp.tsv"))).size() == 9166);
}

TEST_CASE("a failed run leaves no outputs behind") {
  TempDir d;
  write(d.file("a.tsv"), kScoredInput);
  fs::create_directories(d.path / "out" / "per_snp.tsv" / "blocker");
  std::string err;
  CHECK(run({"segment", "--input", d.file("a.tsv"), "--cn-sigma", "0.25", "--out", d.file("out")}, &err) == 1);
  std::vector<std::string> left;
  for (const auto& e : fs::directory_iterator(d.path / "out")) left.push_back(e.path().filename().string());
  CHECK(left == std::vector<std::string>{"per_snp.tsv"});
}

TEST_CASE("every output begins with the reproducibility header") {
  TempDir d;
  REQUIRE(run({"simulate", "--seed", "5", "--n-snps", "800", "--out", d.file("s")}) == 0);
  for (const char* f : {"s/simulated.tsv", "s/truth.tsv"})
    CHECK(slurp(d.file(f)).rfind("# chromoseg 0.1.0 simulate seed=5", 0) == 0);
}
