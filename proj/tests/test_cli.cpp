#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "cli.hpp"
#include "tneat/checkpoint.hpp"
#include "tneat/genome_io.hpp"

using namespace tneat;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tneat_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << body;
  return p;
}

const char* kXor =
    "problem = xor\n"
    "pop_size = 40\n"
    "generation_limit = 6\n"
    "seed = 3\n";

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::main_with_args(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("run: generation limit exit code and artifacts") {
  const fs::path dir = scratch("limit");
  const fs::path cfg = write_config(dir, kXor);
  const Result r = invoke({"run", "--config", cfg.string(), "--out", (dir / "out").string()});
  CHECK(r.code == cli::kExitGenerationLimit);
  const std::string stats = slurp(dir / "out" / cli::kStatsFile);
  CHECK(stats.rfind("generation,best_fitness,mean_fitness,species_count,mean_live_nodes,"
                    "mean_live_conns,elapsed_seconds\n",
                    0) == 0);
  CHECK(count_lines(stats) == 1 + 6);
  CHECK_NOTHROW(load_genome(dir / "out" / cli::kBestGenomeFile));
  CHECK(load_checkpoint(dir / "out" / cli::kCheckpointFile).generation == 5);
}

TEST_CASE("run: reaching the target exits 0") {
  const fs::path dir = scratch("target");
  const fs::path cfg = write_config(dir, std::string(kXor) + "fitness_target = 1.0\n");
  const Result r = invoke({"run", "--config", cfg.string(), "--out", (dir / "out").string(),
                        "--quiet"});
  CHECK(r.code == cli::kExitTargetReached);
  CHECK(r.out.empty());
  CHECK(count_lines(slurp(dir / "out" / cli::kStatsFile)) <= 1 + 6);
}

TEST_CASE("run: configuration errors exit 1") {
  const fs::path dir = scratch("errors");
  CHECK(invoke({"run", "--config", write_config(dir, "pop_sise = 10\n").string(), "--out",
             (dir / "a").string()})
            .code == cli::kExitError);
  const Result rec = invoke({"run", "--config",
                          write_config(dir, std::string(kXor) + "network_type = recurrent\n")
                              .string(),
                          "--out", (dir / "b").string()});
  CHECK(rec.code == cli::kExitError);
  CHECK(rec.err.find("error:") != std::string::npos);
  CHECK(invoke({"run", "--config", (dir / "missing.cfg").string(), "--out", (dir / "c").string()})
            .code == cli::kExitError);
  CHECK(invoke({"frobnicate"}).code != 0);
}

TEST_CASE("run: reruns are byte identical and thread count does not matter") {
  const fs::path dir = scratch("determinism");
  const fs::path cfg = write_config(dir, kXor);
  std::vector<std::string> stats, best;
  for (const char* threads : {"1", "8", "1"}) {
    const fs::path out = dir / ("t" + std::string(threads) + std::to_string(stats.size()));
    REQUIRE(invoke({"run", "--config", cfg.string(), "--out", out.string(), "--threads", threads,
                 "--no-timing", "--quiet"})
                .code == cli::kExitGenerationLimit);
    stats.push_back(slurp(out / cli::kStatsFile));
    best.push_back(slurp(out / cli::kBestGenomeFile));
  }
  CHECK(stats[0] == stats[1]);
  CHECK(stats[0] == stats[2]);
  CHECK(best[0] == best[1]);
  CHECK(best[0] == best[2]);
}

TEST_CASE("run: the seed can be overridden from the environment") {
  const fs::path dir = scratch("seed");
  const fs::path cfg = write_config(dir, kXor);
  auto stats_with = [&](const char* seed, const char* name) {
    if (seed) {
      setenv("TNEAT_SEED", seed, 1);
    } else {
      unsetenv("TNEAT_SEED");
    }
    const Result r = invoke({"run", "--config", cfg.string(), "--out", (dir / name).string(),
                          "--no-timing", "--quiet"});
    unsetenv("TNEAT_SEED");
    REQUIRE(r.code == cli::kExitGenerationLimit);
    return slurp(dir / name / cli::kStatsFile);
  };
  CHECK(stats_with(nullptr, "plain") == stats_with("3", "same"));
  CHECK(stats_with(nullptr, "plain2") != stats_with("4", "other"));
  setenv("TNEAT_SEED", "x1", 1);
  CHECK(invoke({"run", "--config", cfg.string(), "--out", (dir / "bad").string()}).code ==
        cli::kExitError);
  unsetenv("TNEAT_SEED");
}

TEST_CASE("run: resume continues the original trajectory") {
  const fs::path dir = scratch("resume");
  const fs::path whole = write_config(dir, kXor);
  REQUIRE(invoke({"run", "--config", whole.string(), "--out", (dir / "whole").string(),
               "--no-timing", "--quiet"})
              .code == cli::kExitGenerationLimit);

  const fs::path part_cfg = dir / "part.cfg";
  std::ofstream(part_cfg) << "problem = xor\npop_size = 40\ngeneration_limit = 2\nseed = 3\n";
  REQUIRE(invoke({"run", "--config", part_cfg.string(), "--out", (dir / "part").string(),
               "--no-timing", "--quiet"})
              .code == cli::kExitGenerationLimit);
  const Result r = invoke({"run", "--config", whole.string(), "--out", (dir / "part").string(),
                        "--resume", (dir / "part" / cli::kCheckpointFile).string(),
                        "--no-timing", "--quiet"});
  REQUIRE(r.code == cli::kExitGenerationLimit);
  CHECK(slurp(dir / "part" / cli::kStatsFile) == slurp(dir / "whole" / cli::kStatsFile));
  CHECK(slurp(dir / "part" / cli::kBestGenomeFile) == slurp(dir / "whole" / cli::kBestGenomeFile));

  const fs::path other = dir / "other.cfg";
  std::ofstream(other) << "problem = xor\npop_size = 41\ngeneration_limit = 6\nseed = 3\n";
  CHECK(invoke({"run", "--config", other.string(), "--out", (dir / "x").string(), "--resume",
             (dir / "part" / cli::kCheckpointFile).string()})
            .code == cli::kExitError);
}

TEST_CASE("inspect renders a fresh genome as dot") {
  const fs::path dir = scratch("inspect");
  NeatConfig c;
  c.inputs = 3;
  c.outputs = 2;
  GenomeTensors g = init_genome(c, RngStream(0));
  g = set_conn_attr(g, 0, 3, conn_attr::enabled, 0.0);
  save_genome(dir / "g.txt", g);
  const Result r = invoke({"inspect", "--genome", (dir / "g.txt").string(), "--format", "dot"});
  REQUIRE(r.code == 0);
  const std::regex node(R"(^\s*n\d+ \[)"), edge(R"(->)");
  std::size_t nodes = 0, edges = 0, dashed = 0;
  std::istringstream lines(r.out);
  for (std::string line; std::getline(lines, line);) {
    if (std::regex_search(line, node)) ++nodes;
    if (std::regex_search(line, edge)) {
      ++edges;
      dashed += line.find("dashed") != std::string::npos;
    }
  }
  CHECK(nodes == 5);
  CHECK(edges == 6);
  CHECK(dashed == 1);

  const Result text = invoke({"inspect", "--genome", (dir / "g.txt").string()});
  CHECK(text.code == 0);
  CHECK(text.out == slurp(dir / "g.txt"));
  const Result summary =
      invoke({"inspect", "--genome", (dir / "g.txt").string(), "--format", "summary"});
  CHECK(summary.code == 0);
  CHECK(summary.out.find("live nodes 5") != std::string::npos);
}

TEST_CASE("inspect rejects malformed genomes") {
  const fs::path dir = scratch("inspect_bad");
  std::ofstream(dir / "bad.txt") << "this is not a genome\n";
  const Result r = invoke({"inspect", "--genome", (dir / "bad.txt").string()});
  CHECK(r.code != 0);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("bench writes one row per generation and population size") {
  const fs::path dir = scratch("bench");
  const fs::path cfg = write_config(dir, "problem = xor\nseed = 1\n");
  const Result r = invoke({"bench", "--config", cfg.string(), "--pop-sizes", "30,50",
                        "--generations", "3", "--out", (dir / "out").string()});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(dir / "out" / cli::kBenchFile);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "pop_size,generation,tensorized_seconds,sequential_seconds");
  std::vector<std::string> rows;
  for (std::string line; std::getline(lines, line);) rows.push_back(line);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].rfind("30,0,", 0) == 0);
  CHECK(rows[5].rfind("50,2,", 0) == 0);
  for (const auto& row : rows) CHECK(std::count(row.begin(), row.end(), ',') == 3);
}

TEST_CASE("export extracts a genome from a checkpoint") {
  const fs::path dir = scratch("export");
  const fs::path cfg = write_config(dir, kXor);
  REQUIRE(invoke({"run", "--config", cfg.string(), "--out", (dir / "run").string(), "--quiet"})
              .code == cli::kExitGenerationLimit);
  const fs::path ckpt = dir / "run" / cli::kCheckpointFile;
  REQUIRE(invoke({"export", "--checkpoint", ckpt.string(), "--out", (dir / "best.txt").string()})
              .code == 0);
  CHECK(slurp(dir / "best.txt") == slurp(dir / "run" / cli::kBestGenomeFile));
  REQUIRE(invoke({"export", "--checkpoint", ckpt.string(), "--out", (dir / "g7.dot").string(),
               "--index", "7", "--format", "dot"})
              .code == 0);
  CHECK(slurp(dir / "g7.dot").rfind("digraph", 0) == 0);
  CHECK(invoke({"export", "--checkpoint", ckpt.string(), "--out", (dir / "x.txt").string(),
             "--index", "40"})
            .code != 0);
}
