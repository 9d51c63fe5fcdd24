#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tneat::cli {

// Exit codes of `run`.
inline constexpr int kExitTargetReached = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitGenerationLimit = 2;

struct RunOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  int threads = 0;  ///< <= 0: OpenMP default
  std::optional<std::filesystem::path> resume;
  bool timing = true;
  bool quiet = false;
};

struct BenchOptions {
  std::filesystem::path config;
  std::vector<int> pop_sizes;
  int generations = 20;
  std::filesystem::path out_dir;
  int threads = 0;
};

struct InspectOptions {
  std::filesystem::path genome;
  std::string format = "text";
};

struct ExportOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path out;
  std::optional<std::size_t> index;  ///< default: best by fitness, else 0
  std::string format = "text";
};

/// Artifacts written by `run` into the output directory.
inline constexpr const char* kStatsFile = "stats.csv";
inline constexpr const char* kBestGenomeFile = "best_genome.txt";
inline constexpr const char* kCheckpointFile = "checkpoint.json";
inline constexpr const char* kBenchFile = "bench.csv";

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);
int cmd_inspect(const InspectOptions& opts, std::ostream& out, std::ostream& err);
int cmd_export(const ExportOptions& opts, std::ostream& out, std::ostream& err);

/// Full command-line entry point. args excludes the program name.
int main_with_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tneat::cli
