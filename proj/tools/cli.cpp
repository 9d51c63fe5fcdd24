#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>

#include "tneat/checkpoint.hpp"
#include "tneat/config.hpp"
#include "tneat/error.hpp"
#include "tneat/execution.hpp"
#include "tneat/genome_io.hpp"
#include "tneat/neat.hpp"
#include "tneat/network.hpp"
#include "tneat/problems.hpp"
#include "tneat/text.hpp"

namespace tneat::cli {

namespace fs = std::filesystem;

namespace {

// Loads the config, applies TNEAT_SEED and fills inputs/outputs from the
// selected problem.
NeatConfig load_run_config(const fs::path& path) {
  NeatConfig config = load_config(path);
  if (const char* env = std::getenv("TNEAT_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t seed = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto [ptr, ec] = std::from_chars(env, end, seed);
    if (ec != std::errc() || ptr != end) {
      throw ConfigError(std::string("TNEAT_SEED is not an unsigned integer: '") + env + "'");
    }
    config.seed = seed;
  }
  return resolve_io(config, *make_problem(config));
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw Error("cannot write " + path.string());
}

std::string describe_genome(GenomeView g) {
  const auto& registry = FunctionRegistry::builtin();
  const LiveCounts counts = count_live(g);
  std::string s;
  s += "inputs " + std::to_string(g.num_inputs()) + ", outputs " +
       std::to_string(g.num_outputs()) + "\n";
  s += "live nodes " + std::to_string(counts.nodes) + " of " + std::to_string(g.max_nodes()) +
       ", live connections " + std::to_string(counts.conns) + " of " +
       std::to_string(g.max_conns()) + "\n";
  s += "nodes:\n";
  for (std::size_t r = 0; r < g.max_nodes(); ++r) {
    if (!g.node_live(r)) continue;
    const NodeRow n = g.node_row(r);
    const char* role = g.is_input_key(n.key) ? "input" : g.is_output_key(n.key) ? "output"
                                                                               : "hidden";
    s += "  " + std::to_string(n.key) + " " + role + " bias=" + text::format_double(n.bias) +
         " response=" + text::format_double(n.response) +
         " aggregation=" + registry.aggregation_name(n.aggregation) +
         " activation=" + registry.activation_name(n.activation) + "\n";
  }
  s += "connections:\n";
  for (std::size_t r = 0; r < g.max_conns(); ++r) {
    if (!g.conn_live(r)) continue;
    const ConnRow c = g.conn_row(r);
    s += "  " + std::to_string(c.in_key) + " -> " + std::to_string(c.out_key) +
         " weight=" + text::format_double(c.weight) + (c.enabled ? "" : " (disabled)") + "\n";
  }
  return s;
}

std::string render(GenomeView g, const std::string& format) {
  if (format == "dot") return to_dot(g, FunctionRegistry::builtin());
  if (format == "text") return serialize_genome(g);
  if (format == "summary") return describe_genome(g);
  throw InvalidInput("unknown format '" + format + "'");
}

}  // namespace

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    NeatConfig config = load_run_config(opts.config);
    set_thread_count(opts.threads);
    const auto problem = make_problem(config);
    const auto& registry = FunctionRegistry::builtin();

    EvolutionState state;
    if (opts.resume) {
      state = load_checkpoint(*opts.resume);
      // Only the stopping rule may change between the original run and a resume.
      NeatConfig expected = state.config;
      expected.generation_limit = config.generation_limit;
      expected.fitness_target = config.fitness_target;
      if (to_text(expected) != to_text(config)) {
        throw ConfigError("config differs from the checkpoint beyond generation_limit and "
                          "fitness_target");
      }
      state.config = config;
    } else {
      state = initialize(config);
    }

    fs::create_directories(opts.out_dir);
    const fs::path stats_path = opts.out_dir / kStatsFile;
    std::ofstream stats(stats_path, opts.resume ? std::ios::app : std::ios::trunc);
    if (!stats) throw Error("cannot write " + stats_path.string());
    if (!opts.resume) stats << stats_csv_header() << '\n';

    const RunResult result = run(state, *problem, registry, Execution::parallel,
                                 [&](const GenerationStats& s) {
                                   stats << stats_csv_row(s, opts.timing) << '\n';
                                   stats.flush();
                                   if (!opts.quiet) {
                                     out << "generation " << s.generation << ": best "
                                         << text::format_double(s.best_fitness) << ", species "
                                         << s.species_count << '\n';
                                   }
                                 });
    if (!stats) throw Error("failed writing " + stats_path.string());

    save_genome(opts.out_dir / kBestGenomeFile, result.best);
    save_checkpoint(opts.out_dir / kCheckpointFile, state);
    const bool reached = result.reason == StopReason::target_reached;
    if (!opts.quiet) {
      out << (reached ? "fitness target reached" : "generation limit reached")
          << " at generation " << state.generation << ", best fitness "
          << text::format_double(result.best_fitness) << '\n';
    }
    return reached ? kExitTargetReached : kExitGenerationLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    NeatConfig base = load_run_config(opts.config);
    set_thread_count(opts.threads);
    if (opts.pop_sizes.empty()) throw ConfigError("--pop-sizes must list at least one size");
    if (opts.generations < 1) throw ConfigError("--generations must be >= 1");
    base.fitness_target = std::numeric_limits<double>::infinity();
    base.generation_limit = opts.generations;
    const auto problem = make_problem(base);
    const auto& registry = FunctionRegistry::builtin();

    fs::create_directories(opts.out_dir);
    const fs::path path = opts.out_dir / kBenchFile;
    std::ofstream csv(path, std::ios::trunc);
    if (!csv) throw Error("cannot write " + path.string());
    csv << "pop_size,generation,tensorized_seconds,sequential_seconds\n";

    for (int pop_size : opts.pop_sizes) {
      NeatConfig config = base;
      config.pop_size = pop_size;
      std::vector<double> times[2];
      const Execution modes[2] = {Execution::parallel, Execution::serial};
      for (int m = 0; m < 2; ++m) {
        EvolutionState state = initialize(config, modes[m]);
        for (int g = 0; g < opts.generations; ++g) {
          times[m].push_back(evolve_step(state, *problem, registry, modes[m]).elapsed_seconds);
        }
      }
      double total[2] = {0.0, 0.0};
      for (int g = 0; g < opts.generations; ++g) {
        const auto gi = static_cast<std::size_t>(g);
        csv << pop_size << ',' << g << ',' << text::format_double(times[0][gi]) << ','
            << text::format_double(times[1][gi]) << '\n';
        total[0] += times[0][gi];
        total[1] += times[1][gi];
      }
      out << "pop " << pop_size << ": tensorized " << text::format_double(total[0])
          << " s, sequential " << text::format_double(total[1]) << " s\n";
    }
    if (!csv) throw Error("failed writing " + path.string());
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_inspect(const InspectOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const GenomeTensors g = load_genome(opts.genome);
    out << render(g, opts.format);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_export(const ExportOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const EvolutionState state = load_checkpoint(opts.checkpoint);
    const PopulationTensors& pop = state.population;
    std::size_t index = 0;
    if (opts.index) {
      index = *opts.index;
      if (index >= pop.size()) {
        throw InvalidInput("index " + std::to_string(index) + " out of range (population " +
                           std::to_string(pop.size()) + ")");
      }
    } else if (state.evaluated) {
      index = best_index(pop);
    }
    write_file(opts.out, render(pop.genome(index), opts.format));
    out << "exported genome " << index << " to " << opts.out.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int main_with_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tensorized NEAT experiments"};
  app.require_subcommand(1);

  RunOptions run_opts;
  std::string resume;
  bool no_timing = false;
  auto* run = app.add_subcommand("run", "evolve a population from a config file");
  run->add_option("--config", run_opts.config, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_opts.out_dir, "output directory")->required();
  run->add_option("--threads", run_opts.threads, "worker threads (0 = default)");
  run->add_option("--resume", resume, "checkpoint to continue from")->check(CLI::ExistingFile);
  run->add_flag("--no-timing", no_timing, "write 0 in the elapsed_seconds column");
  run->add_flag("--quiet", run_opts.quiet, "no progress output");

  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "time tensorized vs sequential generations");
  bench->add_option("--config", bench_opts.config, "config file")
      ->required()
      ->check(CLI::ExistingFile);
  bench->add_option("--pop-sizes", bench_opts.pop_sizes, "comma-separated population sizes")
      ->required()
      ->delimiter(',');
  bench->add_option("--generations", bench_opts.generations, "generations per size");
  bench->add_option("--out", bench_opts.out_dir, "output directory")->required();
  bench->add_option("--threads", bench_opts.threads, "worker threads (0 = default)");

  InspectOptions inspect_opts;
  auto* inspect = app.add_subcommand("inspect", "print a genome file");
  inspect->add_option("--genome", inspect_opts.genome, "genome file")->required();
  inspect->add_option("--format", inspect_opts.format,
                      "text (genome document), dot, or summary")
      ->check(CLI::IsMember({"dot", "text", "summary"}));

  ExportOptions export_opts;
  std::size_t index = 0;
  auto* exp = app.add_subcommand("export", "write one genome of a checkpoint");
  exp->add_option("--checkpoint", export_opts.checkpoint, "checkpoint file")->required();
  exp->add_option("--out", export_opts.out, "destination file")->required();
  auto* index_opt = exp->add_option("--index", index, "population index (default: best)");
  exp->add_option("--format", export_opts.format, "text or dot")
      ->check(CLI::IsMember({"dot", "text"}));

  std::vector<const char*> argv{"tneat"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : kExitError;
  }

  if (*run) {
    if (!resume.empty()) run_opts.resume = resume;
    run_opts.timing = !no_timing;
    return cmd_run(run_opts, out, err);
  }
  if (*bench) return cmd_bench(bench_opts, out, err);
  if (*inspect) return cmd_inspect(inspect_opts, out, err);
  if (*index_opt) export_opts.index = index;
  return cmd_export(export_opts, out, err);
}

}  // namespace tneat::cli
