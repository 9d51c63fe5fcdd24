#include "tneat/neat.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "tneat/error.hpp"
#include "tneat/network.hpp"
#include "tneat/reproduction.hpp"
#include "tneat/rng.hpp"
#include "tneat/text.hpp"

namespace tneat {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RngStream stage_stream(const EvolutionState& state, Stage stage) {
  return RngStream(state.config.seed, {static_cast<std::uint64_t>(state.generation),
                                       static_cast<std::uint64_t>(stage)});
}

GenerationStats summarize(const EvolutionState& state) {
  const PopulationTensors& pop = state.population;
  GenerationStats s;
  s.generation = state.generation;
  s.species_count = static_cast<int>(state.species.size());
  s.best_fitness = pop.fitness[best_index(pop)];
  double fit = 0.0, nodes = 0.0, conns = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    fit += pop.fitness[i];
    const LiveCounts c = count_live(pop.genome(i));
    nodes += static_cast<double>(c.nodes);
    conns += static_cast<double>(c.conns);
  }
  const auto n = static_cast<double>(pop.size());
  s.mean_fitness = fit / n;
  s.mean_live_nodes = nodes / n;
  s.mean_live_conns = conns / n;
  return s;
}

}  // namespace

std::string stats_csv_header() {
  return "generation,best_fitness,mean_fitness,species_count,mean_live_nodes,mean_live_conns,"
         "elapsed_seconds";
}

std::string stats_csv_row(const GenerationStats& s, bool timing) {
  using text::format_double;
  return std::to_string(s.generation) + "," + format_double(s.best_fitness) + "," +
         format_double(s.mean_fitness) + "," + std::to_string(s.species_count) + "," +
         format_double(s.mean_live_nodes) + "," + format_double(s.mean_live_conns) + "," +
         format_double(timing ? s.elapsed_seconds : 0.0);
}

std::size_t best_index(const PopulationTensors& pop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i) {
    if (pop.fitness[i] > pop.fitness[best]) best = i;
  }
  return best;
}

EvolutionState initialize(const NeatConfig& config, Execution mode) {
  config.validate();
  if (config.network_type != NetworkType::feedforward) {
    throw ConfigError("network_type = recurrent is parsed but not supported for evolution");
  }
  EvolutionState state;
  state.config = config;
  state.allocator = NodeKeyAllocator::for_config(config);
  const auto P = static_cast<std::size_t>(config.pop_size);
  state.population = PopulationTensors(P, config.inputs, config.outputs,
                                       static_cast<std::size_t>(config.max_nodes),
                                       static_cast<std::size_t>(config.max_conns));
  const RngStream init = stage_stream(state, Stage::init);
  for_each_index(mode, P, [&](std::size_t i) {
    state.population.set_genome(i, init_genome(config, init.split(i)));
  });
  state.species = speciate(state.population, {}, state.next_species_key, config, mode);
  return state;
}

GenerationStats evaluate(EvolutionState& state, const Problem& problem,
                         const FunctionRegistry& registry, Execution mode) {
  const std::vector<TransformedNetwork> nets = population_transform(state.population, mode);
  state.population.fitness =
      problem.evaluate_population(nets, registry, stage_stream(state, Stage::evaluate), mode);
  for (std::size_t i = 0; i < state.population.size(); ++i) {
    if (!std::isfinite(state.population.fitness[i])) {
      throw PopulationError({{i, "fitness is not finite"}});
    }
  }
  state.evaluated = true;
  return summarize(state);
}

void advance(EvolutionState& state, Execution mode) {
  if (!state.evaluated) throw InvalidInput("population must be evaluated before reproduction");
  const NeatConfig& config = state.config;
  const auto& fitness = state.population.fitness;

  auto species = update_stagnation(std::move(state.species), fitness, config);
  species = allocate_spawns(std::move(species), fitness, config.pop_size, config);
  PopulationTensors next = reproduce(state.population, species, config,
                                     stage_stream(state, Stage::reproduce), state.allocator, mode);
  state.species = speciate(next, std::move(species), state.next_species_key, config, mode);
  state.population = std::move(next);
  state.generation += 1;
  state.evaluated = false;
}

GenerationStats evolve_step(EvolutionState& state, const Problem& problem,
                            const FunctionRegistry& registry, Execution mode) {
  const auto t0 = Clock::now();
  GenerationStats s = evaluate(state, problem, registry, mode);
  if (s.best_fitness < state.config.fitness_target) advance(state, mode);
  s.elapsed_seconds = seconds_since(t0);
  return s;
}

RunResult run(EvolutionState& state, const Problem& problem, const FunctionRegistry& registry,
              Execution mode, const std::function<void(const GenerationStats&)>& on_generation) {
  const NeatConfig& config = state.config;
  for (;;) {
    const auto t0 = Clock::now();
    // A resumed state may already carry this generation's fitness; its row
    // was emitted by the run that produced it.
    const bool fresh = !state.evaluated;
    GenerationStats s = fresh ? evaluate(state, problem, registry, mode) : summarize(state);
    const bool reached = s.best_fitness >= config.fitness_target;
    const bool exhausted = state.generation + 1 >= config.generation_limit;
    if (reached || exhausted) {
      s.elapsed_seconds = seconds_since(t0);
      if (fresh && on_generation) on_generation(s);
      RunResult result;
      result.reason = reached ? StopReason::target_reached : StopReason::generation_limit;
      result.best_index = best_index(state.population);
      result.best = state.population.copy_genome(result.best_index);
      result.best_fitness = state.population.fitness[result.best_index];
      return result;
    }
    advance(state, mode);
    s.elapsed_seconds = seconds_since(t0);
    if (fresh && on_generation) on_generation(s);
  }
}

}  // namespace tneat
