#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tneat/config.hpp"
#include "tneat/evolution.hpp"
#include "tneat/execution.hpp"
#include "tneat/functions.hpp"
#include "tneat/genome.hpp"
#include "tneat/problems.hpp"
#include "tneat/species.hpp"

namespace tneat {

struct GenerationStats {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  int species_count = 0;
  double mean_live_nodes = 0.0;
  double mean_live_conns = 0.0;
  double elapsed_seconds = 0.0;  ///< evaluation through re-speciation

  friend bool operator==(const GenerationStats&, const GenerationStats&) = default;
};

std::string stats_csv_header();
/// With timing == false the elapsed column is written as 0 so that rows are
/// reproducible byte for byte.
std::string stats_csv_row(const GenerationStats& s, bool timing = true);

/*!
 * Everything needed to continue a run. `population` is either freshly
 * speciated and unevaluated, or (evaluated == true) carries this
 * generation's fitness and has not been reproduced yet.
 */
struct EvolutionState {
  NeatConfig config;
  int generation = 0;
  PopulationTensors population;
  std::vector<SpeciesState> species;
  NodeKeyAllocator allocator;
  int next_species_key = 0;
  bool evaluated = false;
};

/// Generation-0 population of init_genome() clones with independent
/// attribute draws, speciated. `config` must have inputs/outputs resolved.
/// Throws ConfigError for recurrent networks, which have no inference path.
EvolutionState initialize(const NeatConfig& config, Execution mode = Execution::parallel);

/// Transforms and scores the population; fills population.fitness.
GenerationStats evaluate(EvolutionState& state, const Problem& problem,
                         const FunctionRegistry& registry, Execution mode = Execution::parallel);

/// Stagnation, spawn allocation, reproduction and speciation of an evaluated
/// state, producing the next (unevaluated) generation.
void advance(EvolutionState& state, Execution mode = Execution::parallel);

/// evaluate() followed by advance() unless the fitness target was reached.
/// elapsed_seconds covers both.
GenerationStats evolve_step(EvolutionState& state, const Problem& problem,
                            const FunctionRegistry& registry,
                            Execution mode = Execution::parallel);

enum class StopReason { target_reached, generation_limit };

struct RunResult {
  StopReason reason = StopReason::generation_limit;
  GenomeTensors best{1, 1, 0, 0};
  double best_fitness = 0.0;
  std::size_t best_index = 0;
};

/*!
 * Runs until the best fitness reaches fitness_target or generation_limit
 * generations have been evaluated. `on_generation` sees one row per newly
 * evaluated generation. On return the state holds the last evaluated
 * population, so it can be checkpointed and resumed with a larger limit.
 */
RunResult run(EvolutionState& state, const Problem& problem, const FunctionRegistry& registry,
              Execution mode = Execution::parallel,
              const std::function<void(const GenerationStats&)>& on_generation = {});

/// argmax of population.fitness (ties to the lower index).
std::size_t best_index(const PopulationTensors& pop);

}  // namespace tneat
