#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tneat/config.hpp"
#include "tneat/execution.hpp"
#include "tneat/genome.hpp"

namespace tneat {

struct SpeciesState {
  int key = 0;
  GenomeTensors representative{1, 1, 0, 0};
  std::vector<std::size_t> members;           ///< population indices, ascending
  std::vector<double> best_fitness_history;   ///< species fitness, one per generation
  int stagnation = 0;
  int spawn = 0;

  friend bool operator==(const SpeciesState&, const SpeciesState&) = default;
};

/*!
 * Partitions `pop` into species and writes pop.species_id.
 *
 * Existing species (ascending key) keep their representatives. Each genome,
 * in index order, joins the first species whose representative is within
 * compatibility_threshold. Otherwise it founds a new species (key taken from
 * `next_key`) while fewer than max_species exist, or else joins the species
 * with the nearest representative (ties to the lower key). Representatives
 * are then moved to the member closest to the previous one and empty species
 * are dropped. Distances to existing representatives are computed as one
 * population-wide pass under `mode`.
 */
std::vector<SpeciesState> speciate(PopulationTensors& pop, std::vector<SpeciesState> species,
                                   int& next_key, const NeatConfig& config,
                                   Execution mode = Execution::parallel);

/// Max member fitness.
double species_fitness(const SpeciesState& s, std::span<const double> fitness);

/*!
 * Appends this generation's species fitness to each history and updates the
 * stagnation counters (reset only on strict improvement over the best so
 * far). Species whose counter reaches max_stagnation are dropped unless they
 * rank among the top species_elitism by current fitness (ties to the lower
 * key). At least one species always survives.
 */
std::vector<SpeciesState> update_stagnation(std::vector<SpeciesState> species,
                                            std::span<const double> fitness,
                                            const NeatConfig& config);

/*!
 * Sets spawn counts summing to `pop_size`. Targets are proportional to the
 * min-shifted mean member fitness (plus kSpawnEpsilon); each species moves
 * toward its target by at most spawn_number_change_rate * size + 1, is
 * floored at 1, and the residual goes to the largest species.
 */
std::vector<SpeciesState> allocate_spawns(std::vector<SpeciesState> species,
                                          std::span<const double> fitness, int pop_size,
                                          const NeatConfig& config);

inline constexpr double kSpawnEpsilon = 1e-6;

}  // namespace tneat
