#pragma once

#include <span>
#include <vector>

#include "tneat/config.hpp"
#include "tneat/evolution.hpp"
#include "tneat/execution.hpp"
#include "tneat/genome.hpp"
#include "tneat/rng.hpp"
#include "tneat/species.hpp"

namespace tneat {

/*!
 * Builds the next population from allocated spawn counts.
 *
 * Output slots are laid out species by species (ascending key). Within a
 * species, members are ranked by fitness (descending, ties to the lower
 * index); the first min(genome_elitism, spawn) slots are verbatim copies of
 * the top members. Every other slot j samples two parents with replacement
 * from the top ceil(survival_threshold * size) members, crosses them (fitter
 * first) and mutates the child.
 *
 * Slot j draws only from rng.split(j) and, if it needs a fresh node key, uses
 * allocator base + j, where base is reserved once for pop_size keys. Slots are
 * therefore independent and are filled in one parallel pass under `mode`.
 * Species ids of the output are the parent species; fitness is NaN.
 */
PopulationTensors reproduce(const PopulationTensors& pop, std::span<const SpeciesState> species,
                            const NeatConfig& config, const RngStream& rng,
                            NodeKeyAllocator& allocator, Execution mode = Execution::parallel);

/// Members of `s` ordered best first (ties to the lower population index).
std::vector<std::size_t> ranked_members(const SpeciesState& s, std::span<const double> fitness);

}  // namespace tneat
