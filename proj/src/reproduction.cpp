#include "tneat/reproduction.hpp"

#include <algorithm>
#include <cmath>

#include "tneat/error.hpp"

namespace tneat {

namespace {

// What slot j of the next generation is made from.
struct Slot {
  std::size_t species = 0;
  bool elite = false;
  std::size_t source = 0;  // population index of the elite
};

}  // namespace

std::vector<std::size_t> ranked_members(const SpeciesState& s, std::span<const double> fitness) {
  std::vector<std::size_t> ranked = s.members;
  std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    if (fitness[a] != fitness[b]) return fitness[a] > fitness[b];
    return a < b;
  });
  return ranked;
}

PopulationTensors reproduce(const PopulationTensors& pop, std::span<const SpeciesState> species,
                            const NeatConfig& config, const RngStream& rng,
                            NodeKeyAllocator& allocator, Execution mode) {
  std::vector<const SpeciesState*> ordered;
  for (const auto& s : species) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const SpeciesState* a, const SpeciesState* b) { return a->key < b->key; });

  std::vector<std::vector<std::size_t>> ranked(ordered.size());
  std::vector<std::size_t> pool(ordered.size());
  std::vector<Slot> slots;
  for (std::size_t s = 0; s < ordered.size(); ++s) {
    ranked[s] = ranked_members(*ordered[s], pop.fitness);
    if (ranked[s].empty()) throw InvalidInput("cannot reproduce an empty species");
    const double survivors = std::ceil(config.survival_threshold *
                                       static_cast<double>(ranked[s].size()));
    pool[s] = std::clamp<std::size_t>(static_cast<std::size_t>(survivors), 1, ranked[s].size());

    const auto spawn = static_cast<std::size_t>(std::max(0, ordered[s]->spawn));
    const std::size_t elites = std::min({static_cast<std::size_t>(config.genome_elitism), spawn,
                                         ranked[s].size()});
    for (std::size_t e = 0; e < spawn; ++e) {
      slots.push_back({s, e < elites, e < elites ? ranked[s][e] : 0});
    }
  }
  if (slots.size() != pop.size()) {
    throw InvalidInput("spawn counts sum to " + std::to_string(slots.size()) +
                       ", population size is " + std::to_string(pop.size()));
  }

  const NodeKey key_base = allocator.reserve(static_cast<std::int64_t>(slots.size()));
  PopulationTensors next(pop.size(), pop.num_inputs(), pop.num_outputs(), pop.max_nodes(),
                         pop.max_conns());
  next.species_id.resize(pop.size());

  for_each_index(mode, slots.size(), [&](std::size_t j) {
    const Slot& slot = slots[j];
    next.species_id[j] = ordered[slot.species]->key;
    if (slot.elite) {
      next.set_genome(j, pop.genome(slot.source));
      return;
    }
    const RngStream slot_rng = rng.split(j);
    RngStream pick = slot_rng.split(0);
    const auto& members = ranked[slot.species];
    std::size_t a = members[pick.index(pool[slot.species])];
    std::size_t b = members[pick.index(pool[slot.species])];
    // Fitter parent first; ties go to the lower index.
    if (pop.fitness[b] > pop.fitness[a] || (pop.fitness[b] == pop.fitness[a] && b < a)) {
      std::swap(a, b);
    }
    const GenomeTensors child =
        crossover(pop.copy_genome(a), pop.copy_genome(b), slot_rng.split(1));
    next.set_genome(j, mutate(child, config, slot_rng.split(2),
                              key_base + static_cast<NodeKey>(j)));
  });
  return next;
}

}  // namespace tneat
