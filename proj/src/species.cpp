#include "tneat/species.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tneat/evolution.hpp"
#include "tneat/matrix.hpp"

namespace tneat {

std::vector<SpeciesState> speciate(PopulationTensors& pop, std::vector<SpeciesState> species,
                                   int& next_key, const NeatConfig& config, Execution mode) {
  std::sort(species.begin(), species.end(),
            [](const SpeciesState& a, const SpeciesState& b) { return a.key < b.key; });
  const std::size_t P = pop.size();
  const std::size_t existing = species.size();

  // Distances to the representatives carried over from the last generation.
  Matrix to_old(P, existing);
  for_each_index(mode, P, [&](std::size_t i) {
    const GenomeView g = pop.genome(i);
    for (std::size_t s = 0; s < existing; ++s) {
      to_old(i, s) = distance(g, species[s].representative, config);
    }
  });

  for (auto& s : species) s.members.clear();
  const double threshold = config.compatibility_threshold;
  const auto cap = static_cast<std::size_t>(config.max_species);
  std::vector<double> row;

  pop.species_id.assign(P, -1);
  for (std::size_t i = 0; i < P; ++i) {
    const GenomeView g = pop.genome(i);
    row.assign(to_old.row(i).begin(), to_old.row(i).end());
    std::size_t chosen = species.size();
    for (std::size_t s = 0; s < species.size(); ++s) {
      if (s >= existing) row.push_back(distance(g, species[s].representative, config));
      if (row[s] <= threshold) {
        chosen = s;
        break;
      }
    }
    if (chosen == species.size()) {
      if (species.size() < cap) {
        SpeciesState fresh;
        fresh.key = next_key++;
        fresh.representative = GenomeTensors(g);
        species.push_back(std::move(fresh));
      } else {
        chosen = static_cast<std::size_t>(std::min_element(row.begin(), row.end()) - row.begin());
      }
    }
    species[chosen].members.push_back(i);
    pop.species_id[i] = species[chosen].key;
  }

  std::vector<SpeciesState> out;
  out.reserve(species.size());
  for (std::size_t s = 0; s < species.size(); ++s) {
    SpeciesState& sp = species[s];
    if (sp.members.empty()) continue;
    std::size_t best = sp.members.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t m : sp.members) {
      const double d = s < existing ? to_old(m, s)
                                    : distance(pop.genome(m), sp.representative, config);
      if (d < best_d) {
        best_d = d;
        best = m;
      }
    }
    sp.representative = pop.copy_genome(best);
    out.push_back(std::move(sp));
  }
  return out;
}

double species_fitness(const SpeciesState& s, std::span<const double> fitness) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t m : s.members) best = std::max(best, fitness[m]);
  return best;
}

std::vector<SpeciesState> update_stagnation(std::vector<SpeciesState> species,
                                            std::span<const double> fitness,
                                            const NeatConfig& config) {
  std::vector<double> current(species.size());
  for (std::size_t s = 0; s < species.size(); ++s) {
    SpeciesState& sp = species[s];
    current[s] = species_fitness(sp, fitness);
    const auto& hist = sp.best_fitness_history;
    const bool improved =
        hist.empty() || current[s] > *std::max_element(hist.begin(), hist.end());
    sp.stagnation = improved ? 0 : sp.stagnation + 1;
    sp.best_fitness_history.push_back(current[s]);
  }

  std::vector<std::size_t> rank(species.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    if (current[a] != current[b]) return current[a] > current[b];
    return species[a].key < species[b].key;
  });
  std::vector<char> protect(species.size(), 0);
  const auto elite = std::max<std::size_t>(1, static_cast<std::size_t>(config.species_elitism));
  for (std::size_t r = 0; r < rank.size() && r < elite; ++r) protect[rank[r]] = 1;

  std::vector<SpeciesState> out;
  for (std::size_t s = 0; s < species.size(); ++s) {
    if (protect[s] || species[s].stagnation < config.max_stagnation) {
      out.push_back(std::move(species[s]));
    }
  }
  return out;
}

std::vector<SpeciesState> allocate_spawns(std::vector<SpeciesState> species,
                                          std::span<const double> fitness, int pop_size,
                                          const NeatConfig& config) {
  const std::size_t S = species.size();
  if (S == 0) return species;

  std::vector<double> mean(S);
  for (std::size_t s = 0; s < S; ++s) {
    double sum = 0.0;
    for (std::size_t m : species[s].members) sum += fitness[m];
    mean[s] = species[s].members.empty() ? 0.0 : sum / static_cast<double>(species[s].members.size());
  }
  const double lo = *std::min_element(mean.begin(), mean.end());
  double total = 0.0;
  for (double& m : mean) {
    m = m - lo + kSpawnEpsilon;
    total += m;
  }

  const double r = config.spawn_number_change_rate;
  int assigned = 0;
  for (std::size_t s = 0; s < S; ++s) {
    const double target = mean[s] / total * pop_size;
    const double old_size = static_cast<double>(species[s].members.size());
    const double limit = r * old_size + 1.0;
    const double step = std::clamp(target - old_size, -limit, limit);
    species[s].spawn = std::max(1, static_cast<int>(std::lround(old_size + step)));
    assigned += species[s].spawn;
  }

  // Hand the residual to the largest species (ties to the lower key); when
  // shrinking, move on to the next largest once a species is down to 1.
  auto largest = [&](bool shrinkable) {
    std::size_t best = S;
    for (std::size_t s = 0; s < S; ++s) {
      if (shrinkable && species[s].spawn <= 1) continue;
      if (best == S || species[s].spawn > species[best].spawn ||
          (species[s].spawn == species[best].spawn && species[s].key < species[best].key)) {
        best = s;
      }
    }
    return best;
  };
  int residual = pop_size - assigned;
  if (residual > 0) species[largest(false)].spawn += residual;
  while (residual < 0) {
    const std::size_t s = largest(true);
    if (s == S) break;  // more species than slots
    const int take = std::min(-residual, species[s].spawn - 1);
    species[s].spawn -= take;
    residual += take;
  }
  return species;
}

}  // namespace tneat
