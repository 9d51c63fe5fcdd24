#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tneat/neat.hpp"

namespace tneat {

/*!
 * JSON snapshot of an EvolutionState: config text, generation, population
 * (genome documents, species ids, fitness), species records, allocator and
 * species-key counters. Restoring it and continuing reproduces an
 * uninterrupted run bit for bit, because every random stream is derived from
 * (seed, generation, ...) rather than carried as generator state.
 */
std::string checkpoint_to_json(const EvolutionState& state);
/// Throws ParseError / ConfigError on malformed input.
EvolutionState checkpoint_from_json(std::string_view json);

void save_checkpoint(const std::filesystem::path& path, const EvolutionState& state);
EvolutionState load_checkpoint(const std::filesystem::path& path);

}  // namespace tneat
