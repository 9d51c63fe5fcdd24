#include "tneat/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tneat/error.hpp"
#include "tneat/genome_io.hpp"
#include "tneat/text.hpp"

namespace tneat {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

// Reals are stored as shortest round-trip strings so NaN and infinities
// survive and no JSON number formatting can perturb the bits.
json reals_to_json(std::span<const double> values) {
  json out = json::array();
  for (double v : values) out.push_back(text::format_double(v));
  return out;
}

std::vector<double> reals_from_json(const json& j) {
  std::vector<double> out;
  for (const auto& item : j) {
    auto v = text::parse_double(item.get<std::string>());
    if (!v) throw ParseError(0, "", "bad real '" + item.get<std::string>() + "' in checkpoint");
    out.push_back(*v);
  }
  return out;
}

}  // namespace

std::string checkpoint_to_json(const EvolutionState& state) {
  json j;
  j["format"] = "tneat-checkpoint";
  j["version"] = kFormatVersion;
  j["config"] = to_text(state.config);
  j["generation"] = state.generation;
  j["evaluated"] = state.evaluated;
  j["next_node_key"] = state.allocator.next_key();
  j["next_species_key"] = state.next_species_key;

  const PopulationTensors& pop = state.population;
  json genomes = json::array();
  for (std::size_t i = 0; i < pop.size(); ++i) genomes.push_back(serialize_genome(pop.genome(i)));
  j["population"] = {
      {"genomes", std::move(genomes)},
      {"species_id", pop.species_id},
      {"fitness", reals_to_json(pop.fitness)},
  };

  json species = json::array();
  for (const auto& s : state.species) {
    species.push_back({
        {"key", s.key},
        {"representative", serialize_genome(s.representative)},
        {"members", s.members},
        {"best_fitness_history", reals_to_json(s.best_fitness_history)},
        {"stagnation", s.stagnation},
        {"spawn", s.spawn},
    });
  }
  j["species"] = std::move(species);
  return j.dump(1);
}

EvolutionState checkpoint_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, "", std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "tneat-checkpoint" || j.at("version") != kFormatVersion) {
      throw ParseError(0, "format", "not a version-1 checkpoint");
    }
    EvolutionState state;
    state.config = parse_config(j.at("config").get<std::string>());
    state.generation = j.at("generation").get<int>();
    state.evaluated = j.at("evaluated").get<bool>();
    state.allocator = NodeKeyAllocator(j.at("next_node_key").get<NodeKey>());
    state.next_species_key = j.at("next_species_key").get<int>();

    const json& pj = j.at("population");
    const json& genomes = pj.at("genomes");
    const NeatConfig& c = state.config;
    state.population = PopulationTensors(genomes.size(), c.inputs, c.outputs,
                                         static_cast<std::size_t>(c.max_nodes),
                                         static_cast<std::size_t>(c.max_conns));
    for (std::size_t i = 0; i < genomes.size(); ++i) {
      state.population.set_genome(i, parse_genome(genomes[i].get<std::string>()));
    }
    state.population.species_id = pj.at("species_id").get<std::vector<int>>();
    state.population.fitness = reals_from_json(pj.at("fitness"));
    if (state.population.species_id.size() != genomes.size() ||
        state.population.fitness.size() != genomes.size()) {
      throw ParseError(0, "population", "species_id/fitness length differs from genome count");
    }

    for (const auto& sj : j.at("species")) {
      SpeciesState s;
      s.key = sj.at("key").get<int>();
      s.representative = parse_genome(sj.at("representative").get<std::string>());
      s.members = sj.at("members").get<std::vector<std::size_t>>();
      s.best_fitness_history = reals_from_json(sj.at("best_fitness_history"));
      s.stagnation = sj.at("stagnation").get<int>();
      s.spawn = sj.at("spawn").get<int>();
      state.species.push_back(std::move(s));
    }
    return state;
  } catch (const json::exception& e) {
    throw ParseError(0, "", std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const EvolutionState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << checkpoint_to_json(state) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

EvolutionState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return checkpoint_from_json(ss.str());
}

}  // namespace tneat
