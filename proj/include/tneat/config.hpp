#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "tneat/functions.hpp"

namespace tneat {

enum class NetworkType { feedforward, recurrent };

/// Init/mutation controls for one real-valued gene attribute.
struct AttrConfig {
  double init_mean = 0.0;
  double init_std = 1.0;
  double mutate_power = 0.5;
  double mutate_rate = 0.7;
  double replace_rate = 0.1;
};

/*!
 * Full hyperparameter record.
 *
 * Field names match the config-file keys; real-valued attribute settings are
 * grouped as `<attr>_init_mean`, `<attr>_init_std`, ... in the file and as an
 * AttrConfig here. Defaults are the values of the reference experiment
 * protocol (tanh/sum networks, 50 nodes, 100 connections, 10 species).
 */
struct NeatConfig {
  // Algorithmic controls.
  std::uint64_t seed = 0;
  double fitness_target = std::numeric_limits<double>::infinity();
  int generation_limit = 100;
  int pop_size = 10000;
  NetworkType network_type = NetworkType::feedforward;
  int inputs = 0;   ///< 0 = take from the problem
  int outputs = 0;  ///< 0 = take from the problem
  int max_nodes = 50;
  int max_conns = 100;
  int max_species = 10;
  double compatibility_disjoint = 1.0;
  double compatibility_homologous = 0.5;
  double node_add = 0.2;
  double node_delete = 0.0;
  double conn_add = 0.4;
  double conn_delete = 0.0;
  double compatibility_threshold = 3.5;
  int species_elitism = 2;
  int max_stagnation = 15;
  int genome_elitism = 2;
  double survival_threshold = 0.2;
  double spawn_number_change_rate = 0.5;

  // Network behaviour controls.
  AttrConfig bias{0.0, 1.0, 0.5, 0.7, 0.1};
  AttrConfig response{1.0, 0.0, 0.0, 0.0, 0.0};
  AttrConfig weight{0.0, 1.0, 0.5, 0.8, 0.1};
  double enabled_mutate_rate = 0.0;
  int activation_default = activation::tanh;
  std::vector<int> activation_options{activation::tanh};
  double activation_replace_rate = 0.0;
  int aggregation_default = aggregation::sum;
  std::vector<int> aggregation_options{aggregation::sum};
  double aggregation_replace_rate = 0.0;
  double attr_min = -30.0;
  double attr_max = 30.0;

  // Problem selection.
  std::string problem = "xor";
  std::string regression_target = "sin";
  int regression_samples = 64;

  /// Throws ConfigError naming the first violated constraint. Requires
  /// inputs/outputs to be resolved (non-zero).
  void validate() const;
};

/// Parse the flat `key = value` format. Unknown or repeated keys are errors.
NeatConfig parse_config(std::string_view text);
NeatConfig load_config(const std::filesystem::path& path);

/// Serialize every key; parse_config(to_text(c)) reproduces c exactly.
std::string to_text(const NeatConfig& config);

/// Every key accepted by parse_config, in file order.
const std::vector<std::string>& config_keys();

std::string_view to_string(NetworkType type);

}  // namespace tneat
