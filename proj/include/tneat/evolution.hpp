#pragma once

#include <cstdint>

#include "tneat/config.hpp"
#include "tneat/genome.hpp"
#include "tneat/rng.hpp"

namespace tneat {

/// Issues historical markers for new hidden nodes. Monotone; never reuses a key.
class NodeKeyAllocator {
 public:
  NodeKeyAllocator() = default;
  explicit NodeKeyAllocator(NodeKey next_key) : next_key_(next_key) {}
  /// Starts at inputs + outputs.
  static NodeKeyAllocator for_config(const NeatConfig& config) {
    return NodeKeyAllocator(config.inputs + config.outputs);
  }

  NodeKey next_key() const noexcept { return next_key_; }
  NodeKey take() noexcept { return next_key_++; }
  /// Reserves [base, base + count) and returns base.
  NodeKey reserve(std::int64_t count) noexcept {
    NodeKey base = next_key_;
    next_key_ += count;
    return base;
  }

  friend bool operator==(const NodeKeyAllocator&, const NodeKeyAllocator&) = default;

 private:
  NodeKey next_key_ = 0;
};

/*!
 * Sub-stream tags used inside mutate(). Each step draws from
 * rng.split(tag); attribute mutation of node row r draws from
 * rng.split(node_attributes).split(r) (likewise for connections), so a gene's
 * perturbation does not depend on how many other genes exist.
 */
namespace mutation_stream {
inline constexpr std::uint64_t node_add = 1;
inline constexpr std::uint64_t node_delete = 2;
inline constexpr std::uint64_t conn_add = 3;
inline constexpr std::uint64_t conn_delete = 4;
inline constexpr std::uint64_t node_attributes = 5;
inline constexpr std::uint64_t conn_attributes = 6;
}  // namespace mutation_stream

/*!
 * Applies, in order: node split (node_add), hidden-node deletion
 * (node_delete), connection addition (conn_add), connection deletion
 * (conn_delete), then per-attribute replace/perturb with clamping.
 * A structural step that cannot proceed (no capacity, no candidates) is
 * skipped. `new_node_key` is used if the node split fires.
 */
GenomeTensors mutate(const GenomeTensors& genome, const NeatConfig& config, RngStream rng,
                     NodeKey new_node_key);
GenomeTensors mutate(const GenomeTensors& genome, const NeatConfig& config, RngStream rng,
                     NodeKeyAllocator& allocator);

/*!
 * Offspring topology (live keys and row layout) is parent_fit's. On genes
 * live in both parents each attribute is taken from either parent with
 * probability 1/2. Throws ShapeMismatch on differing shapes.
 */
GenomeTensors crossover(const GenomeTensors& parent_fit, const GenomeTensors& parent_less,
                        RngStream rng);

/*!
 * Compatibility distance:
 *   compatibility_disjoint * D / N + compatibility_homologous * A
 * with D the number of genes (nodes and connections) live in exactly one
 * genome, N the larger live gene count, and A the mean over homologous gene
 * pairs of their mean per-attribute difference (absolute difference for
 * reals, 0/1 mismatch for function codes). Throws ShapeMismatch if I/O differ.
 */
double distance(GenomeView a, GenomeView b, const NeatConfig& config);

/// True if adding in_key -> out_key would close a directed cycle over the
/// live connections of `genome` (enabled or not).
bool creates_cycle(GenomeView genome, NodeKey in_key, NodeKey out_key);

}  // namespace tneat
