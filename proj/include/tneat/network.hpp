#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tneat/execution.hpp"
#include "tneat/functions.hpp"
#include "tneat/genome.hpp"
#include "tneat/matrix.hpp"

namespace tneat {

/*!
 * Inference-ready form of a feedforward genome.
 *
 * `order` lists node-tensor row indices in topological order followed by
 * kNoRow padding. `conns_expanded` is a max_nodes x max_nodes weight tensor
 * indexed by node ROW (not key): entry (i, j) holds the weight of the enabled
 * connection from row i to row j, NaN where there is none. Immutable after
 * construction and safe to share across threads.
 */
struct TransformedNetwork {
  static constexpr int kNoRow = -1;

  std::size_t max_nodes = 0;
  int num_inputs = 0;
  int num_outputs = 0;
  std::vector<double> nodes;           ///< copy of the node tensor
  std::vector<int> order;              ///< length max_nodes
  std::vector<double> conns_expanded;  ///< max_nodes * max_nodes
  std::vector<int> input_rows;         ///< row of input key i
  std::vector<int> output_rows;        ///< row of output key I + o

  double expanded(std::size_t from_row, std::size_t to_row) const {
    return conns_expanded[from_row * max_nodes + to_row];
  }
  double node(std::size_t row, std::size_t col) const { return nodes[row * kNodeWidth + col]; }
  std::size_t live_count() const;

  /// Bitwise on the double arrays, so NaN padding compares equal to itself.
  friend bool operator==(const TransformedNetwork& a, const TransformedNetwork& b);
};

/// Kahn's algorithm over enabled connections, ties broken by ascending row.
/// Throws CycleDetected when enabled connections form a cycle.
TransformedNetwork transform(GenomeView genome);

/// Throws InvalidInput on wrong length or NaN input.
std::vector<double> forward(const TransformedNetwork& net, const FunctionRegistry& registry,
                            std::span<const double> input);

/// inputs is B x I; returns B x O. Row b equals forward(net, inputs.row(b)).
Matrix forward_batch(const TransformedNetwork& net, const FunctionRegistry& registry,
                     const Matrix& inputs);

/// Per-genome transform over the whole population. Cycles are collected and
/// reported together in a PopulationError.
std::vector<TransformedNetwork> population_transform(const PopulationTensors& pop,
                                                     Execution mode = Execution::parallel);

/// Every network evaluated on the same input batch.
std::vector<Matrix> population_forward(std::span<const TransformedNetwork> nets,
                                       const FunctionRegistry& registry, const Matrix& inputs,
                                       Execution mode = Execution::parallel);

/// Network i evaluated on inputs[i].
std::vector<Matrix> population_forward(std::span<const TransformedNetwork> nets,
                                       const FunctionRegistry& registry,
                                       std::span<const Matrix> inputs,
                                       Execution mode = Execution::parallel);

/// Graphviz rendering: nodes labelled key/bias/activation, edges labelled
/// with their weight, disabled edges dashed.
std::string to_dot(GenomeView genome, const FunctionRegistry& registry);

}  // namespace tneat
