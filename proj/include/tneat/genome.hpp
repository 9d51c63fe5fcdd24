#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tneat {

struct NeatConfig;
class RngStream;

using NodeKey = std::int64_t;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Node row layout: (key, bias, response, aggregation_id, activation_id).
inline constexpr std::size_t kNodeWidth = 5;
// Connection row layout: (in_key, out_key, enabled, weight).
inline constexpr std::size_t kConnWidth = 4;

namespace node_col {
inline constexpr std::size_t key = 0;
inline constexpr std::size_t bias = 1;
inline constexpr std::size_t response = 2;
inline constexpr std::size_t aggregation = 3;
inline constexpr std::size_t activation = 4;
}  // namespace node_col

namespace conn_col {
inline constexpr std::size_t in = 0;
inline constexpr std::size_t out = 1;
inline constexpr std::size_t enabled = 2;
inline constexpr std::size_t weight = 3;
}  // namespace conn_col

// Attribute indices for set_node_attr / set_conn_attr. Column = index + 1 for
// nodes, index + 2 for connections.
namespace node_attr {
inline constexpr int bias = 0;
inline constexpr int response = 1;
inline constexpr int aggregation = 2;
inline constexpr int activation = 3;
}  // namespace node_attr

namespace conn_attr {
inline constexpr int enabled = 0;
inline constexpr int weight = 1;
}  // namespace conn_attr

struct NodeRow {
  NodeKey key = 0;
  double bias = 0.0;
  double response = 1.0;
  int aggregation = 0;
  int activation = 0;

  friend bool operator==(const NodeRow&, const NodeRow&) = default;
};

struct ConnRow {
  NodeKey in_key = 0;
  NodeKey out_key = 0;
  bool enabled = true;
  double weight = 0.0;

  friend bool operator==(const ConnRow&, const ConnRow&) = default;
};

struct LiveCounts {
  std::size_t nodes = 0;
  std::size_t conns = 0;

  friend bool operator==(const LiveCounts&, const LiveCounts&) = default;
};

inline bool row_is_padding(std::span<const double> row) {
  for (double v : row) {
    if (!std::isnan(v)) return false;
  }
  return true;
}

/// Read-only queries shared by owning genomes and population slices.
template <class Derived>
class GenomeReader {
 public:
  std::size_t max_nodes() const { return self().node_data().size() / kNodeWidth; }
  std::size_t max_conns() const { return self().conn_data().size() / kConnWidth; }

  double node(std::size_t row, std::size_t col) const {
    return self().node_data()[row * kNodeWidth + col];
  }
  double conn(std::size_t row, std::size_t col) const {
    return self().conn_data()[row * kConnWidth + col];
  }
  std::span<const double> node_span(std::size_t row) const {
    return self().node_data().subspan(row * kNodeWidth, kNodeWidth);
  }
  std::span<const double> conn_span(std::size_t row) const {
    return self().conn_data().subspan(row * kConnWidth, kConnWidth);
  }

  // A row is live when its key column is not NaN; padding discipline makes
  // that equivalent to the whole row being NaN-free.
  bool node_live(std::size_t row) const { return !std::isnan(node(row, node_col::key)); }
  bool conn_live(std::size_t row) const { return !std::isnan(conn(row, conn_col::in)); }

  NodeKey node_key(std::size_t row) const {
    return static_cast<NodeKey>(node(row, node_col::key));
  }
  NodeKey conn_in(std::size_t row) const { return static_cast<NodeKey>(conn(row, conn_col::in)); }
  NodeKey conn_out(std::size_t row) const {
    return static_cast<NodeKey>(conn(row, conn_col::out));
  }
  bool conn_enabled(std::size_t row) const { return conn(row, conn_col::enabled) != 0.0; }

  NodeRow node_row(std::size_t row) const {
    return {node_key(row), node(row, node_col::bias), node(row, node_col::response),
            static_cast<int>(node(row, node_col::aggregation)),
            static_cast<int>(node(row, node_col::activation))};
  }
  ConnRow conn_row(std::size_t row) const {
    return {conn_in(row), conn_out(row), conn_enabled(row), conn(row, conn_col::weight)};
  }

  std::optional<std::size_t> find_node(NodeKey key) const {
    for (std::size_t r = 0; r < max_nodes(); ++r) {
      if (node_live(r) && node_key(r) == key) return r;
    }
    return std::nullopt;
  }
  std::optional<std::size_t> find_conn(NodeKey in_key, NodeKey out_key) const {
    for (std::size_t r = 0; r < max_conns(); ++r) {
      if (conn_live(r) && conn_in(r) == in_key && conn_out(r) == out_key) return r;
    }
    return std::nullopt;
  }

  bool is_input_key(NodeKey key) const { return key >= 0 && key < self().num_inputs(); }
  bool is_output_key(NodeKey key) const {
    return key >= self().num_inputs() && key < self().num_inputs() + self().num_outputs();
  }
  bool is_hidden_key(NodeKey key) const {
    return key >= self().num_inputs() + self().num_outputs();
  }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

/// Non-owning view of one genome's node and connection tensors.
class GenomeView : public GenomeReader<GenomeView> {
 public:
  GenomeView(std::span<const double> nodes, std::span<const double> conns, int num_inputs,
             int num_outputs)
      : nodes_(nodes), conns_(conns), num_inputs_(num_inputs), num_outputs_(num_outputs) {}

  std::span<const double> node_data() const { return nodes_; }
  std::span<const double> conn_data() const { return conns_; }
  int num_inputs() const { return num_inputs_; }
  int num_outputs() const { return num_outputs_; }

 private:
  std::span<const double> nodes_;
  std::span<const double> conns_;
  int num_inputs_;
  int num_outputs_;
};

/*!
 * One genome as a NaN-padded node tensor (max_nodes x 5) and connection
 * tensor (max_conns x 4).
 *
 * Input keys are 0..I-1 and output keys I..I+O-1. Removal writes NaN in place
 * and addition fills the first all-NaN row, so row indices of untouched genes
 * are stable. Shapes never change after construction.
 */
class GenomeTensors : public GenomeReader<GenomeTensors> {
 public:
  /// All-padding genome.
  GenomeTensors(int num_inputs, int num_outputs, std::size_t max_nodes, std::size_t max_conns);
  explicit GenomeTensors(GenomeView view);

  std::span<const double> node_data() const { return nodes_; }
  std::span<const double> conn_data() const { return conns_; }
  std::span<double> node_data_mut() { return nodes_; }
  std::span<double> conn_data_mut() { return conns_; }
  int num_inputs() const { return num_inputs_; }
  int num_outputs() const { return num_outputs_; }

  GenomeView view() const { return {nodes_, conns_, num_inputs_, num_outputs_}; }
  operator GenomeView() const { return view(); }  // NOLINT(google-explicit-constructor)

  void write_node(std::size_t row, const NodeRow& n);
  void write_conn(std::size_t row, const ConnRow& c);
  void clear_node(std::size_t row);
  void clear_conn(std::size_t row);

  /// Bitwise equality, NaN padding included.
  friend bool operator==(const GenomeTensors& a, const GenomeTensors& b);

 private:
  int num_inputs_;
  int num_outputs_;
  std::vector<double> nodes_;
  std::vector<double> conns_;
};

bool bitwise_equal(GenomeView a, GenomeView b);

/*!
 * Whole population stacked as P x max_nodes x 5 and P x max_conns x 4 tensors,
 * plus per-genome species label and fitness (NaN before evaluation).
 */
class PopulationTensors {
 public:
  PopulationTensors() = default;
  PopulationTensors(std::size_t size, int num_inputs, int num_outputs, std::size_t max_nodes,
                    std::size_t max_conns);

  std::size_t size() const { return size_; }
  int num_inputs() const { return num_inputs_; }
  int num_outputs() const { return num_outputs_; }
  std::size_t max_nodes() const { return max_nodes_; }
  std::size_t max_conns() const { return max_conns_; }

  GenomeView genome(std::size_t i) const;
  GenomeTensors copy_genome(std::size_t i) const { return GenomeTensors(genome(i)); }
  /// Throws ShapeMismatch when the genome's shape differs from the population's.
  void set_genome(std::size_t i, GenomeView g);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> conns() const { return conns_; }

  std::vector<int> species_id;
  std::vector<double> fitness;

  friend bool operator==(const PopulationTensors& a, const PopulationTensors& b);

 private:
  std::size_t size_ = 0;
  int num_inputs_ = 0;
  int num_outputs_ = 0;
  std::size_t max_nodes_ = 0;
  std::size_t max_conns_ = 0;
  std::vector<double> nodes_;
  std::vector<double> conns_;
};

// ---------------------------------------------------------------------------
// Genome operations. All are pure: they return a new genome and leave the
// argument untouched.

/// Inputs and outputs only, every input connected to every output.
GenomeTensors init_genome(const NeatConfig& config, RngStream rng);

GenomeTensors add_node(const GenomeTensors& genome, const NodeRow& row);
/// Removes a hidden node and every connection touching it.
GenomeTensors remove_node(const GenomeTensors& genome, NodeKey key);
GenomeTensors add_conn(const GenomeTensors& genome, const ConnRow& row);
GenomeTensors remove_conn(const GenomeTensors& genome, NodeKey in_key, NodeKey out_key);
GenomeTensors set_node_attr(const GenomeTensors& genome, NodeKey key, int attr_index,
                            double value);
GenomeTensors set_conn_attr(const GenomeTensors& genome, NodeKey in_key, NodeKey out_key,
                            int attr_index, double value);

LiveCounts count_live(GenomeView genome);

/// Structural problems (padding, key uniqueness, referential integrity,
/// missing inputs/outputs, bad function codes). Empty when the genome is valid.
std::vector<std::string> integrity_violations(GenomeView genome);

// In-place variants used by the evolution kernels on private copies. Same
// contracts and errors as the pure functions above.
namespace inplace {
std::size_t add_node(GenomeTensors& genome, const NodeRow& row);
void remove_node(GenomeTensors& genome, NodeKey key);
std::size_t add_conn(GenomeTensors& genome, const ConnRow& row);
void remove_conn(GenomeTensors& genome, NodeKey in_key, NodeKey out_key);
std::optional<std::size_t> first_free_node_row(const GenomeTensors& genome);
std::optional<std::size_t> first_free_conn_row(const GenomeTensors& genome);
}  // namespace inplace

}  // namespace tneat
