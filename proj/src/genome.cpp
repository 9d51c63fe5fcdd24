#include "tneat/genome.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <set>
#include <utility>

#include "tneat/config.hpp"
#include "tneat/error.hpp"
#include "tneat/rng.hpp"

namespace tneat {

namespace {

bool same_bits(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

std::string key_str(NodeKey k) { return std::to_string(k); }

std::string pair_str(NodeKey a, NodeKey b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

void check_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw InvalidValue(std::string(what) + " must be finite");
  }
}

}  // namespace

GenomeTensors::GenomeTensors(int num_inputs, int num_outputs, std::size_t max_nodes,
                             std::size_t max_conns)
    : num_inputs_(num_inputs),
      num_outputs_(num_outputs),
      nodes_(max_nodes * kNodeWidth, kNaN),
      conns_(max_conns * kConnWidth, kNaN) {}

GenomeTensors::GenomeTensors(GenomeView view)
    : num_inputs_(view.num_inputs()),
      num_outputs_(view.num_outputs()),
      nodes_(view.node_data().begin(), view.node_data().end()),
      conns_(view.conn_data().begin(), view.conn_data().end()) {}

void GenomeTensors::write_node(std::size_t row, const NodeRow& n) {
  double* r = nodes_.data() + row * kNodeWidth;
  r[node_col::key] = static_cast<double>(n.key);
  r[node_col::bias] = n.bias;
  r[node_col::response] = n.response;
  r[node_col::aggregation] = static_cast<double>(n.aggregation);
  r[node_col::activation] = static_cast<double>(n.activation);
}

void GenomeTensors::write_conn(std::size_t row, const ConnRow& c) {
  double* r = conns_.data() + row * kConnWidth;
  r[conn_col::in] = static_cast<double>(c.in_key);
  r[conn_col::out] = static_cast<double>(c.out_key);
  r[conn_col::enabled] = c.enabled ? 1.0 : 0.0;
  r[conn_col::weight] = c.weight;
}

void GenomeTensors::clear_node(std::size_t row) {
  std::fill_n(nodes_.begin() + static_cast<std::ptrdiff_t>(row * kNodeWidth), kNodeWidth, kNaN);
}

void GenomeTensors::clear_conn(std::size_t row) {
  std::fill_n(conns_.begin() + static_cast<std::ptrdiff_t>(row * kConnWidth), kConnWidth, kNaN);
}

bool bitwise_equal(GenomeView a, GenomeView b) {
  return a.num_inputs() == b.num_inputs() && a.num_outputs() == b.num_outputs() &&
         same_bits(a.node_data(), b.node_data()) && same_bits(a.conn_data(), b.conn_data());
}

bool operator==(const GenomeTensors& a, const GenomeTensors& b) {
  return bitwise_equal(a.view(), b.view());
}

PopulationTensors::PopulationTensors(std::size_t size, int num_inputs, int num_outputs,
                                     std::size_t max_nodes, std::size_t max_conns)
    : species_id(size, -1),
      fitness(size, kNaN),
      size_(size),
      num_inputs_(num_inputs),
      num_outputs_(num_outputs),
      max_nodes_(max_nodes),
      max_conns_(max_conns),
      nodes_(size * max_nodes * kNodeWidth, kNaN),
      conns_(size * max_conns * kConnWidth, kNaN) {}

GenomeView PopulationTensors::genome(std::size_t i) const {
  const std::size_t nstride = max_nodes_ * kNodeWidth;
  const std::size_t cstride = max_conns_ * kConnWidth;
  return {std::span<const double>(nodes_).subspan(i * nstride, nstride),
          std::span<const double>(conns_).subspan(i * cstride, cstride), num_inputs_,
          num_outputs_};
}

void PopulationTensors::set_genome(std::size_t i, GenomeView g) {
  if (g.num_inputs() != num_inputs_ || g.num_outputs() != num_outputs_ ||
      g.max_nodes() != max_nodes_ || g.max_conns() != max_conns_) {
    throw ShapeMismatch("genome shape does not match population tensors");
  }
  std::copy(g.node_data().begin(), g.node_data().end(),
            nodes_.begin() + static_cast<std::ptrdiff_t>(i * max_nodes_ * kNodeWidth));
  std::copy(g.conn_data().begin(), g.conn_data().end(),
            conns_.begin() + static_cast<std::ptrdiff_t>(i * max_conns_ * kConnWidth));
}

bool operator==(const PopulationTensors& a, const PopulationTensors& b) {
  return a.size_ == b.size_ && a.num_inputs_ == b.num_inputs_ &&
         a.num_outputs_ == b.num_outputs_ && a.max_nodes_ == b.max_nodes_ &&
         a.max_conns_ == b.max_conns_ && same_bits(a.nodes_, b.nodes_) &&
         same_bits(a.conns_, b.conns_) && a.species_id == b.species_id &&
         same_bits(a.fitness, b.fitness);
}

// ---------------------------------------------------------------------------

namespace inplace {

std::optional<std::size_t> first_free_node_row(const GenomeTensors& genome) {
  for (std::size_t r = 0; r < genome.max_nodes(); ++r) {
    if (row_is_padding(genome.node_span(r))) return r;
  }
  return std::nullopt;
}

std::optional<std::size_t> first_free_conn_row(const GenomeTensors& genome) {
  for (std::size_t r = 0; r < genome.max_conns(); ++r) {
    if (row_is_padding(genome.conn_span(r))) return r;
  }
  return std::nullopt;
}

std::size_t add_node(GenomeTensors& genome, const NodeRow& row) {
  check_finite(row.bias, "bias");
  check_finite(row.response, "response");
  if (row.key < 0) throw InvalidValue("node key must be non-negative");
  if (genome.find_node(row.key)) throw DuplicateKey("node key " + key_str(row.key) + " is live");
  auto slot = first_free_node_row(genome);
  if (!slot) throw CapacityFull("node tensor has no free row");
  genome.write_node(*slot, row);
  return *slot;
}

void remove_node(GenomeTensors& genome, NodeKey key) {
  auto row = genome.find_node(key);
  if (!row) throw KeyNotFound("node key " + key_str(key) + " is not live");
  if (!genome.is_hidden_key(key)) {
    throw ProtectedNode("node key " + key_str(key) + " is an input or output");
  }
  genome.clear_node(*row);
  for (std::size_t r = 0; r < genome.max_conns(); ++r) {
    if (genome.conn_live(r) && (genome.conn_in(r) == key || genome.conn_out(r) == key)) {
      genome.clear_conn(r);
    }
  }
}

std::size_t add_conn(GenomeTensors& genome, const ConnRow& row) {
  check_finite(row.weight, "weight");
  if (genome.find_conn(row.in_key, row.out_key)) {
    throw DuplicateConn("connection " + pair_str(row.in_key, row.out_key) + " is live");
  }
  if (!genome.find_node(row.in_key) || !genome.find_node(row.out_key)) {
    throw DanglingEndpoint("connection " + pair_str(row.in_key, row.out_key) +
                           " references a missing node");
  }
  if (genome.is_input_key(row.out_key)) {
    throw InvalidValue("connection " + pair_str(row.in_key, row.out_key) +
                       " targets an input node");
  }
  auto slot = first_free_conn_row(genome);
  if (!slot) throw CapacityFull("connection tensor has no free row");
  genome.write_conn(*slot, row);
  return *slot;
}

void remove_conn(GenomeTensors& genome, NodeKey in_key, NodeKey out_key) {
  auto row = genome.find_conn(in_key, out_key);
  if (!row) throw KeyNotFound("connection " + pair_str(in_key, out_key) + " is not live");
  genome.clear_conn(*row);
}

}  // namespace inplace

GenomeTensors init_genome(const NeatConfig& config, RngStream rng) {
  const int I = config.inputs;
  const int O = config.outputs;
  if (I < 1 || O < 1) throw ConfigError("inputs and outputs must be >= 1");
  if (config.max_nodes < I + O) throw ConfigError("max_nodes must be >= inputs + outputs");
  if (config.max_conns < I * O) throw ConfigError("max_conns must be >= inputs * outputs");

  auto clamp = [&](double v) { return std::clamp(v, config.attr_min, config.attr_max); };

  GenomeTensors g(I, O, static_cast<std::size_t>(config.max_nodes),
                  static_cast<std::size_t>(config.max_conns));
  // Input rows carry fixed neutral attributes; forward never reads them.
  for (int i = 0; i < I; ++i) {
    g.write_node(static_cast<std::size_t>(i),
                 {i, 0.0, 1.0, config.aggregation_default, activation::identity});
  }
  for (int o = 0; o < O; ++o) {
    NodeRow n;
    n.key = I + o;
    n.bias = clamp(rng.normal(config.bias.init_mean, config.bias.init_std));
    n.response = clamp(rng.normal(config.response.init_mean, config.response.init_std));
    n.aggregation = config.aggregation_default;
    n.activation = config.activation_default;
    g.write_node(static_cast<std::size_t>(I + o), n);
  }
  std::size_t row = 0;
  for (int i = 0; i < I; ++i) {
    for (int o = 0; o < O; ++o) {
      double w = clamp(rng.normal(config.weight.init_mean, config.weight.init_std));
      g.write_conn(row++, {i, I + o, true, w});
    }
  }
  return g;
}

GenomeTensors add_node(const GenomeTensors& genome, const NodeRow& row) {
  GenomeTensors out = genome;
  inplace::add_node(out, row);
  return out;
}

GenomeTensors remove_node(const GenomeTensors& genome, NodeKey key) {
  GenomeTensors out = genome;
  inplace::remove_node(out, key);
  return out;
}

GenomeTensors add_conn(const GenomeTensors& genome, const ConnRow& row) {
  GenomeTensors out = genome;
  inplace::add_conn(out, row);
  return out;
}

GenomeTensors remove_conn(const GenomeTensors& genome, NodeKey in_key, NodeKey out_key) {
  GenomeTensors out = genome;
  inplace::remove_conn(out, in_key, out_key);
  return out;
}

GenomeTensors set_node_attr(const GenomeTensors& genome, NodeKey key, int attr_index,
                            double value) {
  if (attr_index < 0 || attr_index > node_attr::activation) {
    throw BadAttrIndex("node attribute index " + std::to_string(attr_index) + " out of range");
  }
  auto row = genome.find_node(key);
  if (!row) throw KeyNotFound("node key " + key_str(key) + " is not live");
  check_finite(value, "node attribute");
  if ((attr_index == node_attr::aggregation || attr_index == node_attr::activation) &&
      (value < 0.0 || value != std::floor(value))) {
    throw InvalidValue("function codes must be non-negative integers");
  }
  GenomeTensors out = genome;
  out.node_data_mut()[*row * kNodeWidth + 1 + static_cast<std::size_t>(attr_index)] = value;
  return out;
}

GenomeTensors set_conn_attr(const GenomeTensors& genome, NodeKey in_key, NodeKey out_key,
                            int attr_index, double value) {
  if (attr_index < 0 || attr_index > conn_attr::weight) {
    throw BadAttrIndex("connection attribute index " + std::to_string(attr_index) +
                       " out of range");
  }
  auto row = genome.find_conn(in_key, out_key);
  if (!row) throw KeyNotFound("connection " + pair_str(in_key, out_key) + " is not live");
  check_finite(value, "connection attribute");
  if (attr_index == conn_attr::enabled && value != 0.0 && value != 1.0) {
    throw InvalidValue("enabled flag must be 0 or 1");
  }
  GenomeTensors out = genome;
  out.conn_data_mut()[*row * kConnWidth + 2 + static_cast<std::size_t>(attr_index)] = value;
  return out;
}

LiveCounts count_live(GenomeView genome) {
  LiveCounts c;
  for (std::size_t r = 0; r < genome.max_nodes(); ++r) {
    if (!row_is_padding(genome.node_span(r))) ++c.nodes;
  }
  for (std::size_t r = 0; r < genome.max_conns(); ++r) {
    if (!row_is_padding(genome.conn_span(r))) ++c.conns;
  }
  return c;
}

std::vector<std::string> integrity_violations(GenomeView g) {
  std::vector<std::string> out;
  auto row_ok = [](std::span<const double> row) {
    std::size_t nans = 0;
    for (double v : row) nans += std::isnan(v) ? 1 : 0;
    return nans == 0 || nans == row.size();
  };
  auto is_int = [](double v) {
    return std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 0x1p53;
  };

  std::set<NodeKey> keys;
  for (std::size_t r = 0; r < g.max_nodes(); ++r) {
    auto row = g.node_span(r);
    if (!row_ok(row)) {
      out.push_back("node row " + std::to_string(r) + " is partially NaN");
      continue;
    }
    if (!g.node_live(r)) continue;
    double k = g.node(r, node_col::key);
    if (!is_int(k) || k < 0) {
      out.push_back("node row " + std::to_string(r) + " has a non-integer key");
      continue;
    }
    if (!std::isfinite(g.node(r, node_col::bias)) ||
        !std::isfinite(g.node(r, node_col::response))) {
      out.push_back("node row " + std::to_string(r) + " has a non-finite attribute");
    }
    for (std::size_t col : {node_col::aggregation, node_col::activation}) {
      double code = g.node(r, col);
      if (!is_int(code) || code < 0) {
        out.push_back("node row " + std::to_string(r) + " has an invalid function code");
      }
    }
    if (!keys.insert(g.node_key(r)).second) {
      out.push_back("node key " + std::to_string(g.node_key(r)) + " is duplicated");
    }
  }
  for (NodeKey k = 0; k < g.num_inputs() + g.num_outputs(); ++k) {
    if (!keys.count(k)) out.push_back("input/output node " + std::to_string(k) + " is missing");
  }

  std::set<std::pair<NodeKey, NodeKey>> pairs;
  for (std::size_t r = 0; r < g.max_conns(); ++r) {
    auto row = g.conn_span(r);
    if (!row_ok(row)) {
      out.push_back("connection row " + std::to_string(r) + " is partially NaN");
      continue;
    }
    if (!g.conn_live(r)) continue;
    if (!is_int(g.conn(r, conn_col::in)) || !is_int(g.conn(r, conn_col::out))) {
      out.push_back("connection row " + std::to_string(r) + " has a non-integer key");
      continue;
    }
    double e = g.conn(r, conn_col::enabled);
    if (e != 0.0 && e != 1.0) {
      out.push_back("connection row " + std::to_string(r) + " has an enabled flag not in {0,1}");
    }
    if (!std::isfinite(g.conn(r, conn_col::weight))) {
      out.push_back("connection row " + std::to_string(r) + " has a non-finite weight");
    }
    NodeKey in = g.conn_in(r);
    NodeKey o = g.conn_out(r);
    if (!keys.count(in) || !keys.count(o)) {
      out.push_back("connection " + pair_str(in, o) + " references a missing node");
    }
    if (g.is_input_key(o)) {
      out.push_back("connection " + pair_str(in, o) + " targets an input node");
    }
    if (!pairs.insert({in, o}).second) {
      out.push_back("connection " + pair_str(in, o) + " is duplicated");
    }
  }
  return out;
}

}  // namespace tneat
