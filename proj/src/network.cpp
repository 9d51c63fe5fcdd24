#include "tneat/network.hpp"

#include <algorithm>
#include <cstring>
#include <functional>
#include <sstream>
#include <utility>

#include "tneat/error.hpp"
#include "tneat/text.hpp"

namespace tneat {

namespace {

class KeyIndex {
 public:
  explicit KeyIndex(GenomeView g) {
    for (std::size_t r = 0; r < g.max_nodes(); ++r) {
      if (g.node_live(r)) rows_.emplace_back(g.node_key(r), static_cast<int>(r));
    }
    std::sort(rows_.begin(), rows_.end());
  }

  int row_of(NodeKey key) const {
    auto it = std::lower_bound(rows_.begin(), rows_.end(), std::make_pair(key, -1));
    if (it == rows_.end() || it->first != key) return TransformedNetwork::kNoRow;
    return it->second;
  }

 private:
  std::vector<std::pair<NodeKey, int>> rows_;
};

// Shared calculation kernel. `inputs` is B x I row-major; result is B x O.
// The per-row floating-point operation sequence does not depend on B.
Matrix run_batch(const TransformedNetwork& net, const FunctionRegistry& registry,
                 const Matrix& inputs) {
  const std::size_t M = net.max_nodes;
  const std::size_t B = inputs.rows();
  if (inputs.cols() != static_cast<std::size_t>(net.num_inputs)) {
    throw InvalidInput("expected " + std::to_string(net.num_inputs) + " inputs, got " +
                       std::to_string(inputs.cols()));
  }
  for (double x : inputs.data()) {
    if (std::isnan(x)) throw InvalidInput("input contains NaN");
  }

  // values[row * B + b]
  std::vector<double> values(M * B, kNaN);
  std::vector<char> is_input(M, 0);
  for (std::size_t i = 0; i < net.input_rows.size(); ++i) {
    const auto row = static_cast<std::size_t>(net.input_rows[i]);
    is_input[row] = 1;
    for (std::size_t b = 0; b < B; ++b) values[row * B + b] = inputs(b, i);
  }

  // gathered[b * M + n]: n-th incoming contribution for batch row b.
  // Every position of `order` is processed, padding included: a padding step
  // scans an all-masked column and writes a scratch row, so the cost of a
  // forward pass depends on the tensor shape and not on the live node count.
  std::vector<double> gathered(B * M);
  std::vector<double> scratch(B);
  for (int k_signed : net.order) {
    const bool pad = k_signed == TransformedNetwork::kNoRow;
    const std::size_t k = pad ? 0 : static_cast<std::size_t>(k_signed);
    if (!pad && is_input[k]) continue;

    std::size_t count = 0;
    for (std::size_t j = 0; j < M; ++j) {
      const double w = net.conns_expanded[j * M + k];
      if (pad || std::isnan(w)) continue;
      const double* vj = values.data() + j * B;
      for (std::size_t b = 0; b < B; ++b) gathered[b * M + count] = w * vj[b];
      ++count;
    }

    const double bias = pad ? 0.0 : net.node(k, node_col::bias);
    const double response = pad ? 1.0 : net.node(k, node_col::response);
    const int agg = pad ? aggregation::sum : static_cast<int>(net.node(k, node_col::aggregation));
    const int act = pad ? activation::identity : static_cast<int>(net.node(k, node_col::activation));
    double* vk = pad ? scratch.data() : values.data() + k * B;
    for (std::size_t b = 0; b < B; ++b) {
      const double z =
          registry.aggregate(agg, std::span<const double>(gathered.data() + b * M, count));
      vk[b] = registry.activate(act, bias + response * z);
    }
  }

  Matrix out(B, static_cast<std::size_t>(net.num_outputs));
  for (std::size_t o = 0; o < net.output_rows.size(); ++o) {
    const auto row = static_cast<std::size_t>(net.output_rows[o]);
    for (std::size_t b = 0; b < B; ++b) out(b, o) = values[row * B + b];
  }
  return out;
}

}  // namespace

bool operator==(const TransformedNetwork& a, const TransformedNetwork& b) {
  auto same_bits = [](const std::vector<double>& x, const std::vector<double>& y) {
    return x.size() == y.size() &&
           (x.empty() || std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0);
  };
  return a.max_nodes == b.max_nodes && a.num_inputs == b.num_inputs &&
         a.num_outputs == b.num_outputs && a.order == b.order && a.input_rows == b.input_rows &&
         a.output_rows == b.output_rows && same_bits(a.nodes, b.nodes) &&
         same_bits(a.conns_expanded, b.conns_expanded);
}

std::size_t TransformedNetwork::live_count() const {
  return static_cast<std::size_t>(
      std::find(order.begin(), order.end(), kNoRow) - order.begin());
}

TransformedNetwork transform(GenomeView g) {
  const std::size_t M = g.max_nodes();
  TransformedNetwork net;
  net.max_nodes = M;
  net.num_inputs = g.num_inputs();
  net.num_outputs = g.num_outputs();
  net.nodes.assign(g.node_data().begin(), g.node_data().end());
  net.order.assign(M, TransformedNetwork::kNoRow);
  net.conns_expanded.assign(M * M, kNaN);

  KeyIndex index(g);
  for (int i = 0; i < g.num_inputs() + g.num_outputs(); ++i) {
    const int row = index.row_of(i);
    if (row == TransformedNetwork::kNoRow) {
      throw InvalidInput("genome is missing input/output node " + std::to_string(i));
    }
    (i < g.num_inputs() ? net.input_rows : net.output_rows).push_back(row);
  }

  // Enabled edges go into the dense weight tensor; the topological sort then
  // works on that tensor alone (M steps of M-wide scans).
  for (std::size_t r = 0; r < g.max_conns(); ++r) {
    if (!g.conn_live(r) || !g.conn_enabled(r)) continue;
    const int from = index.row_of(g.conn_in(r));
    const int to = index.row_of(g.conn_out(r));
    if (from == TransformedNetwork::kNoRow || to == TransformedNetwork::kNoRow) {
      throw InvalidInput("connection references a missing node");
    }
    net.conns_expanded[static_cast<std::size_t>(from) * M + static_cast<std::size_t>(to)] =
        g.conn(r, conn_col::weight);
  }

  std::vector<int> indegree(M, 0);
  std::vector<char> pending(M, 0);
  std::size_t live = 0;
  for (std::size_t from = 0; from < M; ++from) {
    for (std::size_t to = 0; to < M; ++to) {
      indegree[to] += !std::isnan(net.conns_expanded[from * M + to]);
    }
  }
  for (std::size_t r = 0; r < M; ++r) {
    pending[r] = g.node_live(r);
    live += pending[r];
  }
  // Each step places the lowest pending row with no unplaced predecessor.
  std::size_t placed = 0;
  for (std::size_t step = 0; step < M; ++step) {
    std::size_t next = M;
    for (std::size_t r = 0; r < M; ++r) {
      if (pending[r] && indegree[r] == 0) {
        next = r;
        break;
      }
    }
    if (next == M) continue;
    pending[next] = 0;
    net.order[placed++] = static_cast<int>(next);
    for (std::size_t to = 0; to < M; ++to) {
      indegree[to] -= !std::isnan(net.conns_expanded[next * M + to]);
    }
  }
  if (placed != live) {
    throw CycleDetected(std::to_string(live - placed) +
                        " node(s) lie on or behind a cycle of enabled connections");
  }
  return net;
}

std::vector<double> forward(const TransformedNetwork& net, const FunctionRegistry& registry,
                            std::span<const double> input) {
  Matrix in(1, input.size());
  std::copy(input.begin(), input.end(), in.row(0).begin());
  Matrix out = run_batch(net, registry, in);
  return {out.row(0).begin(), out.row(0).end()};
}

Matrix forward_batch(const TransformedNetwork& net, const FunctionRegistry& registry,
                     const Matrix& inputs) {
  if (inputs.rows() == 0) throw InvalidInput("batch must contain at least one row");
  return run_batch(net, registry, inputs);
}

std::vector<TransformedNetwork> population_transform(const PopulationTensors& pop,
                                                     Execution mode) {
  std::vector<TransformedNetwork> nets(pop.size());
  std::vector<std::string> failures(pop.size());
  for_each_index(mode, pop.size(), [&](std::size_t i) {
    try {
      nets[i] = transform(pop.genome(i));
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });
  std::vector<PopulationError::Entry> entries;
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i].empty()) entries.push_back({i, failures[i]});
  }
  if (!entries.empty()) throw PopulationError(std::move(entries));
  return nets;
}

std::vector<Matrix> population_forward(std::span<const TransformedNetwork> nets,
                                       const FunctionRegistry& registry, const Matrix& inputs,
                                       Execution mode) {
  std::vector<Matrix> out(nets.size());
  for_each_index(mode, nets.size(),
                 [&](std::size_t i) { out[i] = forward_batch(nets[i], registry, inputs); });
  return out;
}

std::vector<Matrix> population_forward(std::span<const TransformedNetwork> nets,
                                       const FunctionRegistry& registry,
                                       std::span<const Matrix> inputs, Execution mode) {
  if (inputs.size() != nets.size()) {
    throw InvalidInput("expected one input batch per network");
  }
  std::vector<Matrix> out(nets.size());
  for_each_index(mode, nets.size(),
                 [&](std::size_t i) { out[i] = forward_batch(nets[i], registry, inputs[i]); });
  return out;
}

std::string to_dot(GenomeView g, const FunctionRegistry& registry) {
  std::ostringstream os;
  os << "digraph genome {\n  rankdir=LR;\n";
  for (std::size_t r = 0; r < g.max_nodes(); ++r) {
    if (!g.node_live(r)) continue;
    const NodeRow n = g.node_row(r);
    const char* shape = g.is_input_key(n.key) ? "box" : g.is_output_key(n.key) ? "doublecircle"
                                                                               : "circle";
    os << "  n" << n.key << " [shape=" << shape << ", label=\"" << n.key
       << "\\nbias=" << text::format_double(n.bias) << "\\n"
       << registry.activation_name(n.activation) << "\"];\n";
  }
  for (std::size_t r = 0; r < g.max_conns(); ++r) {
    if (!g.conn_live(r)) continue;
    const ConnRow c = g.conn_row(r);
    os << "  n" << c.in_key << " -> n" << c.out_key << " [label=\""
       << text::format_double(c.weight) << "\"" << (c.enabled ? "" : ", style=dashed")
       << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace tneat
