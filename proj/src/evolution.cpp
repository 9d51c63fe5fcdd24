#include "tneat/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "tneat/error.hpp"

namespace tneat {

namespace {

// Key -> row lookup over live node rows.
class RowIndex {
 public:
  explicit RowIndex(GenomeView g) {
    for (std::size_t r = 0; r < g.max_nodes(); ++r) {
      if (g.node_live(r)) rows_.emplace_back(g.node_key(r), r);
    }
    std::sort(rows_.begin(), rows_.end());
  }

  std::optional<std::size_t> row_of(NodeKey key) const {
    auto it = std::lower_bound(rows_.begin(), rows_.end(), std::make_pair(key, std::size_t{0}));
    if (it == rows_.end() || it->first != key) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<std::pair<NodeKey, std::size_t>> rows_;
};

// Sort key standing in for padding rows.
constexpr NodeKey kPad = std::numeric_limits<NodeKey>::max();

// (in, out) -> row lookup over live connection rows.
class ConnIndex {
 public:
  explicit ConnIndex(GenomeView g) {
    for (std::size_t r = 0; r < g.max_conns(); ++r) {
      if (g.conn_live(r)) rows_.push_back({{g.conn_in(r), g.conn_out(r)}, r});
    }
    std::sort(rows_.begin(), rows_.end());
  }

  std::optional<std::size_t> row_of(NodeKey in_key, NodeKey out_key) const {
    const std::pair<std::pair<NodeKey, NodeKey>, std::size_t> probe{{in_key, out_key}, 0};
    auto it = std::lower_bound(rows_.begin(), rows_.end(), probe);
    if (it == rows_.end() || it->first != probe.first) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<std::pair<std::pair<NodeKey, NodeKey>, std::size_t>> rows_;
};

// Transitive closure of the live connections as one bit row per node row:
// bit b of row a is set iff row b is reachable from row a (a reaches itself).
// Built with Warshall's sweep over the full node capacity.
class Reachability {
 public:
  Reachability(GenomeView g, const RowIndex& index)
      : m_(g.max_nodes()), words_((m_ + 63) / 64), bits_(m_ * words_, 0) {
    for (std::size_t r = 0; r < m_; ++r) set(r, r);
    for (std::size_t r = 0; r < g.max_conns(); ++r) {
      if (!g.conn_live(r)) continue;
      auto from = index.row_of(g.conn_in(r));
      auto to = index.row_of(g.conn_out(r));
      if (from && to) set(*from, *to);
    }
    for (std::size_t k = 0; k < m_; ++k) {
      const std::uint64_t* via = bits_.data() + k * words_;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!reaches(i, k)) continue;
        std::uint64_t* row = bits_.data() + i * words_;
        for (std::size_t w = 0; w < words_; ++w) row[w] |= via[w];
      }
    }
  }

  bool reaches(std::size_t from, std::size_t to) const {
    return (bits_[from * words_ + to / 64] >> (to % 64)) & 1U;
  }

 private:
  void set(std::size_t from, std::size_t to) {
    bits_[from * words_ + to / 64] |= std::uint64_t{1} << (to % 64);
  }

  std::size_t m_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

double mutate_real(double value, const AttrConfig& a, const NeatConfig& config, RngStream& rng) {
  if (rng.uniform() < a.replace_rate) {
    value = rng.normal(a.init_mean, a.init_std);
  } else if (rng.uniform() < a.mutate_rate) {
    value += rng.normal(0.0, a.mutate_power);
  }
  return std::clamp(value, config.attr_min, config.attr_max);
}

int mutate_choice(int value, double replace_rate, const std::vector<int>& options,
                  RngStream& rng) {
  if (rng.uniform() < replace_rate) {
    return options[rng.index(options.size())];
  }
  return value;
}

std::size_t count_free_conn_rows(const GenomeTensors& g) {
  std::size_t n = 0;
  for (std::size_t r = 0; r < g.max_conns(); ++r) {
    if (row_is_padding(g.conn_span(r))) ++n;
  }
  return n;
}

void split_connection(GenomeTensors& g, const NeatConfig& config, RngStream& rng,
                      NodeKey new_key) {
  std::vector<std::size_t> enabled;
  for (std::size_t r = 0; r < g.max_conns(); ++r) {
    if (g.conn_live(r) && g.conn_enabled(r)) enabled.push_back(r);
  }
  if (enabled.empty()) return;
  const std::size_t pick = enabled[rng.index(enabled.size())];
  if (!inplace::first_free_node_row(g) || count_free_conn_rows(g) < 2 || g.find_node(new_key)) {
    return;
  }
  const ConnRow old = g.conn_row(pick);
  NodeRow node;
  node.key = new_key;
  node.bias = std::clamp(rng.normal(config.bias.init_mean, config.bias.init_std), config.attr_min,
                         config.attr_max);
  node.response = config.response.init_mean;
  node.aggregation = config.aggregation_default;
  node.activation = config.activation_default;

  g.conn_data_mut()[pick * kConnWidth + conn_col::enabled] = 0.0;
  inplace::add_node(g, node);
  inplace::add_conn(g, {old.in_key, new_key, true, 1.0});
  inplace::add_conn(g, {new_key, old.out_key, true, old.weight});
}

void delete_hidden_node(GenomeTensors& g, RngStream& rng) {
  std::vector<NodeKey> hidden;
  for (std::size_t r = 0; r < g.max_nodes(); ++r) {
    if (g.node_live(r) && g.is_hidden_key(g.node_key(r))) hidden.push_back(g.node_key(r));
  }
  if (hidden.empty()) return;
  inplace::remove_node(g, hidden[rng.index(hidden.size())]);
}

void add_connection(GenomeTensors& g, const NeatConfig& config, RngStream& rng) {
  if (!inplace::first_free_conn_row(g)) return;
  const std::size_t M = g.max_nodes();
  RowIndex index(g);
  const bool feedforward = config.network_type == NetworkType::feedforward;
  std::optional<Reachability> reach;
  if (feedforward) reach.emplace(g, index);

  std::vector<char> connected(M * M, 0);
  for (std::size_t r = 0; r < g.max_conns(); ++r) {
    if (!g.conn_live(r)) continue;
    auto from = index.row_of(g.conn_in(r));
    auto to = index.row_of(g.conn_out(r));
    if (from && to) connected[*from * M + *to] = 1;
  }

  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  for (std::size_t s = 0; s < M; ++s) {
    if (!g.node_live(s) || g.is_output_key(g.node_key(s))) continue;
    for (std::size_t d = 0; d < M; ++d) {
      if (!g.node_live(d) || g.is_input_key(g.node_key(d))) continue;
      if (connected[s * M + d]) continue;
      if (reach && reach->reaches(d, s)) continue;  // d ~> s would close a cycle
      candidates.emplace_back(s, d);
    }
  }
  if (candidates.empty()) return;
  const auto [s, d] = candidates[rng.index(candidates.size())];
  const double w = std::clamp(rng.normal(config.weight.init_mean, config.weight.init_std),
                              config.attr_min, config.attr_max);
  inplace::add_conn(g, {g.node_key(s), g.node_key(d), true, w});
}

void delete_connection(GenomeTensors& g, RngStream& rng) {
  std::vector<std::size_t> live;
  for (std::size_t r = 0; r < g.max_conns(); ++r) {
    if (g.conn_live(r)) live.push_back(r);
  }
  if (live.empty()) return;
  g.clear_conn(live[rng.index(live.size())]);
}

// Every row draws from its own stream whether or not it is live; padding and
// input rows discard the result. The work is therefore fixed by the tensor
// shape, and a live gene's draws never depend on its neighbours.
void mutate_attributes(GenomeTensors& g, const NeatConfig& config, const RngStream& rng) {
  const RngStream node_rng = rng.split(mutation_stream::node_attributes);
  auto nodes = g.node_data_mut();
  for (std::size_t r = 0; r < g.max_nodes(); ++r) {
    const bool active = g.node_live(r) && !g.is_input_key(g.node_key(r));
    RngStream gene = node_rng.split(r);
    double* row = nodes.data() + r * kNodeWidth;
    const double bias = mutate_real(active ? row[node_col::bias] : 0.0, config.bias, config, gene);
    const double response =
        mutate_real(active ? row[node_col::response] : 1.0, config.response, config, gene);
    const int agg = mutate_choice(active ? static_cast<int>(row[node_col::aggregation]) : 0,
                                  config.aggregation_replace_rate, config.aggregation_options,
                                  gene);
    const int act = mutate_choice(active ? static_cast<int>(row[node_col::activation]) : 0,
                                  config.activation_replace_rate, config.activation_options, gene);
    if (!active) continue;
    row[node_col::bias] = bias;
    row[node_col::response] = response;
    row[node_col::aggregation] = agg;
    row[node_col::activation] = act;
  }

  const RngStream conn_rng = rng.split(mutation_stream::conn_attributes);
  auto conns = g.conn_data_mut();
  for (std::size_t r = 0; r < g.max_conns(); ++r) {
    const bool active = g.conn_live(r);
    RngStream gene = conn_rng.split(r);
    double* row = conns.data() + r * kConnWidth;
    const double weight =
        mutate_real(active ? row[conn_col::weight] : 0.0, config.weight, config, gene);
    const bool toggle = gene.uniform() < config.enabled_mutate_rate;
    if (!active) continue;
    row[conn_col::weight] = weight;
    if (toggle) row[conn_col::enabled] = row[conn_col::enabled] != 0.0 ? 0.0 : 1.0;
  }
}

void require_same_shape(GenomeView a, GenomeView b) {
  if (a.num_inputs() != b.num_inputs() || a.num_outputs() != b.num_outputs()) {
    throw ShapeMismatch("genomes have different input/output counts");
  }
}

}  // namespace

GenomeTensors mutate(const GenomeTensors& genome, const NeatConfig& config, RngStream rng,
                     NodeKey new_node_key) {
  GenomeTensors g = genome;
  {
    RngStream step = rng.split(mutation_stream::node_add);
    if (step.bernoulli(config.node_add)) split_connection(g, config, step, new_node_key);
  }
  {
    RngStream step = rng.split(mutation_stream::node_delete);
    if (step.bernoulli(config.node_delete)) delete_hidden_node(g, step);
  }
  {
    RngStream step = rng.split(mutation_stream::conn_add);
    if (step.bernoulli(config.conn_add)) add_connection(g, config, step);
  }
  {
    RngStream step = rng.split(mutation_stream::conn_delete);
    if (step.bernoulli(config.conn_delete)) delete_connection(g, step);
  }
  mutate_attributes(g, config, rng);
  return g;
}

GenomeTensors mutate(const GenomeTensors& genome, const NeatConfig& config, RngStream rng,
                     NodeKeyAllocator& allocator) {
  return mutate(genome, config, rng, allocator.take());
}

GenomeTensors crossover(const GenomeTensors& parent_fit, const GenomeTensors& parent_less,
                        RngStream rng) {
  require_same_shape(parent_fit, parent_less);
  if (parent_fit.max_nodes() != parent_less.max_nodes() ||
      parent_fit.max_conns() != parent_less.max_conns()) {
    throw ShapeMismatch("genomes have different tensor capacities");
  }
  // A masked blend: one coin per attribute cell of every row, applied where
  // the row is live in both parents.
  const RowIndex less_nodes(parent_less);
  const ConnIndex less_conns(parent_less);
  GenomeTensors child = parent_fit;
  auto nodes = child.node_data_mut();
  for (std::size_t r = 0; r < child.max_nodes(); ++r) {
    bool take[kNodeWidth] = {};
    for (std::size_t col = 1; col < kNodeWidth; ++col) take[col] = rng.bernoulli(0.5);
    if (!child.node_live(r)) continue;
    const auto other = less_nodes.row_of(child.node_key(r));
    if (!other) continue;
    for (std::size_t col = 1; col < kNodeWidth; ++col) {
      if (take[col]) nodes[r * kNodeWidth + col] = parent_less.node(*other, col);
    }
  }
  auto conns = child.conn_data_mut();
  for (std::size_t r = 0; r < child.max_conns(); ++r) {
    bool take[kConnWidth] = {};
    for (std::size_t col = conn_col::enabled; col < kConnWidth; ++col) take[col] = rng.bernoulli(0.5);
    if (!child.conn_live(r)) continue;
    const auto other = less_conns.row_of(child.conn_in(r), child.conn_out(r));
    if (!other) continue;
    for (std::size_t col = conn_col::enabled; col < kConnWidth; ++col) {
      if (take[col]) conns[r * kConnWidth + col] = parent_less.conn(*other, col);
    }
  }
  return child;
}

double distance(GenomeView a, GenomeView b, const NeatConfig& config) {
  require_same_shape(a, b);

  // Every row takes part: padding rows sort last under a sentinel key and are
  // skipped by the merge as masked steps.
  using NodeEntry = std::pair<NodeKey, std::size_t>;
  using ConnEntry = std::pair<std::pair<NodeKey, NodeKey>, std::size_t>;
  auto node_entries = [](GenomeView g) {
    std::vector<NodeEntry> v(g.max_nodes());
    for (std::size_t r = 0; r < v.size(); ++r) v[r] = {g.node_live(r) ? g.node_key(r) : kPad, r};
    std::sort(v.begin(), v.end());
    return v;
  };
  auto conn_entries = [](GenomeView g) {
    std::vector<ConnEntry> v(g.max_conns());
    for (std::size_t r = 0; r < v.size(); ++r) {
      v[r] = {g.conn_live(r) ? std::make_pair(g.conn_in(r), g.conn_out(r))
                             : std::make_pair(kPad, kPad),
              r};
    }
    std::sort(v.begin(), v.end());
    return v;
  };

  std::size_t live_a = 0, live_b = 0;
  std::size_t disjoint = 0;
  std::size_t homologous = 0;
  double attr_sum = 0.0;

  // Walks two key-sorted entry lists; `same` scores a homologous pair.
  auto merge = [&](const auto& ea, const auto& eb, const auto& pad, auto&& same) {
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
      const bool la = i < ea.size() && ea[i].first != pad;
      const bool lb = j < eb.size() && eb[j].first != pad;
      if (!la && !lb) {
        i += i < ea.size();
        j += j < eb.size();
      } else if (!lb || (la && ea[i].first < eb[j].first)) {
        ++disjoint, ++live_a, ++i;
      } else if (!la || eb[j].first < ea[i].first) {
        ++disjoint, ++live_b, ++j;
      } else {
        attr_sum += same(ea[i].second, eb[j].second);
        ++homologous, ++live_a, ++live_b, ++i, ++j;
      }
    }
  };

  merge(node_entries(a), node_entries(b), kPad, [&](std::size_t ra, std::size_t rb) {
    const double d = std::fabs(a.node(ra, node_col::bias) - b.node(rb, node_col::bias)) +
                     std::fabs(a.node(ra, node_col::response) - b.node(rb, node_col::response)) +
                     (a.node(ra, node_col::aggregation) != b.node(rb, node_col::aggregation)) +
                     (a.node(ra, node_col::activation) != b.node(rb, node_col::activation));
    return d / 4.0;
  });
  merge(conn_entries(a), conn_entries(b), std::make_pair(kPad, kPad),
        [&](std::size_t ra, std::size_t rb) {
          const double d =
              std::fabs(a.conn(ra, conn_col::weight) - b.conn(rb, conn_col::weight)) +
              std::fabs(a.conn(ra, conn_col::enabled) - b.conn(rb, conn_col::enabled));
          return d / 2.0;
        });

  const std::size_t n = std::max(live_a, live_b);
  const double disjoint_term = n == 0 ? 0.0 : static_cast<double>(disjoint) / static_cast<double>(n);
  const double homologous_term =
      homologous == 0 ? 0.0 : attr_sum / static_cast<double>(homologous);
  return config.compatibility_disjoint * disjoint_term +
         config.compatibility_homologous * homologous_term;
}

bool creates_cycle(GenomeView genome, NodeKey in_key, NodeKey out_key) {
  if (in_key == out_key) return true;
  RowIndex index(genome);
  auto from = index.row_of(in_key);
  auto to = index.row_of(out_key);
  if (!from || !to) return false;
  return Reachability(genome, index).reaches(*to, *from);
}

}  // namespace tneat
