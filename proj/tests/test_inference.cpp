#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "oracle/graph_network.hpp"
#include "support/random_genome.hpp"
#include "tneat/error.hpp"
#include "tneat/functions.hpp"
#include "tneat/network.hpp"

using namespace tneat;

namespace {

const FunctionRegistry& reg() { return FunctionRegistry::builtin(); }

bool same_bits(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// 1 input, 1 output, identity/sum, w = 2, bias = 0.5.
GenomeTensors single_edge() {
  GenomeTensors g(1, 1, 3, 2);
  g.write_node(0, {0, 0.0, 1.0, aggregation::sum, activation::identity});
  g.write_node(1, {1, 0.5, 1.0, aggregation::sum, activation::identity});
  g.write_conn(0, {0, 1, true, 2.0});
  return g;
}

Matrix random_inputs(std::mt19937_64& gen, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = n(gen);
  return m;
}

}  // namespace

TEST_CASE("transform orders a chain topologically") {
  GenomeTensors g(1, 1, 4, 2);
  g.write_node(0, {0, 0, 1, 0, 0});
  g.write_node(1, {1, 0, 1, 0, 0});
  g.write_node(2, {5, 0, 1, 0, 0});
  g.write_conn(0, {0, 5, true, 1.0});
  g.write_conn(1, {5, 1, true, 1.0});
  const TransformedNetwork net = transform(g);
  CHECK(net.order == std::vector<int>{0, 2, 1, TransformedNetwork::kNoRow});
  CHECK(net.expanded(0, 2) == 1.0);
  CHECK(std::isnan(net.expanded(0, 1)));
}

TEST_CASE("disabled connections are NaN in the expanded tensor") {
  GenomeTensors g = single_edge();
  g.conn_data_mut()[conn_col::enabled] = 0.0;
  const TransformedNetwork net = transform(g);
  CHECK(std::isnan(net.expanded(0, 1)));
}

TEST_CASE("transform rejects enabled cycles") {
  GenomeTensors g(1, 1, 4, 4);
  g.write_node(0, {0, 0, 1, 0, 0});
  g.write_node(1, {1, 0, 1, 0, 0});
  g.write_node(2, {2, 0, 1, 0, 0});
  g.write_node(3, {3, 0, 1, 0, 0});
  g.write_conn(0, {0, 2, true, 1.0});
  g.write_conn(1, {2, 3, true, 1.0});
  g.write_conn(2, {3, 2, true, 1.0});
  g.write_conn(3, {3, 1, true, 1.0});
  CHECK_THROWS_AS(transform(g), CycleDetected);
  // The same cycle through a disabled edge is fine.
  g.conn_data_mut()[2 * kConnWidth + conn_col::enabled] = 0.0;
  CHECK_NOTHROW(transform(g));
}

TEST_CASE("transform invariants on random genomes") {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 300; ++t) {
    const GenomeTensors g = testing_support::random_genome(gen);
    const TransformedNetwork net = transform(g);
    const std::size_t M = g.max_nodes();
    std::vector<int> position(M, -1);
    std::size_t live = 0;
    for (std::size_t r = 0; r < M; ++r) live += g.node_live(r);
    for (std::size_t p = 0; p < M; ++p) {
      if (p < live) {
        REQUIRE(net.order[p] != TransformedNetwork::kNoRow);
        REQUIRE(position[static_cast<std::size_t>(net.order[p])] == -1);
        position[static_cast<std::size_t>(net.order[p])] = static_cast<int>(p);
      } else {
        REQUIRE(net.order[p] == TransformedNetwork::kNoRow);
      }
    }
    for (std::size_t i = 0; i < M; ++i) {
      for (std::size_t j = 0; j < M; ++j) {
        if (std::isnan(net.expanded(i, j))) continue;
        REQUIRE(position[i] < position[j]);
      }
    }
    std::size_t enabled = 0, expanded = 0;
    for (std::size_t r = 0; r < g.max_conns(); ++r) enabled += g.conn_live(r) && g.conn_enabled(r);
    for (double w : net.conns_expanded) expanded += !std::isnan(w);
    CHECK(enabled == expanded);
  }
}

TEST_CASE("forward: single edge fixture") {
  const TransformedNetwork net = transform(single_edge());
  const double x[] = {3.0};
  CHECK(forward(net, reg(), x) == std::vector<double>{6.5});
}

TEST_CASE("forward: output without inputs emits its activated bias") {
  GenomeTensors g(1, 1, 2, 1);
  g.write_node(0, {0, 0, 1, 0, 0});
  g.write_node(1, {1, -0.75, 2.0, aggregation::sum, activation::identity});
  const double x[] = {10.0};
  CHECK(forward(transform(g), reg(), x)[0] == -0.75);
  g.write_node(1, {1, 0.3, 1.0, aggregation::product, activation::tanh});
  CHECK(forward(transform(g), reg(), x)[0] == std::tanh(0.3));
}

TEST_CASE("forward: response scales the aggregate") {
  GenomeTensors g = single_edge();
  g.node_data_mut()[kNodeWidth + node_col::response] = 0.5;
  const double x[] = {3.0};
  CHECK(forward(transform(g), reg(), x)[0] == 0.5 + 0.5 * 6.0);
}

TEST_CASE("forward: input validation") {
  const TransformedNetwork net = transform(single_edge());
  const double two[] = {1.0, 2.0};
  CHECK_THROWS_AS(forward(net, reg(), two), InvalidInput);
  const double nan[] = {std::nan("")};
  CHECK_THROWS_AS(forward(net, reg(), nan), InvalidInput);
  CHECK_THROWS_AS(forward_batch(net, reg(), Matrix(0, 1)), InvalidInput);
}

TEST_CASE("forward matches the graph oracle on random genomes") {
  std::mt19937_64 gen(17);
  for (int t = 0; t < 200; ++t) {
    const GenomeTensors g = testing_support::random_genome(gen);
    const TransformedNetwork net = transform(g);
    const oracle::GraphNetwork graph = oracle::decode(g);
    const Matrix in = random_inputs(gen, 10, 2);
    for (std::size_t b = 0; b < in.rows(); ++b) {
      const auto got = forward(net, reg(), in.row(b));
      const auto want = oracle::graph_forward(graph, reg(), in.row(b));
      REQUIRE(got.size() == want.size());
      for (std::size_t o = 0; o < got.size(); ++o) REQUIRE(std::fabs(got[o] - want[o]) <= 1e-9);
    }
  }
}

TEST_CASE("forward_batch equals row-by-row forward bitwise") {
  std::mt19937_64 gen(23);
  for (int t = 0; t < 20; ++t) {
    const GenomeTensors g = testing_support::random_genome(gen);
    const TransformedNetwork net = transform(g);
    const Matrix in = random_inputs(gen, 256, 2);
    const Matrix out = forward_batch(net, reg(), in);
    for (std::size_t b = 0; b < in.rows(); ++b) {
      REQUIRE(same_bits(out.row(b), forward(net, reg(), in.row(b))));
    }
  }
}

TEST_CASE("forward_batch: duplicated rows give duplicated outputs") {
  std::mt19937_64 gen(29);
  const TransformedNetwork net = transform(testing_support::random_genome(gen));
  Matrix in(2, 2);
  in(0, 0) = in(1, 0) = 0.25;
  in(0, 1) = in(1, 1) = -1.5;
  const Matrix out = forward_batch(net, reg(), in);
  CHECK(same_bits(out.row(0), out.row(1)));
}

TEST_CASE("permuting live rows leaves outputs unchanged") {
  std::mt19937_64 gen(31);
  for (int t = 0; t < 100; ++t) {
    const GenomeTensors g = testing_support::random_genome(gen);
    const GenomeTensors p = testing_support::permute_rows(g, gen);
    const Matrix in = random_inputs(gen, 5, 2);
    const Matrix a = forward_batch(transform(g), reg(), in);
    const Matrix b = forward_batch(transform(p), reg(), in);
    for (std::size_t i = 0; i < a.data().size(); ++i) {
      REQUIRE(std::fabs(a.data()[i] - b.data()[i]) <= 1e-12 * std::max(1.0, std::fabs(a.data()[i])));
    }
  }
}

TEST_CASE("outputs contain no NaN for valid genomes and finite inputs") {
  std::mt19937_64 gen(37);
  for (int t = 0; t < 300; ++t) {
    const GenomeTensors g = testing_support::random_genome(gen);
    const Matrix out = forward_batch(transform(g), reg(), random_inputs(gen, 4, 2));
    for (double v : out.data()) REQUIRE_FALSE(std::isnan(v));
  }
}

TEST_CASE("population paths equal the per-genome loop") {
  std::mt19937_64 gen(41);
  testing_support::RandomGenomeSpec spec;
  PopulationTensors pop(100, spec.inputs, spec.outputs, spec.max_nodes, spec.max_conns);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    pop.set_genome(i, testing_support::random_genome(gen, spec));
  }
  const auto par = population_transform(pop, Execution::parallel);
  const auto ser = population_transform(pop, Execution::serial);
  REQUIRE(par.size() == 100);
  const Matrix in = random_inputs(gen, 8, 2);
  const auto out_par = population_forward(par, reg(), in, Execution::parallel);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const TransformedNetwork single = transform(pop.genome(i));
    CHECK(par[i] == single);
    CHECK(ser[i] == single);
    CHECK(same_bits(out_par[i].data(), forward_batch(single, reg(), in).data()));
  }

  std::vector<Matrix> per_genome;
  for (std::size_t i = 0; i < pop.size(); ++i) per_genome.push_back(random_inputs(gen, 3, 2));
  const auto a = population_forward(par, reg(), std::span<const Matrix>(per_genome));
  const auto b = population_forward(par, reg(), std::span<const Matrix>(per_genome),
                                    Execution::serial);
  for (std::size_t i = 0; i < pop.size(); ++i) CHECK(same_bits(a[i].data(), b[i].data()));
}

TEST_CASE("population of one and identical genomes") {
  std::mt19937_64 gen(43);
  const GenomeTensors g = testing_support::random_genome(gen);
  PopulationTensors pop(3, g.num_inputs(), g.num_outputs(), g.max_nodes(), g.max_conns());
  for (std::size_t i = 0; i < 3; ++i) pop.set_genome(i, g);
  const auto nets = population_transform(pop);
  const Matrix in = random_inputs(gen, 4, 2);
  const auto out = population_forward(nets, reg(), in);
  CHECK(same_bits(out[0].data(), out[1].data()));
  CHECK(same_bits(out[0].data(), out[2].data()));
  CHECK(same_bits(out[0].data(), forward_batch(transform(g), reg(), in).data()));
}

TEST_CASE("population_transform reports cyclic genomes by index") {
  std::mt19937_64 gen(47);
  testing_support::RandomGenomeSpec spec;
  spec.inputs = 1;
  PopulationTensors pop(4, 1, 1, spec.max_nodes, spec.max_conns);
  for (std::size_t i = 0; i < 4; ++i) pop.set_genome(i, testing_support::random_genome(gen, spec));
  GenomeTensors bad(1, 1, spec.max_nodes, spec.max_conns);
  bad.write_node(0, {0, 0, 1, 0, 0});
  bad.write_node(1, {1, 0, 1, 0, 0});
  bad.write_node(2, {2, 0, 1, 0, 0});
  bad.write_node(3, {3, 0, 1, 0, 0});
  bad.write_conn(0, {2, 3, true, 1.0});
  bad.write_conn(1, {3, 2, true, 1.0});
  pop.set_genome(2, bad);
  try {
    population_transform(pop);
    FAIL("expected PopulationError");
  } catch (const PopulationError& e) {
    REQUIRE(e.entries().size() == 1);
    CHECK(e.entries()[0].index == 2);
  }
}

TEST_CASE("transform once, forward many") {
  std::mt19937_64 gen(53);
  const GenomeTensors g = testing_support::random_genome(gen);
  const TransformedNetwork net = transform(g);
  const Matrix in = random_inputs(gen, 100, 2);
  for (std::size_t b = 0; b < in.rows(); ++b) {
    CHECK(same_bits(forward(net, reg(), in.row(b)), forward(transform(g), reg(), in.row(b))));
  }
}

TEST_CASE("dot rendering") {
  GenomeTensors g = single_edge();
  std::string dot = to_dot(g, reg());
  CHECK(dot.find("digraph") == 0);
  CHECK(dot.find("n0 -> n1") != std::string::npos);
  CHECK(dot.find("dashed") == std::string::npos);
  g.conn_data_mut()[conn_col::enabled] = 0.0;
  dot = to_dot(g, reg());
  CHECK(dot.find("style=dashed") != std::string::npos);
  CHECK(dot.find("identity") != std::string::npos);
}
