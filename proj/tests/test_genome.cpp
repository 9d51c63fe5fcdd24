#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "oracle/graph_network.hpp"
#include "support/random_genome.hpp"
#include "tneat/config.hpp"
#include "tneat/error.hpp"
#include "tneat/genome.hpp"
#include "tneat/genome_io.hpp"
#include "tneat/rng.hpp"

using namespace tneat;

namespace {

NeatConfig io_config(int I, int O, int max_nodes, int max_conns) {
  NeatConfig c;
  c.inputs = I;
  c.outputs = O;
  c.max_nodes = max_nodes;
  c.max_conns = max_conns;
  return c;
}

bool node_row_is_nan(const GenomeTensors& g, std::size_t r) { return row_is_padding(g.node_span(r)); }
bool conn_row_is_nan(const GenomeTensors& g, std::size_t r) { return row_is_padding(g.conn_span(r)); }

// Genome with nodes [0, 1, 7] (I=1, O=1) and connections (0,7), (7,1).
GenomeTensors with_hidden_seven() {
  GenomeTensors g(1, 1, 4, 4);
  g.write_node(0, {0, 0.0, 1.0, 0, 0});
  g.write_node(1, {1, 0.1, 1.0, 0, 1});
  g.write_node(2, {7, 0.2, 1.0, 0, 1});
  g.write_conn(0, {0, 7, true, 0.5});
  g.write_conn(1, {7, 1, true, -0.5});
  return g;
}

}  // namespace

TEST_CASE("init_genome builds full input-output connectivity") {
  const GenomeTensors g = init_genome(io_config(2, 1, 4, 4), RngStream(1));
  CHECK(g.node_key(0) == 0);
  CHECK(g.node_key(1) == 1);
  CHECK(g.node_key(2) == 2);
  CHECK(node_row_is_nan(g, 3));
  CHECK(g.conn_row(0).in_key == 0);
  CHECK(g.conn_row(0).out_key == 2);
  CHECK(g.conn_row(1).in_key == 1);
  CHECK(g.conn_row(1).out_key == 2);
  CHECK(conn_row_is_nan(g, 2));
  CHECK(conn_row_is_nan(g, 3));
  CHECK(count_live(g) == LiveCounts{3, 2});
}

TEST_CASE("init_genome with zero variance uses the init means") {
  NeatConfig c = io_config(1, 1, 2, 1);
  c.bias = {0.0, 0.0, 0.5, 0.7, 0.1};
  c.response = {1.0, 0.0, 0.0, 0.0, 0.0};
  c.weight = {0.0, 0.0, 0.5, 0.8, 0.1};
  const GenomeTensors g = init_genome(c, RngStream(5));
  const NodeRow out = g.node_row(*g.find_node(1));
  CHECK(out.bias == 0.0);
  CHECK(out.response == 1.0);
  const ConnRow conn = g.conn_row(*g.find_conn(0, 1));
  CHECK(conn.weight == 0.0);
  CHECK(conn.enabled);
}

TEST_CASE("init_genome with three inputs and two outputs has six connections") {
  const GenomeTensors g = init_genome(io_config(3, 2, 8, 8), RngStream(2));
  CHECK(count_live(g).conns == 6);
  for (NodeKey i = 0; i < 3; ++i) {
    for (NodeKey o = 3; o < 5; ++o) CHECK(g.find_conn(i, o).has_value());
  }
}

TEST_CASE("init_genome rejects insufficient capacity") {
  CHECK_THROWS_AS(init_genome(io_config(2, 2, 3, 8), RngStream(0)), ConfigError);
  CHECK_THROWS_AS(init_genome(io_config(2, 2, 8, 3), RngStream(0)), ConfigError);
}

TEST_CASE("add_node fills the first NaN row") {
  GenomeTensors g(1, 1, 4, 1);
  g.write_node(0, {0, 0, 1, 0, 0});
  g.write_node(1, {1, 0, 1, 0, 0});
  const GenomeTensors out = add_node(g, {7, 0.3, 1.0, 0, 1});
  CHECK(out.node_key(2) == 7);
  CHECK(node_row_is_nan(out, 3));
  CHECK(out.node_row(0) == g.node_row(0));
  CHECK(out.node_row(1) == g.node_row(1));
  // The argument is left untouched.
  CHECK(node_row_is_nan(g, 2));
}

TEST_CASE("add_node reuses a hole left by removal") {
  GenomeTensors g(1, 1, 4, 1);
  g.write_node(0, {0, 0, 1, 0, 0});
  g.write_node(2, {1, 0, 1, 0, 0});
  // Oracle: linear scan for the first all-NaN row.
  std::size_t expected = 0;
  while (!node_row_is_nan(g, expected)) ++expected;
  const GenomeTensors out = add_node(g, {9, 0, 1, 0, 0});
  CHECK(expected == 1);
  CHECK(out.node_key(expected) == 9);
}

TEST_CASE("add_node errors") {
  GenomeTensors full(1, 1, 2, 1);
  full.write_node(0, {0, 0, 1, 0, 0});
  full.write_node(1, {1, 0, 1, 0, 0});
  CHECK_THROWS_AS(add_node(full, {5, 0, 1, 0, 0}), CapacityFull);
  GenomeTensors g(1, 1, 3, 1);
  g.write_node(0, {0, 0, 1, 0, 0});
  g.write_node(1, {1, 0, 1, 0, 0});
  CHECK_THROWS_AS(add_node(g, {1, 0, 1, 0, 0}), DuplicateKey);
}

TEST_CASE("remove_node cascades to incident connections") {
  const GenomeTensors out = remove_node(with_hidden_seven(), 7);
  CHECK(node_row_is_nan(out, 2));
  CHECK(conn_row_is_nan(out, 0));
  CHECK(conn_row_is_nan(out, 1));
  CHECK(count_live(out) == LiveCounts{2, 0});
}

TEST_CASE("remove_node protects inputs and outputs") {
  CHECK_THROWS_AS(remove_node(with_hidden_seven(), 0), ProtectedNode);
  CHECK_THROWS_AS(remove_node(with_hidden_seven(), 1), ProtectedNode);
  CHECK_THROWS_AS(remove_node(with_hidden_seven(), 42), KeyNotFound);
}

TEST_CASE("remove_node of an isolated hidden node touches only its row") {
  GenomeTensors g = with_hidden_seven();
  g = add_node(g, {9, 0, 1, 0, 0});
  const GenomeTensors out = remove_node(g, 9);
  CHECK(out == with_hidden_seven());
}

TEST_CASE("add_conn and its errors") {
  GenomeTensors g(2, 1, 3, 2);
  g.write_node(0, {0, 0, 1, 0, 0});
  g.write_node(1, {1, 0, 1, 0, 0});
  g.write_node(2, {2, 0, 1, 0, 0});
  g.write_conn(0, {0, 2, true, 0.5});
  const GenomeTensors out = add_conn(g, {1, 2, true, 0.25});
  CHECK(out.conn_row(1) == ConnRow{1, 2, true, 0.25});
  CHECK_THROWS_AS(add_conn(g, {0, 2, true, 1.0}), DuplicateConn);
  CHECK_THROWS_AS(add_conn(g, {0, 9, true, 1.0}), DanglingEndpoint);
  CHECK_THROWS_AS(add_conn(out, {2, 2, true, 1.0}), CapacityFull);
  CHECK_THROWS_AS(add_conn(g, {2, 0, true, 1.0}), InvalidValue);  // into an input
}

TEST_CASE("remove_conn") {
  GenomeTensors g(2, 1, 3, 2);
  g.write_node(0, {0, 0, 1, 0, 0});
  g.write_node(1, {1, 0, 1, 0, 0});
  g.write_node(2, {2, 0, 1, 0, 0});
  g.write_conn(0, {0, 2, true, 0.5});
  g.write_conn(1, {1, 2, true, 0.5});
  const GenomeTensors once = remove_conn(g, 0, 2);
  CHECK(conn_row_is_nan(once, 0));
  CHECK(once.conn_row(1) == g.conn_row(1));
  CHECK_THROWS_AS(remove_conn(once, 0, 2), KeyNotFound);

  // Isolating a hidden node never removes it.
  const GenomeTensors h = remove_conn(remove_conn(with_hidden_seven(), 0, 7), 7, 1);
  CHECK(h.find_node(7).has_value());
}

TEST_CASE("set_node_attr and set_conn_attr change exactly one cell") {
  const GenomeTensors g = with_hidden_seven();
  const GenomeTensors b = set_node_attr(g, 1, node_attr::bias, 0.5);
  CHECK(b.node(*b.find_node(1), 1) == 0.5);
  const GenomeTensors a = set_node_attr(g, 1, node_attr::activation, activation::sigmoid);
  CHECK(a.node(*a.find_node(1), 4) == 2.0);
  CHECK_THROWS_AS(set_node_attr(g, 1, 4, 0.0), BadAttrIndex);
  CHECK_THROWS_AS(set_node_attr(g, 3, node_attr::bias, 0.0), KeyNotFound);

  const GenomeTensors w = set_conn_attr(g, 0, 7, conn_attr::weight, -1.25);
  CHECK(w.conn(*w.find_conn(0, 7), 3) == -1.25);
  const GenomeTensors d = set_conn_attr(g, 0, 7, conn_attr::enabled, 0.0);
  CHECK(d.conn_live(*d.find_conn(0, 7)));
  CHECK_FALSE(d.conn_enabled(*d.find_conn(0, 7)));
  CHECK_THROWS_AS(set_conn_attr(g, 0, 7, 2, 0.0), BadAttrIndex);
  CHECK_THROWS_AS(set_conn_attr(g, 0, 1, conn_attr::weight, 0.0), KeyNotFound);

  // Every other cell is bitwise unchanged.
  std::size_t changed = 0;
  for (std::size_t i = 0; i < g.conn_data().size(); ++i) {
    changed += std::memcmp(&g.conn_data()[i], &w.conn_data()[i], sizeof(double)) != 0;
  }
  CHECK(changed == 1);
}

TEST_CASE("count_live") {
  CHECK(count_live(init_genome(io_config(2, 1, 4, 4), RngStream(0))) == LiveCounts{3, 2});
  const GenomeTensors g = with_hidden_seven();
  const LiveCounts before = count_live(g);
  const LiveCounts after = count_live(remove_node(g, 7));
  CHECK(after.nodes == before.nodes - 1);
  CHECK(after.conns == before.conns - 2);
  CHECK(count_live(GenomeTensors(1, 1, 3, 3)) == LiveCounts{0, 0});
}

TEST_CASE("add_node after remove_node restores the genome up to row position") {
  GenomeTensors g = with_hidden_seven();
  g = add_node(g, {9, 0.25, 1.5, 1, 2});
  const NodeRow row = g.node_row(*g.find_node(9));
  const GenomeTensors back = add_node(remove_node(g, 9), row);
  CHECK(oracle::decode(back) == oracle::decode(g));
}

TEST_CASE("genome text round trip is bitwise") {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 200; ++i) {
    const GenomeTensors g = testing_support::random_genome(gen);
    const std::string doc = serialize_genome(g);
    const GenomeTensors back = parse_genome(doc);
    REQUIRE(back == g);
    CHECK(serialize_genome(back) == doc);
  }
  const GenomeTensors init = init_genome(io_config(2, 1, 5, 6), RngStream(3));
  CHECK(parse_genome(serialize_genome(init)) == init);
}

TEST_CASE("genome text encodes NaN as null") {
  const std::string doc = serialize_genome(init_genome(io_config(1, 1, 3, 2), RngStream(0)));
  CHECK(doc.find("null null null null null") != std::string::npos);
  const GenomeTensors back = parse_genome(doc);
  CHECK(row_is_padding(back.node_span(2)));
  CHECK(row_is_padding(back.conn_span(1)));
}

TEST_CASE("parse_genome reports a dangling connection with its line") {
  std::string doc = serialize_genome(with_hidden_seven());
  // Point connection (7,1) at a node that does not exist.
  const auto pos = doc.find("7 1 1 ");
  REQUIRE(pos != std::string::npos);
  doc.replace(pos, 2, "8 ");
  try {
    parse_genome(doc);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.field().find("conns[1]") == 0);
    CHECK(e.line() > 0);
  }
}

TEST_CASE("parse_genome rejects malformed documents") {
  CHECK_THROWS_AS(parse_genome(""), ParseError);
  CHECK_THROWS_AS(parse_genome("tneat-genome 2\n"), ParseError);
  std::string doc = serialize_genome(with_hidden_seven());
  CHECK_THROWS_AS(parse_genome(doc.substr(0, doc.size() / 2)), ParseError);
  const auto pos = doc.find("0.2");
  doc.replace(pos, 3, "abc");
  try {
    parse_genome(doc);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.field() == "nodes[2].bias");
  }
}

TEST_CASE("integrity_violations agrees with the oracle checker on random genomes") {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 200; ++i) {
    const GenomeTensors g = testing_support::random_genome(gen);
    CHECK(integrity_violations(g).empty());
    CHECK(oracle::check_tensors(g).empty());
  }
  GenomeTensors broken = with_hidden_seven();
  broken.node_data_mut()[2 * kNodeWidth + 1] = kNaN;  // half-padded row
  CHECK_FALSE(integrity_violations(broken).empty());
  CHECK_FALSE(oracle::check_tensors(broken).empty());
}

TEST_CASE("population tensors stack genomes") {
  PopulationTensors pop(3, 1, 1, 4, 4);
  const GenomeTensors g = with_hidden_seven();
  pop.set_genome(1, g);
  CHECK(bitwise_equal(pop.genome(1), g));
  CHECK(row_is_padding(pop.genome(0).node_span(0)));
  CHECK(std::isnan(pop.fitness[2]));
  CHECK_THROWS_AS(pop.set_genome(0, GenomeTensors(1, 1, 5, 4)), ShapeMismatch);
}
