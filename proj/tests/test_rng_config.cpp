#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "tneat/config.hpp"
#include "tneat/error.hpp"
#include "tneat/rng.hpp"

using namespace tneat;

TEST_CASE("rng: same seed and path reproduce the sequence") {
  RngStream a(42, {3, 2, 17});
  RngStream b(42, {3, 2, 17});
  for (int i = 0; i < 1000; ++i) REQUIRE(a() == b());
}

TEST_CASE("rng: split depends only on the path") {
  RngStream parent(7, {1});
  const RngStream before = parent.split(5);
  for (int i = 0; i < 10; ++i) parent();
  RngStream after = parent.split(5);
  RngStream direct(7, {1, 5});
  RngStream b = before;
  for (int i = 0; i < 100; ++i) {
    const auto x = b();
    REQUIRE(x == after());
    REQUIRE(x == direct());
  }
  CHECK(std::vector<std::uint64_t>(direct.path().begin(), direct.path().end()) ==
        std::vector<std::uint64_t>{1, 5});
}

TEST_CASE("rng: different paths and seeds give different streams") {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t g = 0; g < 20; ++g) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      for (std::uint64_t i = 0; i < 20; ++i) firsts.insert(RngStream(9, {g, s, i})());
    }
  }
  CHECK(firsts.size() == 20 * 5 * 20);
  CHECK(RngStream(1, {2, 3})() != RngStream(1, {3, 2})());
  CHECK(RngStream(1, {2})() != RngStream(2, {2})());
}

TEST_CASE("rng: uniform and normal moments") {
  RngStream r(123);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = r.normal(0.0, 1.0);
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::fabs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("rng: zero stddev consumes nothing") {
  RngStream a(5), b(5);
  CHECK(a.normal(3.0, 0.0) == 3.0);
  CHECK(a() == b());
}

TEST_CASE("rng: index covers its range") {
  RngStream r(8);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) hits[r.index(7)]++;
  for (int h : hits) CHECK(h > 800);
}

TEST_CASE("rng: path depth is bounded") {
  RngStream r(0, {1, 2, 3, 4, 5, 6, 7, 8});
  CHECK_THROWS_AS(r.split(9), std::length_error);
}

TEST_CASE("config: defaults are the reference experiment values") {
  const NeatConfig c = parse_config("");
  CHECK(c.seed == 0);
  CHECK(std::isinf(c.fitness_target));
  CHECK(c.generation_limit == 100);
  CHECK(c.pop_size == 10000);
  CHECK(c.max_nodes == 50);
  CHECK(c.max_conns == 100);
  CHECK(c.max_species == 10);
  CHECK(c.compatibility_disjoint == 1.0);
  CHECK(c.compatibility_homologous == 0.5);
  CHECK(c.node_add == 0.2);
  CHECK(c.conn_add == 0.4);
  CHECK(c.compatibility_threshold == 3.5);
  CHECK(c.species_elitism == 2);
  CHECK(c.max_stagnation == 15);
  CHECK(c.genome_elitism == 2);
  CHECK(c.survival_threshold == 0.2);
  CHECK(c.spawn_number_change_rate == 0.5);
  CHECK(c.bias.mutate_power == 0.5);
  CHECK(c.weight.mutate_rate == 0.8);
  CHECK(c.activation_default == activation::tanh);
  CHECK(c.aggregation_default == aggregation::sum);
  CHECK(c.attr_min == -30.0);
  CHECK(c.attr_max == 30.0);
}

TEST_CASE("config: every key round-trips") {
  NeatConfig c;
  c.seed = 99;
  c.fitness_target = 3.9;
  c.pop_size = 150;
  c.inputs = 2;
  c.outputs = 1;
  c.network_type = NetworkType::recurrent;
  c.weight.mutate_power = 0.125;
  c.activation_options = {activation::tanh, activation::sigmoid, activation::relu};
  c.aggregation_options = {aggregation::sum, aggregation::max};
  c.problem = "cartpole";
  const std::string text = to_text(c);
  const NeatConfig back = parse_config(text);
  CHECK(to_text(back) == text);
  CHECK(back.activation_options == c.activation_options);
  CHECK(back.network_type == NetworkType::recurrent);
  for (const auto& key : config_keys()) {
    CHECK_MESSAGE(text.find(key + " =") != std::string::npos, key);
  }
}

TEST_CASE("config: parsing details") {
  const NeatConfig c = parse_config(
      "# comment\n"
      "pop_size = 150.0   # trailing comment\n"
      "activation_options = [tanh, sigmoid]\n"
      "fitness_target = inf\n");
  CHECK(c.pop_size == 150);
  CHECK(c.activation_options == std::vector<int>{activation::tanh, activation::sigmoid});
  CHECK(std::isinf(c.fitness_target));
}

TEST_CASE("config: unknown, repeated and malformed keys are errors") {
  CHECK_THROWS_AS(parse_config("pop_sise = 10\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("pop_size = 10\npop_size = 20\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("pop_size = ten\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("pop_size = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("activation_default = swish\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just some words\n"), ConfigError);
  try {
    parse_config("\n\nbogus = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("config: validate enforces constraints") {
  NeatConfig c;
  c.inputs = 2;
  c.outputs = 1;
  CHECK_NOTHROW(c.validate());
  c.node_add = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.node_add = 0.2;
  c.pop_size = 3;
  CHECK_THROWS_AS(c.validate(), ConfigError);  // < 2 * species_elitism
  c.pop_size = 10;
  c.max_nodes = 2;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
