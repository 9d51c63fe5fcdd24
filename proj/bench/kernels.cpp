// Population kernels timed under both execution modes. Arg 0 is the
// population size; the Parallel/Serial suffix is the Execution mode.

#include <benchmark/benchmark.h>

#include "tneat/neat.hpp"
#include "tneat/network.hpp"
#include "tneat/reproduction.hpp"
#include "tneat/species.hpp"

using namespace tneat;

namespace {

// An evaluated XOR population after a few generations, so that genomes carry
// some hidden structure.
EvolutionState warmed_population(int pop_size) {
  NeatConfig c;
  c.problem = "xor";
  c.pop_size = pop_size;
  c.seed = 3;
  XorProblem problem;
  c = resolve_io(c, problem);
  EvolutionState state = initialize(c);
  for (int g = 0; g < 5; ++g) evolve_step(state, problem, FunctionRegistry::builtin());
  evaluate(state, problem, FunctionRegistry::builtin());
  return state;
}

template <Execution mode>
void BM_Transform(benchmark::State& st) {
  const EvolutionState s = warmed_population(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(population_transform(s.population, mode));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <Execution mode>
void BM_Forward(benchmark::State& st) {
  const EvolutionState s = warmed_population(static_cast<int>(st.range(0)));
  const auto nets = population_transform(s.population);
  for (auto _ : st) {
    benchmark::DoNotOptimize(population_forward(nets, FunctionRegistry::builtin(), xor_inputs(), mode));
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <Execution mode>
void BM_CartPole(benchmark::State& st) {
  NeatConfig c;
  c.problem = "cartpole";
  c.pop_size = static_cast<int>(st.range(0));
  CartPoleProblem problem;
  c = resolve_io(c, problem);
  const EvolutionState s = initialize(c);
  const auto nets = population_transform(s.population);
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        problem.evaluate_population(nets, FunctionRegistry::builtin(), RngStream(1), mode));
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <Execution mode>
void BM_Reproduce(benchmark::State& st) {
  const EvolutionState s = warmed_population(static_cast<int>(st.range(0)));
  const auto species =
      allocate_spawns(s.species, s.population.fitness, s.config.pop_size, s.config);
  for (auto _ : st) {
    NodeKeyAllocator alloc = s.allocator;
    benchmark::DoNotOptimize(reproduce(s.population, species, s.config, RngStream(2), alloc, mode));
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <Execution mode>
void BM_Speciate(benchmark::State& st) {
  EvolutionState s = warmed_population(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    int next = s.next_species_key;
    benchmark::DoNotOptimize(speciate(s.population, s.species, next, s.config, mode));
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

#define TNEAT_KERNEL(fn)                                                                 \
  BENCHMARK_TEMPLATE(fn, Execution::parallel)->Name(#fn "/Parallel")->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond); \
  BENCHMARK_TEMPLATE(fn, Execution::serial)->Name(#fn "/Serial")->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond)

TNEAT_KERNEL(BM_Transform);
TNEAT_KERNEL(BM_Forward);
TNEAT_KERNEL(BM_CartPole);
TNEAT_KERNEL(BM_Reproduce);
TNEAT_KERNEL(BM_Speciate);

}  // namespace

BENCHMARK_MAIN();
