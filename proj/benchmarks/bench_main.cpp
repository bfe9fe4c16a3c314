#include <benchmark/benchmark.h>

#include "circuitkit/graph.hpp"
#include "circuitkit/ilp.hpp"
#include "circuitkit/scoring.hpp"
#include "circuitkit/selection.hpp"
#include "circuitkit/synth.hpp"

namespace {

using namespace circuitkit;

SynthInstance instance(std::size_t layers, std::size_t width, std::size_t n) {
  SynthSpec spec;
  spec.layers = layers;
  spec.nodes_per_layer = width;
  spec.examples_n = n;
  spec.noise_sigma = 0.5;
  spec.flip_probability = 0.3;
  spec.seed = 7;
  return generate(spec);
}

void BM_Prune(benchmark::State& state) {
  const auto inst = instance(12, static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prune_to_connected(inst.graph, inst.planted));
  }
  state.SetItemsProcessed(state.iterations() * inst.graph.edge_count());
}
BENCHMARK(BM_Prune)->Arg(4)->Arg(16)->Arg(64);

void BM_BootstrapFilter(benchmark::State& state) {
  const auto inst = instance(6, 8, 64);
  const auto tau = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto runs = bootstrap_resample(inst.scores, tau, 1);
    benchmark::DoNotOptimize(confidence_filter(runs, kDefaultZ, 0.0));
  }
}
BENCHMARK(BM_BootstrapFilter)->Arg(10)->Arg(100);

void BM_Greedy(benchmark::State& state) {
  const auto inst = instance(10, 16, 4);
  const auto scores = collapse_to_scores(inst.scores);
  SelectionConfig cfg{static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_greedy(inst.graph, scores, cfg));
  }
}
BENCHMARK(BM_Greedy)->Arg(16)->Arg(256);

void BM_SolveExact(benchmark::State& state) {
  const auto inst = instance(4, static_cast<std::size_t>(state.range(0)), 4);
  const auto scores = collapse_to_scores(inst.scores);
  const IlpModel model = build_model(inst.graph, scores, SelectionConfig{6});
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_exact(model));
  }
}
BENCHMARK(BM_SolveExact)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
