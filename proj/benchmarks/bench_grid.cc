#include <benchmark/benchmark.h>

#include <random>

#include "dirollout/grid.hpp"
#include "dirollout/trainer.hpp"

using namespace dirollout;

namespace {

std::vector<InformationState> random_queries(int count) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(0.01, 0.99);
  std::vector<InformationState> out;
  for (int i = 0; i < count; ++i) {
    InformationState b = InformationState::uniform(-1, 2, 2);
    for (int c = 0; c < 2; ++c) {
      const double v = dist(rng);
      b.set_row(c, Simplex({v, 1.0 - v}));
    }
    out.push_back(std::move(b));
  }
  return out;
}

void BM_Nearest(benchmark::State& state) {
  const BeliefGrid grid =
      build_uniform_grid(static_cast<int>(state.range(0)), 2, 2);
  const auto queries = random_queries(256);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nearest(grid, queries[i++ & 255]));
  }
}
BENCHMARK(BM_Nearest)->Arg(10)->Arg(20)->Arg(40)->Arg(80);

void BM_TrainStage(benchmark::State& state) {
  const ProblemInstance inst = ProblemInstance::binary_symmetric(
      0.4, 0.8, 4, -2.0, 0.0, Simplex::uniform(2), Policy::uniform(0, 1, 2, 2));
  const BeliefGrid grid =
      build_uniform_grid(static_cast<int>(state.range(0)), 2, 2);
  BAAConfig cfg;
  for (auto _ : state) {
    const OfflineArtifact artifact = train(inst, grid, 1, cfg, 1);
    benchmark::DoNotOptimize(artifact.tables.front().entries.front().q);
  }
}
BENCHMARK(BM_TrainStage)->Arg(10)->Arg(20)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
