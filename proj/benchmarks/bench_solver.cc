#include <benchmark/benchmark.h>

#include <cmath>

#include "dirollout/baa.hpp"
#include "dirollout/oracle.hpp"

using namespace dirollout;

namespace {

InformationState skewed_state() {
  InformationState b = InformationState::uniform(-1, 2, 2);
  b.set_row(0, Simplex({0.8, 0.2}));
  b.set_row(1, Simplex({0.35, 0.65}));
  return b;
}

void BM_SolveStage(benchmark::State& state) {
  const InformationState b = skewed_state();
  const Kernel w = Kernel::binary_symmetric(0.4, 0.8);
  const DistortionFn rho = DistortionFn::hamming(2);
  ZeroContinuation cont;
  BAAConfig cfg;
  cfg.epsilon = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) {
    const StageSolution sol = solve_stage(b, w, -2.0, 0.1, rho, cont, 0, cfg);
    benchmark::DoNotOptimize(sol.q_value);
  }
}
BENCHMARK(BM_SolveStage)->Arg(4)->Arg(6)->Arg(8);

void BM_BruteForceStage(benchmark::State& state) {
  const InformationState b = skewed_state();
  const Kernel w = Kernel::binary_symmetric(0.4, 0.8);
  const DistortionFn rho = DistortionFn::hamming(2);
  ZeroContinuation cont;
  for (auto _ : state) {
    const double q = brute_force_stage(b, w, -2.0, 0.1, rho, cont, 0,
                                       static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_BruteForceStage)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
