#include <benchmark/benchmark.h>

#include "sdpp/analysis.hpp"
#include "sdpp/engine.hpp"
#include "sdpp/ensemble.hpp"
#include "sdpp/oracle.hpp"

namespace {

using namespace sdpp;

const ModelParams kParams{0.5, 0.5, 100.0, 100.0, 0.05, 0.05, 0.2, 1e-4, 0.02, 0.1, 0.1};
const NoiseSpec kNoise{1e-4, 2e-4, 2e-4, -0.04, -0.006, -0.008, 1.0, JumpClock::Shared};
const DelaySpec kDelays{0.5, 1.0, 1.5};
const HistorySpec kHistory = HistorySpec::constant(State{50.0, 50.0, 10.0});

void BM_Step(benchmark::State& state) {
  StepConfig c;
  HistoryBuffer buffer = init_history(kHistory, kDelays, c);
  RandomStream rng(1, 0);
  for (auto _ : state) {
    const StepOutcome out = step(buffer, kParams, kNoise, kDelays, c, rng);
    buffer.push(out.state);
    benchmark::DoNotOptimize(out.state);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Step);

void BM_Simulate(benchmark::State& state) {
  StepConfig c;
  c.t_end = static_cast<double>(state.range(0));
  for (auto _ : state) {
    const Trajectory traj = simulate(kParams, kNoise, kDelays, kHistory, c);
    benchmark::DoNotOptimize(traj.states.back());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(step_count(c)));
}
BENCHMARK(BM_Simulate)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  for (auto _ : state) {
    const ReferenceSolution ref = solve_deterministic(kParams, kDelays, kHistory, 1e-3, 50.0);
    benchmark::DoNotOptimize(ref.states.back());
  }
}
BENCHMARK(BM_Oracle)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  for (auto _ : state) {
    const RegimeReport report = classify(kParams, kNoise, kDelays);
    benchmark::DoNotOptimize(report.predicted);
  }
}
BENCHMARK(BM_Classify);

void BM_Ensemble(benchmark::State& state) {
  StepConfig c;
  c.t_end = 50.0;
  const auto reps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const EnsembleStats stats = run_ensemble(kParams, kNoise, kDelays, kHistory, c, reps, 3);
    benchmark::DoNotOptimize(stats.bands[0].mean.back());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(reps));
}
BENCHMARK(BM_Ensemble)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
