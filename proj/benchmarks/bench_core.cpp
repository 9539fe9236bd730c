#include <benchmark/benchmark.h>

#include "tofmux/detector.hpp"
#include "tofmux/scheduler.hpp"
#include "tofmux/simulator.hpp"

using namespace tofmux;

namespace {

Scenario mixed_pair() {
  Scenario s;
  s.scene = make_bump_scene({});
  s.cameras.assign(2, CameraSetup{});
  for (auto& c : s.cameras) c.config.n_quads = 6;
  s.cameras[0].trigger_offset = 300e-6;
  s.cameras[1].config.frame_rate = 28;
  s.duration = 4.0;
  return s;
}

}  // namespace

static void BM_PairwiseOverlap(benchmark::State& state) {
  CameraConfig a;
  CameraConfig b;
  b.frame_rate = 28;
  const double seconds = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pairwise_overlap(a, 0.0, b, 1e-3, {0.0, seconds}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 120);
}
BENCHMARK(BM_PairwiseOverlap)->Arg(1)->Arg(10)->Arg(100);

static void BM_SimulatorSetup(benchmark::State& state) {
  const Scenario s = mixed_pair();
  for (auto _ : state) {
    StreamSimulator sim(s, 0);
    benchmark::DoNotOptimize(sim.frame_count());
  }
}
BENCHMARK(BM_SimulatorSetup);

static void BM_SimulateFrame(benchmark::State& state) {
  const StreamSimulator sim(mixed_pair(), 0);
  std::int64_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim.frame(k));
    k = (k + 1) % sim.frame_count();
  }
}
BENCHMARK(BM_SimulateFrame);

static void BM_SweepShifts(benchmark::State& state) {
  Scenario s;
  s.scene = make_bump_scene({});
  s.cameras.assign(2, CameraSetup{});
  SweepOptions o;
  o.burst_frames = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sweep_shifts(s, o));
}
BENCHMARK(BM_SweepShifts)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
