#include <benchmark/benchmark.h>

#include "meram/cache_sim.hpp"
#include "meram/cell_array.hpp"
#include "meram/device.hpp"
#include "meram/pipeline.hpp"
#include "meram/run_config.hpp"

namespace {

using namespace meram;

void BM_GatePulse(benchmark::State& state) {
  const device::MefetParams p;
  device::MefetState s;
  double v = 0.1;
  for (auto _ : state) {
    s = device::apply_gate_pulse(s, p, v, 1.5e-9);
    v = -v;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_GatePulse);

void BM_ArrayWriteRead(benchmark::State& state) {
  cell::ArrayConfig cfg;
  cfg.rows = static_cast<std::size_t>(state.range(0));
  cfg.cols = cfg.rows;
  cell::MeramArray a(cfg);
  std::size_t i = 0;
  for (auto _ : state) {
    const std::size_t r = i % cfg.rows;
    const std::size_t c = (i / cfg.rows) % cfg.cols;
    a.write_bit(r, c, static_cast<int>(i & 1));
    benchmark::DoNotOptimize(a.read_bit(r, c));
    ++i;
  }
}
BENCHMARK(BM_ArrayWriteRead)->Arg(4)->Arg(256);

void BM_GenTrace(benchmark::State& state) {
  cache::WorkloadSpec w;
  w.n_accesses = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cache::gen_trace(w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenTrace)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_CountAccesses(benchmark::State& state) {
  cache::WorkloadSpec w;
  w.n_accesses = static_cast<std::uint64_t>(state.range(0));
  const auto trace = cache::gen_trace(w);
  const cache::CacheConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(cache::count_accesses(cfg, trace));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CountAccesses)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_CompareGrid(benchmark::State& state) {
  auto cfg = config::defaults();
  for (auto& w : cfg.workloads) w.n_accesses = 100'000;
  const auto profiles = pipeline::select_profiles(cfg);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::run_grid(cfg, profiles, threads));
}
BENCHMARK(BM_CompareGrid)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
