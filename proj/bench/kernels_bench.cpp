#include <benchmark/benchmark.h>

#include "sandlab/green.hpp"
#include "sandlab/lattice.hpp"
#include "sandlab/recurrence.hpp"

namespace {

using sandlab::ModelParams;

void BM_LogDet(benchmark::State& state) {
  const ModelParams p(3, static_cast<int>(state.range(0)), 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sandlab::log_det_delta(p));
}

void BM_LogDetSerial(benchmark::State& state) {
  const ModelParams p(3, static_cast<int>(state.range(0)), 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sandlab::serial::log_det_delta(p));
}

void BM_GreenColumn(benchmark::State& state) {
  const ModelParams p(2, static_cast<int>(state.range(0)), 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(sandlab::green_finite_column(p));
}

void BM_GreenColumnSerial(benchmark::State& state) {
  const ModelParams p(2, static_cast<int>(state.range(0)), 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(sandlab::serial::green_finite_column(p));
}

void BM_Enumerate(benchmark::State& state) {
  const ModelParams p(2, 1, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sandlab::enumerate_allowed_count(p));
}

void BM_EnumerateSerial(benchmark::State& state) {
  const ModelParams p(2, 1, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sandlab::serial::enumerate_allowed_count(p));
}

void BM_FscSweep(benchmark::State& state) {
  const ModelParams p(2, 1, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sandlab::fsc_burning_sweep(p));
}

void BM_FscSweepSerial(benchmark::State& state) {
  const ModelParams p(2, 1, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sandlab::serial::fsc_burning_sweep(p));
}

}  // namespace

BENCHMARK(BM_LogDet)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_LogDetSerial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GreenColumn)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GreenColumnSerial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Enumerate)->Unit(benchmark::kMillisecond)->UseRealTime()->Iterations(1);
BENCHMARK(BM_EnumerateSerial)->Unit(benchmark::kMillisecond)->UseRealTime()->Iterations(1);
BENCHMARK(BM_FscSweep)->Unit(benchmark::kMillisecond)->UseRealTime()->Iterations(1);
BENCHMARK(BM_FscSweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime()->Iterations(1);

BENCHMARK_MAIN();
