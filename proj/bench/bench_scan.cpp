#include <benchmark/benchmark.h>

#include "fermigraph/crit.hpp"
#include "fermigraph/scan.hpp"

namespace fg = fermigraph;

namespace {

fg::ScanSpec ring_map(int L) {
  fg::ScanSpec s;
  s.sizes = {L};
  s.mu = fg::Axis{-1.0, 3.0, 41};
  s.gamma = fg::Axis{-2.0, 2.0, 41};
  s.quantities = {fg::Quantity::FMin, fg::Quantity::HCrit, fg::Quantity::Si};
  return s;
}

fg::ScanSpec free_map(int L) {
  fg::ScanSpec s;
  s.model.boundary = fg::Boundary::FreeEnds;
  s.sizes = {L};
  s.mu = fg::Axis{-1.0, 3.0, 9};
  s.gamma = fg::Axis{-2.0, 2.0, 9};
  s.quantities = {fg::Quantity::FMin, fg::Quantity::HCrit};
  return s;
}

void BM_RingSerial(benchmark::State& st) {
  const auto spec = ring_map(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fg::run_scan_serial(spec));
}

void BM_RingParallel(benchmark::State& st) {
  const auto spec = ring_map(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fg::run_scan(spec));
}

void BM_FreeSerial(benchmark::State& st) {
  const auto spec = free_map(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fg::run_scan_serial(spec));
}

void BM_FreeParallel(benchmark::State& st) {
  const auto spec = free_map(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fg::run_scan(spec));
}

void BM_PeakScan(benchmark::State& st) {
  fg::PeakOptions o;
  o.sizes = {101, 201, 401};
  o.lo = -20.0;
  o.hi = 20.0;
  o.scale_window = true;
  o.parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(fg::peak_scan(fg::ModelTemplate{}, o));
}

}  // namespace

BENCHMARK(BM_RingSerial)->Arg(101)->Arg(1001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RingParallel)->Arg(101)->Arg(1001)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FreeSerial)->Arg(40)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FreeParallel)->Arg(40)->Arg(120)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PeakScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
