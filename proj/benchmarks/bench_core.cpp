#include <benchmark/benchmark.h>

#include "kljn/bit.hpp"
#include "kljn/circuit.hpp"
#include "kljn/crossing.hpp"
#include "kljn/noise.hpp"

using namespace kljn;

namespace {

StreamId stream(std::uint64_t bit) { return {Purpose::kAuxiliary, bit, Party::kAlice, Role::kLow}; }

void BM_Synthesize(benchmark::State& state) {
  SimParams p;
  p.synthesis_mode = static_cast<SynthesisMode>(state.range(0));
  std::uint64_t bit = 0;
  for (auto _ : state) benchmark::DoNotOptimize(synthesize({1.0, p.bandwidth}, p, stream(bit++)));
  state.SetLabel(std::string(to_string(p.synthesis_mode)));
}
BENCHMARK(BM_Synthesize)->Arg(0)->Arg(1)->Arg(2);

void BM_SimulateBit(benchmark::State& state) {
  SimParams p;
  const auto ua = synthesize({1.0, p.bandwidth}, p, stream(0));
  const auto ub = synthesize({10.0, p.bandwidth}, p, stream(1));
  const LoopConfig cfg{1e3, 1.0, 1e4, 10.0};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_bit(cfg, ua, ub));
}
BENCHMARK(BM_SimulateBit);

void BM_FindCrossings(benchmark::State& state) {
  SimParams p;
  const auto w = synthesize({1.0, p.bandwidth}, p, stream(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_crossings(w));
}
BENCHMARK(BM_FindCrossings);

void BM_ObserveBit(benchmark::State& state) {
  BitSetup s;
  s.scheme = preset("vmg2");
  s.levels = solve_levels(s.scheme);
  std::uint64_t bit = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(observe_bit(s, Arrangement::kHL, Purpose::kEnsemble, bit++));
  }
}
BENCHMARK(BM_ObserveBit);

}  // namespace

BENCHMARK_MAIN();
