#include <benchmark/benchmark.h>

#include "uilab/detection.hpp"
#include "uilab/noise.hpp"
#include "uilab/optics.hpp"
#include "uilab/protocols.hpp"

using namespace uilab;

static void BM_apply_network(benchmark::State& state) {
  const UISetup setup = build_two_ref_setup(2, 2, 2, 0.5);
  const ModeRegister in = prepare_input(setup, {0.4, 0.1}, {{0.4, 0.1}, {1.2, -0.3}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_network(setup.network, in));
  }
}
BENCHMARK(BM_apply_network);

static void BM_compose_concentrator(benchmark::State& state) {
  const Network net = build_concentrator(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compose_network(net));
  }
}
BENCHMARK(BM_compose_concentrator)->Arg(4)->Arg(8)->Arg(16);

static void BM_run_shots(benchmark::State& state) {
  const UISetup setup = build_two_ref_setup(1, 1, 1, 0.5);
  const ModeRegister in = prepare_input(setup, {2.0, 0.0}, {{0.0, 0.0}, {2.0, 0.0}});
  const auto shots = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_shots(setup.network, in, setup.bank, shots, 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_run_shots)->Arg(10000)->Arg(100000);

static void BM_simulate_ui(benchmark::State& state) {
  const UISetup setup = build_two_ref_setup(1, 1, 1, 0.5);
  const std::vector<Amplitude> refs{{0.0, 0.0}, {2.0, 0.0}};
  const auto shots = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_ui(setup, refs, {0.5, 0.5}, shots, 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_simulate_ui)->Arg(10000)->Arg(100000);

static void BM_mc_rates(benchmark::State& state) {
  const auto shots = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_rates(1, 1, 0.25, 1.0, shots, 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_mc_rates)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
