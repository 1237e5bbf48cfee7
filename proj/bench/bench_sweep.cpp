// One Lax-Friedrichs sweep: OpenMP kernel vs the serial reference.

#include <benchmark/benchmark.h>

#include "viab/config.hpp"
#include "viab/hamiltonian.hpp"
#include "viab/lax_friedrichs.hpp"
#include "viab/pipelines.hpp"

namespace {

struct Setup {
  viab::ScalarField v;
  viab::ScalarField out;
  viab::Dissipation diss;
};

Setup make_setup(viab::RunMode mode, std::size_t nodes) {
  viab::RunConfig c = viab::default_config(mode);
  c.grid = c.grid.with_nodes(nodes);
  const viab::Grid grid = c.grid.build();
  const viab::Phase phase = mode == viab::RunMode::short_term ? viab::Phase::short_term : viab::Phase::long_term;
  return {c.target.sample(grid), viab::ScalarField(grid), viab::make_dissipation(grid, c.model, phase, c.solver.dissipation)};
}

template <class Ham>
void run(benchmark::State& state, viab::RunMode mode, const Ham& ham, viab::Execution exec) {
  Setup s = make_setup(mode, static_cast<std::size_t>(state.range(0)));
  auto update = [](std::size_t, double v, double h) { return v - 1e-3 * h; };
  for (auto _ : state) {
    auto st = viab::run_sweep(exec, s.v.grid(), s.v.values(), ham, s.diss, viab::Boundary::linear, update,
                              s.out.values());
    benchmark::DoNotOptimize(st);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.v.values().size()));
}

const viab::ModelParams kParams{};

void BM_Sweep2D_Parallel(benchmark::State& st) {
  run(st, viab::RunMode::short_term, viab::Hamiltonian2(kParams), viab::Execution::parallel);
}
void BM_Sweep2D_Reference(benchmark::State& st) {
  run(st, viab::RunMode::short_term, viab::Hamiltonian2(kParams), viab::Execution::serial_reference);
}
void BM_Sweep3D_Parallel(benchmark::State& st) {
  run(st, viab::RunMode::long_term, viab::Hamiltonian3(kParams), viab::Execution::parallel);
}
void BM_Sweep3D_Reference(benchmark::State& st) {
  run(st, viab::RunMode::long_term, viab::Hamiltonian3(kParams), viab::Execution::serial_reference);
}

}  // namespace

BENCHMARK(BM_Sweep2D_Parallel)->Arg(257)->Arg(1025)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep2D_Reference)->Arg(257)->Arg(1025)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep3D_Parallel)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep3D_Reference)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
