#include <benchmark/benchmark.h>

#include "vibctl/curves.hpp"
#include "vibctl/fft.hpp"
#include "vibctl/pipeline.hpp"
#include "vibctl/units.hpp"
#include "vibctl/vibrational.hpp"

using namespace vibctl;

namespace {

void BM_Fft(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const Fft fft(n);
  ComplexVector data(n, Complex(1.0, 0.5));
  for (auto _ : st) {
    fft.forward(data);
    fft.backward(data);
    benchmark::DoNotOptimize(data.data());
  }
  st.SetItemsProcessed(st.iterations() * 2);
}
BENCHMARK(BM_Fft)->Arg(512)->Arg(2048)->Arg(8192);

void BM_SplitStep(benchmark::State& st) {
  static const Experiment ex(RadialGrid::make(), bundled_curves(), units::kD2ReducedMass);
  auto state = ex.pump().state;
  for (auto _ : st) {
    ex.propagator().split_step(state, 0.5, 0.01);
    benchmark::DoNotOptimize(state.g.data());
  }
}
BENCHMARK(BM_SplitStep);

void BM_Eigensolve(benchmark::State& st) {
  const auto grid = RadialGrid::make(RadialGrid::kDefaultRMin, RadialGrid::kDefaultRMax, static_cast<std::size_t>(st.range(0)));
  const auto ops = sample_on_grid(bundled_curves(), *grid);
  for (auto _ : st) {
    auto basis = solve_bound_states(grid, ops.v_g, units::kD2ReducedMass, kAllBoundStates);
    benchmark::DoNotOptimize(basis.energies.data());
  }
}
BENCHMARK(BM_Eigensolve)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
