#include "khsheet/dynamics.hpp"
#include "khsheet/hamiltonian.hpp"
#include "khsheet/resonance.hpp"
#include "khsheet/singular_ops.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace khsheet;

namespace {

SheetState sample_state(const FourierGrid& g) {
  return state_from_modes(g, {{ModeSeed::Variable::eta, 2, 0.05, 0.0},
                              {ModeSeed::Variable::eta, 5, 0.02, 0.3},
                              {ModeSeed::Variable::psi, 3, 0.03, 1.0}});
}

// O(n^2) quadrature sweep; the dominant cost of every right-hand side.
void BM_ApplySingular(benchmark::State& state) {
  const FourierGrid g(static_cast<int>(state.range(0)));
  const auto s = sample_state(g);
  const auto dens = derivative(s.psi) + Field::constant(g, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(apply_singular(s.eta, dens));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ApplySingular)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

void BM_Rhs(benchmark::State& state) {
  const FourierGrid g(static_cast<int>(state.range(0)));
  const auto s = sample_state(g);
  const auto p = PhysParams::from_beta(1.0, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(rhs(s, p));
}
BENCHMARK(BM_Rhs)->Arg(128)->Arg(256)->Arg(512);

void BM_Hamiltonian(benchmark::State& state) {
  const FourierGrid g(static_cast<int>(state.range(0)));
  const auto s = sample_state(g);
  const auto p = PhysParams::from_beta(1.0, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(hamiltonian_total(s, p));
}
BENCHMARK(BM_Hamiltonian)->Arg(128)->Arg(256);

void BM_Step(benchmark::State& state) {
  const FourierGrid g(128);
  const auto p = PhysParams::from_beta(1.0, 5.0);
  const auto integrator = static_cast<Integrator>(state.range(0));
  const Stepper st(p, integrator, {}, g, 0.005);
  auto s = sample_state(g);
  for (auto _ : state) s = st.advance(s);
  state.SetLabel(integrator == Integrator::rk4 ? "rk4" : "ifrk4");
}
BENCHMARK(BM_Step)->Arg(static_cast<int>(Integrator::rk4))->Arg(static_cast<int>(Integrator::ifrk4));

void BM_EnumerateIndices(benchmark::State& state) {
  const int p_max = static_cast<int>(state.range(0));
  const int j_max = static_cast<int>(state.range(1));
  for (auto _ : state) {
    std::size_t count = 0;
    enumerate_indices(p_max, j_max, [&](const MultiIndex&) { ++count; });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_EnumerateIndices)->Args({4, 10})->Args({4, 20})->Args({5, 12});

void BM_ScanBeta(benchmark::State& state) {
  BetaScanOptions o;
  o.samples = 50;
  o.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_beta(o));
}
BENCHMARK(BM_ScanBeta)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
