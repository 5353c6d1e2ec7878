#include <benchmark/benchmark.h>

#include <random>

#include "hepasim/elliptic.hpp"
#include "hepasim/grid.hpp"
#include "hepasim/integrator.hpp"

using namespace hepasim;

namespace {

ScalarField random_field(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ScalarField f(g);
  for (double& x : f.values()) x = unit(rng);
  return f;
}

void BM_Laplacian(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid g(n, n);
  const ScalarField f = random_field(g, 1);
  ScalarField out(g);
  for (auto _ : state) {
    apply_laplacian(g, f.values(), out.values());
    benchmark::DoNotOptimize(out.values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_Laplacian)->Arg(64)->Arg(128)->Arg(256);

void BM_AuxSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid g(n, n);
  const PortalField portal = build_chi(g, PortalSpec{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_aux(g, portal.chi, ModelParams{}).iterations);
  }
}
BENCHMARK(BM_AuxSolve)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid g(n, n);
  const PortalField portal = build_chi(g, PortalSpec{});
  const ModelParams params;
  const StepControl ctrl;
  SimState s = constant_state(g, 1.0, 0.0);
  StepWorkspace ws;
  // Start from a developed state rather than the flat initial data.
  for (int k = 0; k < 500; ++k) s = step(s, params, portal, ctrl, ws);
  for (auto _ : state) {
    s = step(s, params, portal, ctrl, ws);
    benchmark::DoNotOptimize(s.u.values().data());
  }
}
BENCHMARK(BM_Step)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
