#include <benchmark/benchmark.h>

#include "acs/coherent.hpp"
#include "acs/fiducial.hpp"
#include "acs/propagator.hpp"
#include "acs/specfun.hpp"

namespace {

void BM_GaussLaguerreBuild(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto rule = acs::gauss_laguerre(order, 3.0);
    benchmark::DoNotOptimize(rule.nodes.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GaussLaguerreBuild)->RangeMultiplier(2)->Range(32, 1024)->Complexity();

void BM_Wavefunction(benchmark::State& state) {
  const auto cs = acs::CSParams::make(5.0, -4.0, 3.0, 1);
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(acs::wavefunction(cs, x));
    x = (x < 20.0) ? x + 1e-3 : 0.1;
  }
}
BENCHMARK(BM_Wavefunction);

void BM_Overlap(benchmark::State& state) {
  const auto a = acs::CSParams::make(2.0, 1.0, 3.0, 0);
  const auto b = acs::CSParams::make(1.3, -0.7, 3.0, 0);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(acs::overlap(a, b, order).value);
}
BENCHMARK(BM_Overlap)->Arg(128)->Arg(256)->Arg(512);

void BM_ProjectCS(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  acs::Basis basis({3.0, 1.0, size});
  const auto cs = acs::CSParams::make(5.0, -4.0, 3.0, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(basis.project_cs(cs).data());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProjectCS)->RangeMultiplier(2)->Range(64, 512)->Complexity();

void BM_Propagate(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  acs::Basis basis({3.0, 1.0, size});
  acs::Propagator prop(acs::hnu_matrix(basis.spec()));
  const auto c = basis.project_cs(acs::CSParams::make(5.0, -4.0, 3.0, 0));
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(prop.apply(c, t).data());
    t += 0.1;
  }
}
BENCHMARK(BM_Propagate)->Arg(128)->Arg(256)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
