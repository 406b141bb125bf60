#include "rayleigh/compactification.hpp"
#include "rayleigh/flow.hpp"
#include "rayleigh/limitcycle.hpp"
#include "rayleigh/vectorfield.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace rayleigh;

void BM_CompiledEval(benchmark::State& state) {
  const CompiledSystem sys(lienard_form(RayleighParams(-1.0, 3)));
  double x = 0.7, y = -0.3, dx, dy;
  for (auto _ : state) {
    sys.eval(x, y, dx, dy);
    benchmark::DoNotOptimize(dx);
    benchmark::DoNotOptimize(dy);
    x += 1e-9;  // defeat value caching
  }
}
BENCHMARK(BM_CompiledEval);

void BM_ChartSystemU1(benchmark::State& state) {
  const PlanarPolySystem sys = lienard_form(RayleighParams(-1.0, 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(chart_system(sys, ChartId::U1));
  }
}
BENCHMARK(BM_ChartSystemU1);

void BM_JacobianAtPoint(benchmark::State& state) {
  const PlanarPolySystem sys = lienard_form(RayleighParams(2.0, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(jacobian(sys, 0.4, -1.1));
  }
}
BENCHMARK(BM_JacobianAtPoint);

void BM_FirstReturn(benchmark::State& state) {
  const CompiledSystem sys(lienard_form(RayleighParams(-1.0, 1)));
  ReturnOptions opts;
  for (auto _ : state) {
    benchmark::DoNotOptimize(section_return(sys, 1.5, opts));
  }
}
BENCHMARK(BM_FirstReturn)->Unit(benchmark::kMillisecond);

void BM_FindCycle(benchmark::State& state) {
  const RayleighParams params(-1.0, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_cycle(params, SystemForm::Eq2));
  }
}
BENCHMARK(BM_FindCycle)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
