#include "liekahler/ad_calculus.hpp"
#include "liekahler/kaehler.hpp"
#include "liekahler/polar.hpp"
#include "liekahler/report.hpp"

#include <benchmark/benchmark.h>

using namespace liekahler;

namespace {

AlgebraPtr algebra_arg(const benchmark::State& state) { return state.range(0) == 3 ? su2() : su3(); }

AlgebraPoint point_for(const LieAlgebraSpec& g) { return sample_ball(g, 1, 3, 2.0).front(); }

void BM_EvalSeries(benchmark::State& state) {
  const auto g = algebra_arg(state);
  const AlgebraPoint a = point_for(*g);
  const AdFunction f = AdFunction::named(AdKind::x_cot_x);
  for (auto _ : state) benchmark::DoNotOptimize(eval_series(*g, f, a));
}
BENCHMARK(BM_EvalSeries)->Arg(3)->Arg(8);

void BM_EvalSpectral(benchmark::State& state) {
  const auto g = algebra_arg(state);
  const AlgebraPoint a = point_for(*g);
  const AdFunction f = AdFunction::named(AdKind::x_cot_x);
  for (auto _ : state) benchmark::DoNotOptimize(eval_spectral(*g, f, a));
}
BENCHMARK(BM_EvalSpectral)->Arg(3)->Arg(8);

void BM_JAt(benchmark::State& state) {
  const auto g = algebra_arg(state);
  const FormPair p = standard_pair(g);
  const AlgebraPoint a = point_for(*g);
  for (auto _ : state) benchmark::DoNotOptimize(j_at(p, a));
}
BENCHMARK(BM_JAt)->Arg(3)->Arg(8);

void BM_MaurerCartan(benchmark::State& state) {
  const auto g = algebra_arg(state);
  const FormPair p = standard_pair(g);
  const AlgebraPoint a = point_for(*g);
  for (auto _ : state) benchmark::DoNotOptimize(maurer_cartan_residual(p, a));
}
BENCHMARK(BM_MaurerCartan)->Arg(3)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_MetricAt(benchmark::State& state) {
  const auto g = algebra_arg(state);
  const FormPair p = standard_pair(g);
  const AlgebraPoint a = point_for(*g);
  for (auto _ : state) benchmark::DoNotOptimize(metric_at(p, a));
}
BENCHMARK(BM_MetricAt)->Arg(3)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_IntegrateGamma(benchmark::State& state) {
  const auto g = su2();
  const FormPair p = standard_pair(g);
  const AlgebraPoint a = point_for(*g);
  GammaOptions o;
  o.steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_gamma(p, a, o));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IntegrateGamma)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oN)
    ->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
