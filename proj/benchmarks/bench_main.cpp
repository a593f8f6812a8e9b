// Timings for the hot paths of the library.

#include <random>

#include <benchmark/benchmark.h>

#include "ncspectral/action.hpp"
#include "ncspectral/diophantine.hpp"
#include "ncspectral/operator.hpp"
#include "ncspectral/zeta.hpp"

using namespace ncspectral;

namespace {

ops::SpectralTriple golden(int n) { return ops::SpectralTriple(weyl::DeformationMatrix::golden(n)); }

void BM_HeatTraceFree(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(action::heat_trace_free(n, 1e-3));
}
BENCHMARK(BM_HeatTraceFree)->Arg(2)->Arg(4);

void BM_ZetaD(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(zeta::zeta_D(-0.5, n));
}
BENCHMARK(BM_ZetaD)->Arg(2)->Arg(4);

void BM_FreeFit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto grid = action::default_lambda_grid();
  const auto st = golden(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        action::fit_expansion(action::CutoffProfile::gaussian(), grid, weyl::OneForm::zero(n), st));
  }
}
BENCHMARK(BM_FreeFit)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SpectralActionWindow(benchmark::State& state) {
  const auto st = golden(2);
  const auto A = weyl::OneForm::from_modes(2, {{0, Point::unit(2, 1), Complex(0.3, 0.1)}});
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(action::spectral_action(action::CutoffProfile::gaussian(), lambda, A, st));
  }
}
BENCHMARK(BM_SpectralActionWindow)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ConstantTerm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto st = golden(n);
  const auto A = weyl::OneForm::from_modes(n, {{0, Point::unit(n, 1), Complex(0.3, 0)}});
  for (auto _ : state) benchmark::DoNotOptimize(action::constant_term(A, st));
}
BENCHMARK(BM_ConstantTerm)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_TwistedHeatTrace(benchmark::State& state) {
  const auto [a, b] = action::correction_probe(2, 21);
  const auto theta = weyl::DeformationMatrix::golden(2);
  for (auto _ : state) benchmark::DoNotOptimize(action::twisted_heat_trace(a, b, theta, 1e-3));
}
BENCHMARK(BM_TwistedHeatTrace);

void BM_BvSearch(benchmark::State& state) {
  const std::vector<dio::RealSpec> x{dio::RealSpec::parse("golden")};
  const auto qmax = static_cast<std::int64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dio::bv_search(x, 0.0, 0.2, qmax));
}
BENCHMARK(BM_BvSearch)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_JarnikConstruct(benchmark::State& state) {
  const auto f = dio::Profile::parse("power-log:3");
  for (auto _ : state) benchmark::DoNotOptimize(dio::jarnik_construct(f, 8));
}
BENCHMARK(BM_JarnikConstruct)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
