#include <benchmark/benchmark.h>

#include <random>

#include "coagfrag/bernstein_evolution.h"
#include "coagfrag/continuum_profile.h"
#include "coagfrag/convolution.h"
#include "coagfrag/dynamics_d.h"
#include "coagfrag/equilibrium_d.h"

namespace {

using namespace coagfrag;

std::vector<double> random_vector(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(n);
  for (auto& x : a) x = u(rng);
  return a;
}

void BM_ConvolutionDirect(benchmark::State& state) {
  auto a = random_vector(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(a.size());
  for (auto _ : state) {
    self_convolution_direct(a, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvolutionDirect)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oNSquared);

void BM_ConvolutionFft(benchmark::State& state) {
  auto a = random_vector(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(a.size());
  FftSelfConvolver conv(a.size());
  for (auto _ : state) {
    conv.convolve(a, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvolutionFft)->RangeMultiplier(4)->Range(64, 1 << 17)->Complexity(benchmark::oNLogN);

void BM_EquilibriumRecursion(benchmark::State& state) {
  const auto path = state.range(1) ? ConvolutionPath::fft : ConvolutionPath::direct;
  for (auto _ : state) {
    benchmark::DoNotOptimize(equilibrium_recursion(0.6, static_cast<std::size_t>(state.range(0)), {path}));
  }
}
BENCHMARK(BM_EquilibriumRecursion)->Args({1000, 0})->Args({4000, 0})->Args({4000, 1})->Args({16384, 1})
    ->Unit(benchmark::kMillisecond);

void BM_ProfileEvaluation(benchmark::State& state) {
  static const ContinuumProfile profile;
  const double x = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(profile.f_star(x));
}
BENCHMARK(BM_ProfileEvaluation)->Arg(1)->Arg(30)->Arg(300);

void BM_ImexStep(benchmark::State& state) {
  BernsteinField field = equilibrium_field(log_grid(1e-4, 1e3, static_cast<std::size_t>(state.range(0))), 1.0);
  for (auto _ : state) {
    field = imex_step(field, 0.01, 0.0);
    benchmark::DoNotOptimize(field.values.data());
  }
}
BENCHMARK(BM_ImexStep)->Arg(200)->Arg(451);

void BM_RhsModelD(benchmark::State& state) {
  auto dist = random_initial(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(rhs_model_d(dist));
}
BENCHMARK(BM_RhsModelD)->RangeMultiplier(8)->Range(512, 1 << 17)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
