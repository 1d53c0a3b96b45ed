#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "optomech/cooling.hpp"
#include "optomech/eigen.hpp"
#include "optomech/polynomial.hpp"
#include "optomech/response.hpp"
#include "optomech/steady_state.hpp"
#include "optomech/supermodes.hpp"

using namespace optomech;

namespace {

std::vector<Complex> random_coeffs(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  std::vector<Complex> c(n);
  for (auto& z : c) z = {d(gen), d(gen)};
  return c;
}

void BM_Cardano(benchmark::State& state) {
  const auto c = random_coeffs(3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_cubic_cardano(c[0], c[1], c[2]));
}
BENCHMARK(BM_Cardano);

void BM_Aberth(benchmark::State& state) {
  auto c = random_coeffs(static_cast<std::size_t>(state.range(0)) + 1, 2);
  c[0] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_poly_aberth(c));
}
BENCHMARK(BM_Aberth)->Arg(3)->Arg(6);

void BM_SupermodeSpectrum(benchmark::State& state) {
  const auto p = derive_params(RawConfig::defaults());
  const Complex G = solve_steady_state(p).G;
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_exact(p, G));
}
BENCHMARK(BM_SupermodeSpectrum);

void BM_TransferEigenvalues(benchmark::State& state) {
  const auto p = derive_params(RawConfig::defaults());
  const auto tm = transfer_matrix(p, solve_steady_state(p));
  for (auto _ : state) benchmark::DoNotOptimize(eigvals_small(tm.A_complex_scaled));
}
BENCHMARK(BM_TransferEigenvalues);

void BM_Stability(benchmark::State& state) {
  const auto p = derive_params(RawConfig::defaults());
  const auto tm = transfer_matrix(p, solve_steady_state(p));
  for (auto _ : state) benchmark::DoNotOptimize(stability(tm));
}
BENCHMARK(BM_Stability);

void BM_CoolingPoint(benchmark::State& state) {
  auto p = derive_params(RawConfig::defaults());
  p = with_kappa(p, 1.001 * p.gamma);
  CoolingOptions o;
  o.policy = StabilityPolicy::kFormulaOnly;
  for (auto _ : state) benchmark::DoNotOptimize(beta(p, 300.0, o));
}
BENCHMARK(BM_CoolingPoint);

}  // namespace

BENCHMARK_MAIN();
