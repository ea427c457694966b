#include <benchmark/benchmark.h>

#include <cmath>

#include "hplap/exponents.hpp"
#include "hplap/hardy.hpp"
#include "hplap/prufer.hpp"
#include "hplap/specfun.hpp"

using namespace hplap;

namespace {

ProblemParams linear(double p, int N, double mu, double eps = 0.0) {
  ProblemParams pp;
  pp.p = p;
  pp.N = N;
  pp.mu = mu;
  pp.eps = eps;
  return pp;
}

void BM_GenSineBuild(benchmark::State& state) {
  const double p = state.range(0) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(specfun::GenSine::build(p));
}
BENCHMARK(BM_GenSineBuild)->Arg(13)->Arg(20)->Arg(30)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_GenSineEval(benchmark::State& state) {
  const auto gs = specfun::GenSine::build(3.0);
  double psi = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gs.eval(psi));
    psi += 0.01;
    if (psi > 2.0 * gs.pi_p()) psi = 0.0;
  }
}
BENCHMARK(BM_GenSineEval);

void BM_PruferPowerGrowth(benchmark::State& state) {
  const auto pp = linear(3.0, 2, 0.02);
  const auto gs = specfun::GenSine::build(3.0);
  const double t_end = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(prufer::integrate_large_subsolution(pp, gs, 0.0, t_end));
  }
}
BENCHMARK(BM_PruferPowerGrowth)->Arg(25)->Arg(60)->Unit(benchmark::kMicrosecond);

void BM_PruferCriticalHardy(benchmark::State& state) {
  const auto pp = linear(2.0, 3, 0.25);
  const auto gs = specfun::GenSine::build(2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prufer::integrate_large_subsolution(pp, gs, 0.0, 1e4));
  }
}
BENCHMARK(BM_PruferCriticalHardy)->Unit(benchmark::kMicrosecond);

void BM_RayleighMin(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hardy::rayleigh_min(2.0, 3, 1e-3, 1e4, n));
}
BENCHMARK(BM_RayleighMin)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_FamilyEnergy(benchmark::State& state) {
  const double p = 2.0;
  const int N = 3;
  const auto hc = exponents::hardy_constants(p, N);
  const barriers::RadialProfile phi{exponents::gamma_star(p, N), 1.0 / p, -0.01, 1.0};
  hardy::CutoffFamily fam;
  fam.log_R = std::pow(10.0, static_cast<double>(state.range(0)));
  const auto pp = linear(p, N, hc.C_H, hc.C_star + 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(hardy::family_energy(phi, fam, pp));
}
BENCHMARK(BM_FamilyEnergy)->Arg(2)->Arg(32)->Arg(300)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
