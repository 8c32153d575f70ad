#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "beamspec/charfun.hpp"
#include "beamspec/modes.hpp"
#include "beamspec/operator.hpp"
#include "beamspec/simulator.hpp"
#include "beamspec/spectrum.hpp"

using namespace beamspec;

static void BM_EvalCharScaled(benchmark::State& state) {
  const Gain k(1.0);
  cplx tau{40.3, 0.02};
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_char_scaled(tau, k));
    tau += 1e-9;
  }
}
BENCHMARK(BM_EvalCharScaled);

static void BM_FindEigenvalue(benchmark::State& state) {
  const Gain k(1.0);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_eigenvalue(n, k));
}
BENCHMARK(BM_FindEigenvalue)->Arg(10)->Arg(100)->Arg(1000);

static void BM_ComputeSpectrum(benchmark::State& state) {
  const Gain k(1.0);
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_spectrum(n_max, k));
}
BENCHMARK(BM_ComputeSpectrum)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_BuildModeProfile(benchmark::State& state) {
  const Gain k(1.0);
  const SpectralPoint p = find_eigenvalue(40, k);
  for (auto _ : state) benchmark::DoNotOptimize(l2_norm(profile_F(build_mode(p, k, 1024))));
}
BENCHMARK(BM_BuildModeProfile);

static void BM_BandedLU(benchmark::State& state) {
  const DiscreteGenerator g(static_cast<int>(state.range(0)), Gain(1.0));
  const std::complex<double> shift{-2.0, 20.0};
  std::vector<std::complex<double>> b(static_cast<std::size_t>(g.size()), {1.0, 0.0});
  for (auto _ : state) {
    const BandedLU<std::complex<double>> lu(g.assemble(-shift, std::complex<double>{1.0}));
    benchmark::DoNotOptimize(lu.solve(b));
  }
}
BENCHMARK(BM_BandedLU)->Arg(200)->Arg(800);

static void BM_OracleEigenvalue(benchmark::State& state) {
  const DiscreteGenerator g(400, Gain(1.0));
  const cplx l = find_eigenvalue(1, Gain(1.0)).lambda();
  for (auto _ : state) benchmark::DoNotOptimize(oracle_eigenvalue(g, l * 1.001));
}
BENCHMARK(BM_OracleEigenvalue)->Unit(benchmark::kMillisecond);

static void BM_Simulate(benchmark::State& state) {
  SimConfig c;
  c.M = 200;
  c.dt = 1e-3;
  c.t_final = 1.0;
  c.ic = InitialCondition::poly();
  for (auto _ : state) benchmark::DoNotOptimize(simulate(c));
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
