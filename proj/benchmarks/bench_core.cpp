#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "qcm/gauge.hpp"
#include "qcm/opmodel.hpp"
#include "qcm/seqnorm.hpp"

using namespace qcm;

namespace {

const GaugeSpec kPower = GaugeSpec::power(1.5);

// depth 4 is the largest model the dense oracle accepts at n = 2.
void BM_SpectrumAnalytic(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const auto c = build_complex(kPower, depth);
  const auto m = build_model(c, depth);
  for (auto _ : state) benchmark::DoNotOptimize(commutator_spectrum_analytic(m, 1, 0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.size()));
}
BENCHMARK(BM_SpectrumAnalytic)->DenseRange(3, 9, 2);

void BM_SpectrumBruteForce(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const auto c = build_complex(kPower, depth);
  const auto m = build_model(c, depth);
  for (auto _ : state) benchmark::DoNotOptimize(commutator_spectrum_bruteforce(m, 1, 0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.size()));
}
BENCHMARK(BM_SpectrumBruteForce)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_PhiNorm(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  const auto pi = harmonic_weights(count);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(count);
  for (auto& x : xs) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(phi_norm(pi, xs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PhiNorm)->RangeMultiplier(16)->Range(1 << 8, 1 << 20);

void BM_Inverse(benchmark::State& state) {
  const auto g = state.range(0) == 0 ? kPower : GaugeSpec::example37();
  double y = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inverse(g, y));
    y = y < 1e-300 ? 1e-3 : y * 0.5;
  }
  state.SetLabel(std::string(to_string(g.family)));
}
BENCHMARK(BM_Inverse)->Arg(0)->Arg(1);

void BM_BuildRho(benchmark::State& state) {
  const auto g = GaugeSpec::example37();
  for (auto _ : state) benchmark::DoNotOptimize(build_rho(g, 1, static_cast<std::size_t>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildRho)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
