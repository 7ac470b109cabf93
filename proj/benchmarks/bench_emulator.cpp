#include <benchmark/benchmark.h>

#include <numbers>

#include "coheft/photonic.hpp"
#include "coheft/qubit.hpp"

using namespace coheft;

namespace {
const double kTheta = 86.6 * std::numbers::pi / 180.0;
}

static void SampleCounts(benchmark::State& state) {
  const auto probs = joint_probabilities(SourceState::from_beta(1.0),
                                         hwp_jones(kTheta / 4.0));
  const double exposure = static_cast<double>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_counts(probs, exposure, NoiseConfig{}, ++seed));
  }
}
BENCHMARK(SampleCounts)->Arg(1000)->Arg(100000)->Arg(1000000);

static void Bootstrap(benchmark::State& state) {
  const CountRecord rec = emulate_counts(1.0, kTheta / 4.0, 1e4, NoiseConfig{},
                                         StreamKey{7, 0, 0, 0});
  const int resamples = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap_errorbars(rec, 1.0, resamples, 11));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(Bootstrap)->Arg(100)->Arg(1000)->Arg(10000)->Complexity();

static void IftSweepPoint(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ift_experiment({1.5}, kTheta, 1e4, NoiseConfig{}, ++seed, 200));
  }
}
BENCHMARK(IftSweepPoint);

BENCHMARK_MAIN();
