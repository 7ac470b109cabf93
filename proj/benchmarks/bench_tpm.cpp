#include <benchmark/benchmark.h>

#include <random>

#include "coheft/random.hpp"
#include "coheft/tpm.hpp"

using namespace coheft;

namespace {

Hamiltonian ladder(int d) {
  Eigen::VectorXd e(d);
  for (int i = 0; i < d; ++i) e(i) = i;
  return Hamiltonian::from_energies(e);
}

}  // namespace

static void TpmDistribution(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Hamiltonian h = ladder(d);
  std::mt19937_64 rng(1);
  const UnitaryOperator u = haar_unitary(d, rng);
  for (auto _ : state) {
    auto dist = tpm_distribution(h, 1.3, u);
    benchmark::DoNotOptimize(dist);
  }
}
BENCHMARK(TpmDistribution)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

static void CharacteristicFunctionTrace(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Hamiltonian h = ladder(d);
  std::mt19937_64 rng(2);
  const UnitaryOperator u = haar_unitary(d, rng);
  const Complex q(0.7, -0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(characteristic_function_trace(h, 1.1, u, q));
  }
}
BENCHMARK(CharacteristicFunctionTrace)->Arg(2)->Arg(8)->Arg(32)->Arg(64);

static void BackwardAndReport(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Hamiltonian h = ladder(d);
  std::mt19937_64 rng(3);
  const UnitaryOperator u = haar_unitary(d, rng);
  for (auto _ : state) {
    const auto report = dft_report(tpm_distribution(h, 0.9, u),
                                   backward_distribution(h, 0.9, u));
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BackwardAndReport)->Arg(2)->Arg(8)->Arg(32);

BENCHMARK_MAIN();
