#include <benchmark/benchmark.h>

#include <numbers>

#include "coheft/energy_decomposition.hpp"
#include "coheft/qubit.hpp"

using namespace coheft;

namespace {

Trajectory rotation_trajectory(int steps) {
  const auto h = Hamiltonian::from_energies(Eigen::Vector2d(0.0, 1.0));
  const ComplexMatrix rho0 = thermal_state(h, 1.0).matrix();
  std::vector<double> times;
  std::vector<Hamiltonian> hs;
  std::vector<DensityMatrix> rhos;
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    times.push_back(t);
    hs.push_back(h);
    const ComplexMatrix u =
        rotation_unitary(std::numbers::pi * t, 0.0).matrix();
    const ComplexMatrix evolved = u * rho0 * u.adjoint();
    rhos.emplace_back(0.5 * (evolved + evolved.adjoint()));
  }
  return Trajectory(std::move(times), std::move(hs), std::move(rhos));
}

}  // namespace

static void Decompose(benchmark::State& state) {
  const Trajectory traj = rotation_trajectory(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto ledger = decompose(traj);
    benchmark::DoNotOptimize(ledger);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(Decompose)->Arg(25)->Arg(100)->Arg(400)->Complexity();

static void OverlapWeights(benchmark::State& state) {
  const auto h = Hamiltonian::from_energies(Eigen::Vector2d(0.0, 1.0));
  const DensityMatrix rho = thermal_state(h, 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(overlap_weights(h, rho));
  }
}
BENCHMARK(OverlapWeights);

BENCHMARK_MAIN();
