#pragma once

#include <cstdint>
#include <random>

#include "coheft/operators.hpp"

namespace coheft {

/// splitmix64 step; also the mixer behind the stream discipline below.
std::uint64_t splitmix64(std::uint64_t& state);

/// Stream discipline: every stochastic component draws from its own
/// mt19937_64 stream whose seed is derived as
///   mix(master, point, replicate, purpose)
/// where point indexes the sweep point (e.g. the beta grid), replicate the
/// repetition, and purpose separates independent uses at the same point:
///   0 = coincidence counting, 1 = waveplate misalignment, 2 = bootstrap.
/// Identical keys give identical streams; distinct keys give independent
/// ones, so sweep points and replicates can run concurrently.
struct StreamKey {
  std::uint64_t master = 0;
  std::uint64_t point = 0;
  std::uint64_t replicate = 0;
  std::uint64_t purpose = 0;
};

std::uint64_t derive_seed(const StreamKey& key);
std::mt19937_64 make_stream(const StreamKey& key);

/// Haar-distributed random unitary: QR of a complex Ginibre matrix with the
/// R-diagonal phase correction.
UnitaryOperator haar_unitary(int dim, std::mt19937_64& rng);

}  // namespace coheft
