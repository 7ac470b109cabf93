#include "coheft/random.hpp"

#include <string>

#include "coheft/errors.hpp"

namespace coheft {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(const StreamKey& key) {
  std::uint64_t state = key.master;
  std::uint64_t out = splitmix64(state);
  state ^= key.point + 0x632be59bd9b4e019ULL;
  out ^= splitmix64(state);
  state ^= key.replicate + 0x9e6c63d0876a9a47ULL;
  out ^= splitmix64(state);
  state ^= key.purpose + 0xd1b54a32d192ed03ULL;
  out ^= splitmix64(state);
  return out;
}

std::mt19937_64 make_stream(const StreamKey& key) {
  return std::mt19937_64(derive_seed(key));
}

UnitaryOperator haar_unitary(int dim, std::mt19937_64& rng) {
  if (dim < 1 || dim > kMaxDim)
    throw DimensionMismatch("haar_unitary: dimension " + std::to_string(dim) +
                            " outside supported range");
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the gauge so the distribution is exactly Haar, not QR-convention
  // dependent.
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1.0, 0.0);
  }
  return UnitaryOperator(std::move(q));
}

}  // namespace coheft
