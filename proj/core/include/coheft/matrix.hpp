#pragma once

#include <Eigen/Dense>
#include <complex>

namespace coheft {

using Complex = std::complex<double>;

/// Carrier for every operator in the library. Dense is fine: supported
/// dimensions are 1..64.
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxDim = 64;

/// Validation tolerance (Hermiticity, unitarity, trace).
inline constexpr double kValidationTol = 1e-9;
/// Tolerance for reconstruction identities (round trips, commutators).
inline constexpr double kReconstructionTol = 1e-12;
/// Eigenvalues closer than this are treated as one degenerate group; the
/// same resolution bins coherent-energy values.
inline constexpr double kDegeneracyTol = 1e-9;

/// Largest entry modulus.
double max_abs(const ComplexMatrix& m);

/// ||M - M^dagger||_max.
double hermiticity_defect(const ComplexMatrix& m);

/// ||U^dagger U - I||_max.
double unitarity_defect(const ComplexMatrix& m);

/// Entrywise comparison with an absolute tolerance.
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b,
                  double tol = kValidationTol);

/// Throws DimensionMismatch unless m is square with 1 <= dim <= 64.
void require_supported_dim(const ComplexMatrix& m, const char* what);

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  ComplexMatrix vectors;    // orthonormal columns, phase-fixed
};

/// Spectral decomposition of a Hermitian matrix. Eigenvalues come back
/// ascending; each eigenvector is rotated so its largest-modulus entry is
/// real and positive (ties broken by lowest index), which makes the output
/// deterministic. Throws NonHermitianInput when the defect exceeds tol.
EigenSystem eig_hermitian(const ComplexMatrix& m, double tol = kValidationTol);

}  // namespace coheft
