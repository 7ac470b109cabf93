#include "coheft/matrix.hpp"

#include <string>

#include "coheft/errors.hpp"

namespace coheft {

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

double unitarity_defect(const ComplexMatrix& m) {
  return max_abs(m.adjoint() * m -
                 ComplexMatrix::Identity(m.rows(), m.cols()));
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs(a - b) <= tol;
}

void require_supported_dim(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw DimensionMismatch(std::string(what) + ": matrix must be square, got " +
                            std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  if (m.rows() < 1 || m.rows() > kMaxDim)
    throw DimensionMismatch(std::string(what) + ": dimension " +
                            std::to_string(m.rows()) +
                            " outside supported range 1.." +
                            std::to_string(kMaxDim));
}

namespace {

// Largest-modulus entry made real and positive; exact-modulus ties go to the
// lowest index.
void fix_phases(ComplexMatrix& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double a = std::abs(vectors(i, j));
      if (a > best) {
        best = a;
        pivot = i;
      }
    }
    const Complex c = vectors(pivot, j);
    if (std::abs(c) > 0.0) vectors.col(j) *= std::conj(c) / std::abs(c);
  }
}

}  // namespace

EigenSystem eig_hermitian(const ComplexMatrix& m, double tol) {
  require_supported_dim(m, "eig_hermitian");
  const double defect = hermiticity_defect(m);
  if (defect > tol)
    throw NonHermitianInput("eig_hermitian: ||M - M^dagger||_max = " +
                            std::to_string(defect) + " exceeds tolerance");
  // Symmetrize before factoring so validation tolerance does not leak into
  // the decomposition.
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw NonHermitianInput("eig_hermitian: eigensolver failed to converge");
  EigenSystem out{solver.eigenvalues(), solver.eigenvectors()};
  fix_phases(out.vectors);
  return out;
}

}  // namespace coheft
