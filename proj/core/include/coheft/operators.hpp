#pragma once

#include "coheft/matrix.hpp"

namespace coheft {

/// Hermitian observable with its spectral decomposition cached at
/// construction. Immutable afterwards; safe to share across threads.
class Hamiltonian {
public:
  explicit Hamiltonian(ComplexMatrix matrix);

  /// Diagonal Hamiltonian with the given energies (kept in the given order
  /// if ascending, sorted otherwise).
  static Hamiltonian from_energies(const Eigen::VectorXd& energies);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  /// Ascending eigenvalues.
  const Eigen::VectorXd& energies() const { return system_.values; }
  /// Orthonormal eigenvector columns matching energies().
  const ComplexMatrix& eigenvectors() const { return system_.vectors; }

private:
  ComplexMatrix matrix_;
  EigenSystem system_;
};

/// Unit-trace positive semi-definite state. Eigenvalues are clamped to
/// [0, 1] after validation so downstream probabilities stay in range.
class DensityMatrix {
public:
  explicit DensityMatrix(ComplexMatrix matrix);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  /// Ascending, clamped eigenvalues.
  const Eigen::VectorXd& eigenvalues() const { return system_.values; }
  const ComplexMatrix& eigenvectors() const { return system_.vectors; }

private:
  ComplexMatrix matrix_;
  EigenSystem system_;
};

class UnitaryOperator {
public:
  explicit UnitaryOperator(ComplexMatrix matrix);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  /// Time-reversal partner U^dagger = U^-1.
  UnitaryOperator adjoint() const;

private:
  ComplexMatrix matrix_;
};

/// Gibbs state exp(-beta H)/Z, diagonal in the H eigenbasis. Large beta is
/// handled by shifting energies so only ratios enter the exponentials.
/// Throws InvalidBeta for negative or non-finite beta.
DensityMatrix thermal_state(const Hamiltonian& h, double beta);

/// Gibbs populations of thermal_state in ascending-energy order.
Eigen::VectorXd gibbs_populations(const Eigen::VectorXd& energies, double beta);

}  // namespace coheft
