#include "coheft/operators.hpp"

#include <cmath>
#include <string>

#include "coheft/errors.hpp"

namespace coheft {

Hamiltonian::Hamiltonian(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  require_supported_dim(matrix_, "Hamiltonian");
  const double defect = hermiticity_defect(matrix_);
  if (defect > kValidationTol)
    throw NonHermitianInput("Hamiltonian: ||H - H^dagger||_max = " +
                            std::to_string(defect));
  system_ = eig_hermitian(matrix_);
}

Hamiltonian Hamiltonian::from_energies(const Eigen::VectorXd& energies) {
  ComplexMatrix m = ComplexMatrix::Zero(energies.size(), energies.size());
  for (Eigen::Index i = 0; i < energies.size(); ++i) m(i, i) = energies(i);
  return Hamiltonian(std::move(m));
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  require_supported_dim(matrix_, "DensityMatrix");
  const double defect = hermiticity_defect(matrix_);
  if (defect > kValidationTol)
    throw InvalidStateMatrix("DensityMatrix: ||rho - rho^dagger||_max = " +
                             std::to_string(defect));
  const double trace_defect = std::abs(matrix_.trace() - Complex(1.0, 0.0));
  if (trace_defect > kValidationTol)
    throw InvalidStateMatrix("DensityMatrix: |tr(rho) - 1| = " +
                             std::to_string(trace_defect));
  system_ = eig_hermitian(matrix_);
  for (Eigen::Index i = 0; i < system_.values.size(); ++i) {
    const double v = system_.values(i);
    if (v < -kValidationTol)
      throw InvalidStateMatrix("DensityMatrix: negative eigenvalue " +
                               std::to_string(v));
    system_.values(i) = std::clamp(v, 0.0, 1.0);
  }
}

UnitaryOperator::UnitaryOperator(ComplexMatrix matrix)
    : matrix_(std::move(matrix)) {
  require_supported_dim(matrix_, "UnitaryOperator");
  const double defect = unitarity_defect(matrix_);
  if (defect > kValidationTol)
    throw NonUnitaryInput("UnitaryOperator: ||U^dagger U - I||_max = " +
                          std::to_string(defect));
}

UnitaryOperator UnitaryOperator::adjoint() const {
  return UnitaryOperator(matrix_.adjoint());
}

Eigen::VectorXd gibbs_populations(const Eigen::VectorXd& energies, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw InvalidBeta("beta must be finite and >= 0, got " +
                      std::to_string(beta));
  const double e_min = energies.minCoeff();
  Eigen::VectorXd weights(energies.size());
  for (Eigen::Index i = 0; i < energies.size(); ++i)
    weights(i) = std::exp(-beta * (energies(i) - e_min));
  return weights / weights.sum();
}

DensityMatrix thermal_state(const Hamiltonian& h, double beta) {
  const Eigen::VectorXd p = gibbs_populations(h.energies(), beta);
  const ComplexMatrix& v = h.eigenvectors();
  ComplexMatrix rho = ComplexMatrix::Zero(h.dim(), h.dim());
  for (int n = 0; n < h.dim(); ++n)
    rho += p(n) * (v.col(n) * v.col(n).adjoint());
  return DensityMatrix(std::move(rho));
}

}  // namespace coheft
