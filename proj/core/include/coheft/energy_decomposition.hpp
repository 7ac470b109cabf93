#pragma once

#include <ostream>
#include <vector>

#include "coheft/trajectory.hpp"

namespace coheft {

/// w(n, k) = |<n|k>|^2 between the H eigenbasis and the rho eigenbasis.
/// Doubly stochastic: rows and columns each sum to 1.
Eigen::MatrixXd overlap_weights(const Hamiltonian& h, const DensityMatrix& rho);

/// Cumulative work/heat/coherent-energy ledger along a trajectory grid.
/// residual[i] = |U(t_i) - U(t_0) - W - Q - C| is the first-law closure
/// defect; it shrinks as O(dt^2) on smooth trajectories.
struct EnergyLedger {
  std::vector<double> times;
  std::vector<double> internal;  // U(t) = tr(rho H)
  std::vector<double> work;
  std::vector<double> heat;
  std::vector<double> coherent;
  std::vector<double> residual;

  double max_residual() const;
};

/// Integrates the three first-law contributions with trapezoidal quadrature
/// of centered-difference integrands (one-sided second order at the ends).
/// Eigenvalue branches are tracked between grid points by maximal
/// eigenvector overlap; throws EigenTrackingAmbiguous when any matched
/// overlap^2 drops below 0.5 or the greedy match is not a permutation;
/// refine the grid in that case.
EnergyLedger decompose(const Trajectory& traj);

/// max_t |U(t) - U(0) - W(t) - Q(t) - C(t)|.
double closure_report(const EnergyLedger& ledger);

/// CSV columns time,U,W,Q,C,residual.
void write_ledger_csv(const EnergyLedger& ledger, std::ostream& out);

namespace detail {

/// Spectral-data entry point behind decompose(): per grid point the labeled
/// energies/populations and their eigenvector columns. Exposed so gauge
/// invariance (eigenvector phases must not matter) is testable directly.
EnergyLedger decompose_spectral(
    const std::vector<double>& times,
    const std::vector<Eigen::VectorXd>& energies,
    const std::vector<ComplexMatrix>& energy_vectors,
    const std::vector<Eigen::VectorXd>& populations,
    const std::vector<ComplexMatrix>& population_vectors);

}  // namespace detail

}  // namespace coheft
