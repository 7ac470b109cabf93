#pragma once

#include <ostream>
#include <vector>

#include "coheft/operators.hpp"

namespace coheft {

/// <C> = tr[U rho0 U^dagger H] - tr[rho0 H]: the exact internal-energy
/// change of the process. Nonnegative whenever rho0 is thermal in H, for
/// any unitary and any dimension.
double mean_c_trace(const DensityMatrix& rho0, const UnitaryOperator& u,
                    const Hamiltonian& h);

/// Thermal qubit under a y-axis rotation by theta:
/// <C> = sin^2(theta/2) tanh(beta/2). Independent of the z-rotation angle.
double mean_c_closed_form(double theta, double beta);

/// z-component of the Bloch vector after the rotation: az0 cos(theta).
double bloch_z_after(double theta, double az0);

/// <C> surface over a (theta, beta) grid; mean_c(i, j) pairs thetas[i]
/// with betas[j]. min_value certifies global nonnegativity.
struct ArrowSweep {
  std::vector<double> thetas;
  std::vector<double> betas;
  Eigen::MatrixXd mean_c;
  double min_value = 0.0;
};

ArrowSweep arrow_sweep(const std::vector<double>& thetas,
                       const std::vector<double>& betas);

/// CSV columns theta,beta,mean_C plus a trailing "# min_mean_C=" line.
void write_arrow_csv(const ArrowSweep& sweep, std::ostream& out);

}  // namespace coheft
