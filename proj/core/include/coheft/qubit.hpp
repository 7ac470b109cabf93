#pragma once

#include "coheft/operators.hpp"

namespace coheft {

/// Qubit state in the convention rho = (I + a.sigma)/2, so purity means
/// |a| = 1 and the z component is the population imbalance p0 - p1.
struct BlochVector {
  double ax = 0.0;
  double ay = 0.0;
  double az = 0.0;

  double norm() const;
};

/// Bloch-sphere rotation: y-axis by theta, then z-axis by phi.
/// Entries: [[e^{-i phi/2} cos(theta/2), -e^{-i phi/2} sin(theta/2)],
///           [e^{+i phi/2} sin(theta/2),  e^{+i phi/2} cos(theta/2)]].
/// Requires theta in [0, pi] and phi in [0, 2 pi); throws AngleOutOfRange.
UnitaryOperator rotation_unitary(double theta, double phi);

/// Half-wave-plate Jones matrix for a fast axis at angle alpha from
/// horizontal: [[cos 2a, sin 2a], [sin 2a, -cos 2a]]. Real, unitary,
/// determinant -1, and an involution. Any real alpha is accepted (the
/// matrix has period pi). At alpha = theta/4 its squared entry moduli match
/// rotation_unitary(theta, .), so both drive identical TPM statistics.
UnitaryOperator hwp_jones(double alpha);

/// a_i = tr(rho sigma_i). Only d = 2; throws DimensionMismatch otherwise.
BlochVector bloch_vector(const DensityMatrix& rho);

/// Inverse map rho = (I + a.sigma)/2. Throws InvalidBlochVector when the
/// vector leaves the closed unit ball beyond tolerance.
DensityMatrix bloch_to_state(const BlochVector& a);

}  // namespace coheft
