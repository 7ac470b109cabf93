#include "coheft/qubit.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "coheft/errors.hpp"

namespace coheft {

double BlochVector::norm() const {
  return std::sqrt(ax * ax + ay * ay + az * az);
}

UnitaryOperator rotation_unitary(double theta, double phi) {
  constexpr double pi = std::numbers::pi;
  if (!(theta >= 0.0 && theta <= pi))
    throw AngleOutOfRange("rotation_unitary: theta = " + std::to_string(theta) +
                          " outside [0, pi]");
  if (!(phi >= 0.0 && phi < 2.0 * pi))
    throw AngleOutOfRange("rotation_unitary: phi = " + std::to_string(phi) +
                          " outside [0, 2 pi)");
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex em = std::exp(Complex(0.0, -phi / 2.0));
  const Complex ep = std::exp(Complex(0.0, phi / 2.0));
  ComplexMatrix u(2, 2);
  u(0, 0) = em * c;
  u(0, 1) = -em * s;
  u(1, 0) = ep * s;
  u(1, 1) = ep * c;
  return UnitaryOperator(std::move(u));
}

UnitaryOperator hwp_jones(double alpha) {
  const double c = std::cos(2.0 * alpha);
  const double s = std::sin(2.0 * alpha);
  ComplexMatrix u(2, 2);
  u(0, 0) = c;
  u(0, 1) = s;
  u(1, 0) = s;
  u(1, 1) = -c;
  return UnitaryOperator(std::move(u));
}

BlochVector bloch_vector(const DensityMatrix& rho) {
  if (rho.dim() != 2)
    throw DimensionMismatch("bloch_vector: requires a qubit, got d = " +
                            std::to_string(rho.dim()));
  const ComplexMatrix& m = rho.matrix();
  BlochVector a;
  a.ax = 2.0 * m(1, 0).real();
  a.ay = 2.0 * m(1, 0).imag();
  a.az = (m(0, 0) - m(1, 1)).real();
  return a;
}

DensityMatrix bloch_to_state(const BlochVector& a) {
  const double n = a.norm();
  if (n > 1.0 + kValidationTol)
    throw InvalidBlochVector("bloch_to_state: |a| = " + std::to_string(n) +
                             " exceeds 1");
  ComplexMatrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 + a.az);
  m(1, 1) = 0.5 * (1.0 - a.az);
  m(1, 0) = 0.5 * Complex(a.ax, a.ay);
  m(0, 1) = std::conj(m(1, 0));
  return DensityMatrix(std::move(m));
}

}  // namespace coheft
