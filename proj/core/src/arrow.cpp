#include "coheft/arrow.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "coheft/csv.hpp"
#include "coheft/errors.hpp"

namespace coheft {

double mean_c_trace(const DensityMatrix& rho0, const UnitaryOperator& u,
                    const Hamiltonian& h) {
  if (rho0.dim() != h.dim() || u.dim() != h.dim())
    throw DimensionMismatch("mean_c_trace: operator dimensions disagree");
  const ComplexMatrix evolved =
      u.matrix() * rho0.matrix() * u.matrix().adjoint();
  const Complex diff = (evolved * h.matrix()).trace() -
                       (rho0.matrix() * h.matrix()).trace();
  return diff.real();
}

double mean_c_closed_form(double theta, double beta) {
  constexpr double pi = std::numbers::pi;
  if (!(theta >= 0.0 && theta <= pi))
    throw AngleOutOfRange("mean_c_closed_form: theta = " +
                          std::to_string(theta) + " outside [0, pi]");
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw InvalidBeta("mean_c_closed_form: beta must be finite and >= 0");
  const double s = std::sin(theta / 2.0);
  return s * s * std::tanh(beta / 2.0);
}

double bloch_z_after(double theta, double az0) {
  return az0 * std::cos(theta);
}

ArrowSweep arrow_sweep(const std::vector<double>& thetas,
                       const std::vector<double>& betas) {
  ArrowSweep sweep;
  sweep.thetas = thetas;
  sweep.betas = betas;
  sweep.mean_c.resize(thetas.size(), betas.size());
  double min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < thetas.size(); ++i)
    for (std::size_t j = 0; j < betas.size(); ++j) {
      const double v = mean_c_closed_form(thetas[i], betas[j]);
      sweep.mean_c(i, j) = v;
      min_value = std::min(min_value, v);
    }
  sweep.min_value = min_value;
  if (sweep.min_value < -1e-10)
    throw ArrowPropertyViolated("arrow_sweep: grid minimum " +
                                std::to_string(sweep.min_value) +
                                " dips below -1e-10");
  return sweep;
}

void write_arrow_csv(const ArrowSweep& sweep, std::ostream& out) {
  CsvWriter csv(out);
  csv.header({"theta", "beta", "mean_C"});
  for (std::size_t i = 0; i < sweep.thetas.size(); ++i)
    for (std::size_t j = 0; j < sweep.betas.size(); ++j)
      csv.row({format_double(sweep.thetas[i]), format_double(sweep.betas[j]),
               format_double(sweep.mean_c(i, j))});
  csv.comment("min_mean_C", format_double(sweep.min_value));
}

}  // namespace coheft
