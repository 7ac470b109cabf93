#include "coheft/tpm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coheft/csv.hpp"
#include "coheft/errors.hpp"

namespace coheft {

namespace {

struct Transition {
  double gap;
  double weight;
};

// Groups consecutive sorted gaps closer than kDegeneracyTol. The support
// value of a bin is the midpoint of its extreme members, which negates
// exactly when every gap negates (forward/backward mirror symmetry).
TPMDistribution bin_transitions(std::vector<Transition> transitions,
                                double beta) {
  std::sort(transitions.begin(), transitions.end(),
            [](const Transition& a, const Transition& b) {
              return a.gap < b.gap;
            });
  TPMDistribution dist;
  dist.beta = beta;
  std::size_t i = 0;
  while (i < transitions.size()) {
    std::size_t j = i + 1;
    while (j < transitions.size() &&
           transitions[j].gap - transitions[j - 1].gap < kDegeneracyTol)
      ++j;
    double prob = 0.0;
    for (std::size_t k = i; k < j; ++k) prob += transitions[k].weight;
    if (prob != 0.0) {
      dist.support.push_back(0.5 * (transitions[i].gap + transitions[j - 1].gap));
      dist.probs.push_back(prob);
    }
    i = j;
  }
  return dist;
}

// Index ranges of degenerate energy groups in an ascending spectrum.
std::vector<std::pair<int, int>> energy_shells(const Eigen::VectorXd& energies) {
  std::vector<std::pair<int, int>> shells;
  int start = 0;
  for (int i = 1; i <= energies.size(); ++i) {
    if (i == energies.size() || energies(i) - energies(i - 1) >= kDegeneracyTol) {
      shells.emplace_back(start, i);
      start = i;
    }
  }
  return shells;
}

bool check_couples_shells(const Hamiltonian& h, const UnitaryOperator& u) {
  const ComplexMatrix& v = h.eigenvectors();
  double worst = 0.0;
  for (const auto& [lo, hi] : energy_shells(h.energies())) {
    ComplexMatrix projector = ComplexMatrix::Zero(h.dim(), h.dim());
    for (int n = lo; n < hi; ++n)
      projector += v.col(n) * v.col(n).adjoint();
    worst = std::max(worst,
                     max_abs(u.matrix() * projector - projector * u.matrix()));
  }
  return worst > kValidationTol;
}

}  // namespace

TPMDistribution tpm_distribution(const Hamiltonian& h, double beta,
                                 const UnitaryOperator& u,
                                 const TpmOptions& options) {
  if (h.dim() != u.dim())
    throw DimensionMismatch("tpm_distribution: H is d = " +
                            std::to_string(h.dim()) + " but U is d = " +
                            std::to_string(u.dim()));
  const Eigen::VectorXd populations = gibbs_populations(h.energies(), beta);
  const ComplexMatrix amplitudes =
      h.eigenvectors().adjoint() * u.matrix() * h.eigenvectors();

  std::vector<Transition> transitions;
  transitions.reserve(static_cast<std::size_t>(h.dim()) * h.dim());
  for (int n = 0; n < h.dim(); ++n)
    for (int m = 0; m < h.dim(); ++m)
      transitions.push_back({h.energies()(m) - h.energies()(n),
                             populations(n) * std::norm(amplitudes(m, n))});

  TPMDistribution dist = bin_transitions(std::move(transitions), beta);
  if (options.spectrum_preserving_check)
    dist.couples_energy_shells = check_couples_shells(h, u);
  return dist;
}

Complex characteristic_function(const TPMDistribution& dist, Complex q) {
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < dist.size(); ++i)
    acc += dist.probs[i] * std::exp(Complex(0.0, 1.0) * q * dist.support[i]);
  return acc;
}

Complex characteristic_function_trace(const Hamiltonian& h, double beta,
                                      const UnitaryOperator& u, Complex q) {
  if (h.dim() != u.dim())
    throw DimensionMismatch("characteristic_function_trace: dimension mismatch");
  const ComplexMatrix& v = h.eigenvectors();
  const int d = h.dim();
  ComplexMatrix exp_plus = ComplexMatrix::Zero(d, d);
  ComplexMatrix exp_minus = ComplexMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    const Complex phase = Complex(0.0, 1.0) * q * h.energies()(n);
    exp_plus += std::exp(phase) * (v.col(n) * v.col(n).adjoint());
    exp_minus += std::exp(-phase) * (v.col(n) * v.col(n).adjoint());
  }
  const ComplexMatrix rho = thermal_state(h, beta).matrix();
  return (u.matrix().adjoint() * exp_plus * u.matrix() * exp_minus * rho)
      .trace();
}

double ift_value(const TPMDistribution& dist) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i)
    acc += dist.probs[i] * std::exp(-dist.beta * dist.support[i]);
  return acc;
}

TPMDistribution backward_distribution(const Hamiltonian& h, double beta,
                                      const UnitaryOperator& u) {
  return tpm_distribution(h, beta, u.adjoint());
}

double DFTReport::max_abs_residual() const {
  double worst = 0.0;
  for (const auto& row : rows)
    if (row.residual) worst = std::max(worst, std::abs(*row.residual));
  return worst;
}

DFTReport dft_report(const TPMDistribution& forward,
                     const TPMDistribution& backward) {
  if (std::abs(forward.beta - backward.beta) > kValidationTol)
    throw MismatchedProtocol(
        "dft_report: forward beta " + std::to_string(forward.beta) +
        " differs from backward beta " + std::to_string(backward.beta));
  DFTReport report;
  for (std::size_t i = 0; i < forward.size(); ++i) {
    DFTRow row;
    row.c = forward.support[i];
    row.p_forward = forward.probs[i];
    row.beta_c = forward.beta * row.c;
    // Locate the backward support point at -C within the binning tolerance.
    double p_back = 0.0;
    for (std::size_t j = 0; j < backward.size(); ++j) {
      if (std::abs(backward.support[j] + row.c) < kDegeneracyTol) {
        p_back = backward.probs[j];
        break;
      }
    }
    row.p_backward_neg = p_back;
    if (row.p_forward > kDftPositivityFloor && p_back > kDftPositivityFloor) {
      row.log_ratio = std::log(row.p_forward) - std::log(p_back);
      row.residual = *row.log_ratio - row.beta_c;
    }
    report.rows.push_back(row);
  }
  return report;
}

double mean_coherent_energy(const TPMDistribution& dist) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i)
    acc += dist.probs[i] * dist.support[i];
  return acc;
}

void write_distribution_csv(const TPMDistribution& dist, std::ostream& out) {
  CsvWriter csv(out);
  csv.header({"C", "prob"});
  for (std::size_t i = 0; i < dist.size(); ++i)
    csv.row({format_double(dist.support[i]), format_double(dist.probs[i])});
}

void write_dft_csv(const DFTReport& report, std::ostream& out) {
  CsvWriter csv(out);
  csv.header({"C", "P_fwd", "P_bwd_neg", "log_ratio", "beta_C", "residual"});
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("nan");
  };
  for (const auto& row : report.rows)
    csv.row({format_double(row.c), format_double(row.p_forward),
             format_double(row.p_backward_neg), opt(row.log_ratio),
             format_double(row.beta_c), opt(row.residual)});
}

}  // namespace coheft
