#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "coheft/operators.hpp"

namespace coheft {

/// Exact two-point-measurement statistics of the coherent energy
/// C = E_m - E_n for a thermal initial state at inverse temperature beta,
/// evolved by a unitary between the two projective energy measurements.
struct TPMDistribution {
  double beta = 0.0;
  /// Distinct coherent-energy values, ascending. Transitions whose energy
  /// gaps differ by less than kDegeneracyTol share one support point.
  std::vector<double> support;
  std::vector<double> probs;
  /// Set by the spectrum-preserving check: the process couples distinct
  /// energy shells of H, i.e. it can actually transfer energy between
  /// levels. Reading that transfer as coherent energy additionally relies
  /// on the caller's guarantee that the levels stayed fixed during the
  /// evolution, which cannot be verified from (H, U) alone.
  bool couples_energy_shells = false;

  std::size_t size() const { return support.size(); }
};

struct TpmOptions {
  bool spectrum_preserving_check = true;
};

/// P(C) = sum_{n,m} P_n |<m|U|n>|^2 over all transitions, with Gibbs
/// weights P_n, binned over degenerate gaps. Zero-weight bins are dropped.
TPMDistribution tpm_distribution(const Hamiltonian& h, double beta,
                                 const UnitaryOperator& u,
                                 const TpmOptions& options = {});

/// chi(q) = sum_i p_i exp(i q C_i) for complex q.
Complex characteristic_function(const TPMDistribution& dist, Complex q);

/// Same chi(q) through the trace formula
/// tr{U^dagger e^{iqH} U e^{-iqH} rho_thermal}; the independent route for
/// cross-checking the distribution sum.
Complex characteristic_function_trace(const Hamiltonian& h, double beta,
                                      const UnitaryOperator& u, Complex q);

/// <e^{-beta C}>; equals 1 for any thermal-initial distribution.
double ift_value(const TPMDistribution& dist);

/// TPM statistics of the time-reversed protocol: U^dagger with thermal
/// re-preparation. Applying it twice reproduces the forward distribution
/// bit-identically.
TPMDistribution backward_distribution(const Hamiltonian& h, double beta,
                                      const UnitaryOperator& u);

/// Probabilities below this floor are reported as undefined log-ratios
/// rather than +-inf.
inline constexpr double kDftPositivityFloor = 1e-300;

struct DFTRow {
  double c = 0.0;
  double p_forward = 0.0;
  double p_backward_neg = 0.0;  // backward probability at -C
  double beta_c = 0.0;
  std::optional<double> log_ratio;  // ln P(C) - ln Pb(-C)
  std::optional<double> residual;   // log_ratio - beta*C
};

/// Detailed-FT table P(C)/Pb(-C) = e^{beta C}, one row per forward support
/// point. Throws MismatchedProtocol when the betas disagree.
struct DFTReport {
  std::vector<DFTRow> rows;
  double max_abs_residual() const;
};

DFTReport dft_report(const TPMDistribution& forward,
                     const TPMDistribution& backward);

/// <C> = sum_i p_i C_i. Nonnegative for thermal-initial distributions
/// whenever both measurements share the Hamiltonian.
double mean_coherent_energy(const TPMDistribution& dist);

/// CSV columns C,prob.
void write_distribution_csv(const TPMDistribution& dist, std::ostream& out);
/// CSV columns C,P_fwd,P_bwd_neg,log_ratio,beta_C,residual.
void write_dft_csv(const DFTReport& report, std::ostream& out);

}  // namespace coheft
