#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "coheft/random.hpp"
#include "coheft/tpm.hpp"

namespace coheft {

/// Entangled two-photon source sqrt(p0)|00> + sqrt(p1)|11> in the
/// idler(x)signal polarization basis. Tracing out the idler leaves the
/// signal in the thermal qubit state with beta = ln(p0/p1) for E1-E0 = 1.
class SourceState {
public:
  static SourceState from_beta(double beta);
  static SourceState from_weights(double p0, double p1);

  double p0() const { return p0_; }
  double p1() const { return p1_; }
  double beta() const;
  /// Two-qubit amplitudes, basis index 2*idler + signal.
  const Eigen::Vector4cd& amplitudes() const { return amplitudes_; }
  DensityMatrix reduced_signal() const;

private:
  SourceState(double p0, double p1);
  double p0_;
  double p1_;
  Eigen::Vector4cd amplitudes_;
};

struct NoiseConfig {
  bool misalignment_enabled = false;
  double misalignment_sigma = 0.0;  // radians of HWP-axis jitter per batch
  bool background_enabled = false;
  double background = 0.0;  // expected accidental counts per outcome

  void validate() const;
};

/// One joint polarization projection: idler heralds the pre-process state,
/// the signal is measured after the process.
struct MeasurementSetting {
  int idler;  // 0 or 1
  int signal;
  UnitaryOperator process;

  MeasurementSetting(int idler_label, int signal_label, UnitaryOperator u);
};

/// Coincidence counts per joint outcome (k, j), index 2k + j.
struct CountRecord {
  std::array<std::int64_t, 4> counts{};
  double exposure = 0.0;  // expected total coincidences N
  std::uint64_t seed = 0;
  NoiseConfig noise;

  std::int64_t total() const;
};

/// p(k, j) = |(<k| (x) <j| U)|psi0>|^2; index 2k + j. The induced C = j - k
/// statistics coincide with tpm_distribution(diag(0,1), beta, U).
std::array<double, 4> joint_probabilities(const SourceState& source,
                                          const UnitaryOperator& process);
double joint_probability(const SourceState& source,
                         const MeasurementSetting& setting);

/// Independent Poisson(N p + b) draw per outcome (expected, not fixed,
/// total). Deterministic for a given seed. Waveplate misalignment acts
/// upstream, where the angle is known; see emulate_counts.
CountRecord sample_counts(const std::array<double, 4>& probs, double exposure,
                          const NoiseConfig& noise, std::uint64_t seed);

/// Full per-setting pipeline: optional Gaussian jitter of the HWP axis for
/// the batch, Jones matrix, joint probabilities, Poisson counts. Streams
/// derive from (key.master, key.point, key.replicate) per the documented
/// discipline.
CountRecord emulate_counts(double beta, double hwp_alpha, double exposure,
                           const NoiseConfig& noise, const StreamKey& key);

/// P(C) estimates from count ratios, support fixed at {-1, 0, +1}.
TPMDistribution estimate_distribution(const CountRecord& record,
                                      double beta_nominal);

struct BootstrapErrors {
  std::array<double, 3> prob_stderr{};  // for C = -1, 0, +1
  double mean_c_stderr = 0.0;
  double ift_stderr = 0.0;
};

/// Poisson bootstrap: resample every outcome count around its observed
/// value, recompute each statistic, report sample standard deviations.
BootstrapErrors bootstrap_errorbars(const CountRecord& record,
                                    double beta_nominal, int resamples,
                                    std::uint64_t seed);

struct DistributionEstimate {
  TPMDistribution dist;
  BootstrapErrors errors;
};

DistributionEstimate estimate_with_errors(const CountRecord& record,
                                          double beta_nominal, int resamples,
                                          std::uint64_t seed);

/// <e^{-beta C}> of an estimated qubit distribution:
/// P(0) + P(+1) e^{-beta} + P(-1) e^{+beta}.
double ift_estimate(const TPMDistribution& dist);

struct IftPoint {
  double beta = 0.0;
  double estimate = 0.0;
  double stderror = 0.0;
};

/// Full IFT sweep: per beta, source -> jittered HWP -> counts ->
/// estimator -> IFT with bootstrap error bar. theta is the Bloch rotation
/// angle; the HWP axis sits at theta/4.
std::vector<IftPoint> ift_experiment(const std::vector<double>& beta_grid,
                                     double theta, double exposure,
                                     const NoiseConfig& noise,
                                     std::uint64_t seed, int resamples = 1000);

/// The time-reversed protocol's HWP axis: rotated by 90 degrees.
double backward_hwp_alpha(double alpha);

}  // namespace coheft
