#include "coheft/photonic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "coheft/errors.hpp"
#include "coheft/qubit.hpp"

namespace coheft {

SourceState::SourceState(double p0, double p1) : p0_(p0), p1_(p1) {
  amplitudes_.setZero();
  amplitudes_(0) = std::sqrt(p0_);  // |00>
  amplitudes_(3) = std::sqrt(p1_);  // |11>
}

SourceState SourceState::from_beta(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw InvalidBeta("SourceState: beta must be finite and >= 0, got " +
                      std::to_string(beta));
  const double w = std::exp(-beta);
  return SourceState(1.0 / (1.0 + w), w / (1.0 + w));
}

SourceState SourceState::from_weights(double p0, double p1) {
  if (!(p0 >= 0.0 && p1 >= 0.0) || std::abs(p0 + p1 - 1.0) > kValidationTol)
    throw InvalidStateMatrix("SourceState: weights must be >= 0 and sum to 1");
  return SourceState(p0, p1);
}

double SourceState::beta() const {
  return std::log(p0_ / p1_);
}

DensityMatrix SourceState::reduced_signal() const {
  // Partial trace over the idler of |psi0><psi0|.
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int jp = 0; jp < 2; ++jp)
        rho(j, jp) += amplitudes_(2 * k + j) * std::conj(amplitudes_(2 * k + jp));
  return DensityMatrix(std::move(rho));
}

void NoiseConfig::validate() const {
  if (misalignment_sigma < 0.0 || !std::isfinite(misalignment_sigma))
    throw InvalidNoiseConfig("misalignment sigma must be finite and >= 0");
  if (background < 0.0 || !std::isfinite(background))
    throw InvalidNoiseConfig("background rate must be finite and >= 0");
}

MeasurementSetting::MeasurementSetting(int idler_label, int signal_label,
                                       UnitaryOperator u)
    : idler(idler_label), signal(signal_label), process(std::move(u)) {
  if (idler != 0 && idler != 1)
    throw ConfigParse("MeasurementSetting: idler label must be 0 or 1");
  if (signal != 0 && signal != 1)
    throw ConfigParse("MeasurementSetting: signal label must be 0 or 1");
  if (process.dim() != 2)
    throw DimensionMismatch("MeasurementSetting: process must act on a qubit");
}

std::int64_t CountRecord::total() const {
  std::int64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

std::array<double, 4> joint_probabilities(const SourceState& source,
                                          const UnitaryOperator& process) {
  if (process.dim() != 2)
    throw DimensionMismatch("joint_probabilities: process must act on a qubit");
  const ComplexMatrix& u = process.matrix();
  std::array<double, 4> p{};
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j) {
      // <kj| (I (x) U) |psi0> = sum_s amp(k, s) U(j, s)
      Complex amp(0.0, 0.0);
      for (int s = 0; s < 2; ++s)
        amp += source.amplitudes()(2 * k + s) * u(j, s);
      p[2 * k + j] = std::norm(amp);
    }
  return p;
}

double joint_probability(const SourceState& source,
                         const MeasurementSetting& setting) {
  return joint_probabilities(source, setting.process)[2 * setting.idler +
                                                      setting.signal];
}

CountRecord sample_counts(const std::array<double, 4>& probs, double exposure,
                          const NoiseConfig& noise, std::uint64_t seed) {
  if (!(exposure > 0.0) || !std::isfinite(exposure))
    throw InvalidExposure("sample_counts: exposure must be finite and > 0, got " +
                          std::to_string(exposure));
  noise.validate();
  const double background =
      noise.background_enabled ? noise.background : 0.0;
  std::mt19937_64 rng(seed);
  CountRecord record;
  record.exposure = exposure;
  record.seed = seed;
  record.noise = noise;
  for (int o = 0; o < 4; ++o) {
    const double mean = exposure * probs[o] + background;
    if (mean > 0.0) {
      std::poisson_distribution<std::int64_t> poisson(mean);
      record.counts[o] = poisson(rng);
    }
  }
  return record;
}

CountRecord emulate_counts(double beta, double hwp_alpha, double exposure,
                           const NoiseConfig& noise, const StreamKey& key) {
  noise.validate();
  double alpha = hwp_alpha;
  if (noise.misalignment_enabled && noise.misalignment_sigma > 0.0) {
    StreamKey jitter_key = key;
    jitter_key.purpose = 1;
    std::mt19937_64 rng = make_stream(jitter_key);
    std::normal_distribution<double> gauss(0.0, noise.misalignment_sigma);
    alpha += gauss(rng);
  }
  const SourceState source = SourceState::from_beta(beta);
  const auto probs = joint_probabilities(source, hwp_jones(alpha));
  StreamKey count_key = key;
  count_key.purpose = 0;
  return sample_counts(probs, exposure, noise, derive_seed(count_key));
}

namespace {

struct QubitStats {
  std::array<double, 3> probs{};  // C = -1, 0, +1
  double mean_c = 0.0;
  double ift = 0.0;
};

QubitStats stats_from_counts(const std::array<std::int64_t, 4>& counts,
                             double beta) {
  const double total = static_cast<double>(counts[0] + counts[1] + counts[2] +
                                           counts[3]);
  QubitStats s;
  s.probs[0] = counts[2] / total;                // (k=1, j=0) -> C = -1
  s.probs[1] = (counts[0] + counts[3]) / total;  // (0,0) + (1,1) -> C = 0
  s.probs[2] = counts[1] / total;                // (k=0, j=1) -> C = +1
  s.mean_c = s.probs[2] - s.probs[0];
  s.ift = s.probs[1] + s.probs[2] * std::exp(-beta) + s.probs[0] * std::exp(beta);
  return s;
}

}  // namespace

TPMDistribution estimate_distribution(const CountRecord& record,
                                      double beta_nominal) {
  if (record.total() <= 0)
    throw EmptyRecord("estimate_distribution: record holds no counts");
  const QubitStats s = stats_from_counts(record.counts, beta_nominal);
  TPMDistribution dist;
  dist.beta = beta_nominal;
  dist.support = {-1.0, 0.0, 1.0};
  dist.probs = {s.probs[0], s.probs[1], s.probs[2]};
  return dist;
}

BootstrapErrors bootstrap_errorbars(const CountRecord& record,
                                    double beta_nominal, int resamples,
                                    std::uint64_t seed) {
  if (record.total() <= 0)
    throw EmptyRecord("bootstrap_errorbars: record holds no counts");
  if (resamples < 100)
    throw InvalidResamples("bootstrap_errorbars: need >= 100 resamples, got " +
                           std::to_string(resamples));
  std::mt19937_64 rng(seed);
  std::vector<QubitStats> draws;
  draws.reserve(resamples);
  for (int r = 0; r < resamples; ++r) {
    std::array<std::int64_t, 4> synth{};
    for (int o = 0; o < 4; ++o) {
      if (record.counts[o] > 0) {
        std::poisson_distribution<std::int64_t> poisson(
            static_cast<double>(record.counts[o]));
        synth[o] = poisson(rng);
      }
    }
    if (synth[0] + synth[1] + synth[2] + synth[3] == 0) {
      --r;  // empty resample carries no statistic; redraw
      continue;
    }
    draws.push_back(stats_from_counts(synth, beta_nominal));
  }

  const auto stddev = [&](auto&& get) {
    double mean = 0.0;
    for (const auto& d : draws) mean += get(d);
    mean /= draws.size();
    double var = 0.0;
    for (const auto& d : draws) {
      const double delta = get(d) - mean;
      var += delta * delta;
    }
    return std::sqrt(var / (draws.size() - 1));
  };

  BootstrapErrors errors;
  for (int c = 0; c < 3; ++c)
    errors.prob_stderr[c] =
        stddev([c](const QubitStats& d) { return d.probs[c]; });
  errors.mean_c_stderr = stddev([](const QubitStats& d) { return d.mean_c; });
  errors.ift_stderr = stddev([](const QubitStats& d) { return d.ift; });
  return errors;
}

DistributionEstimate estimate_with_errors(const CountRecord& record,
                                          double beta_nominal, int resamples,
                                          std::uint64_t seed) {
  return {estimate_distribution(record, beta_nominal),
          bootstrap_errorbars(record, beta_nominal, resamples, seed)};
}

double ift_estimate(const TPMDistribution& dist) {
  return ift_value(dist);
}

std::vector<IftPoint> ift_experiment(const std::vector<double>& beta_grid,
                                     double theta, double exposure,
                                     const NoiseConfig& noise,
                                     std::uint64_t seed, int resamples) {
  std::vector<IftPoint> points;
  points.reserve(beta_grid.size());
  for (std::size_t i = 0; i < beta_grid.size(); ++i) {
    const double beta = beta_grid[i];
    StreamKey key{seed, i, 0, 0};
    const CountRecord record =
        emulate_counts(beta, theta / 4.0, exposure, noise, key);
    const TPMDistribution est = estimate_distribution(record, beta);
    StreamKey boot_key = key;
    boot_key.purpose = 2;
    const BootstrapErrors errors =
        bootstrap_errorbars(record, beta, resamples, derive_seed(boot_key));
    points.push_back({beta, ift_estimate(est), errors.ift_stderr});
  }
  return points;
}

double backward_hwp_alpha(double alpha) {
  return alpha + std::numbers::pi / 2.0;
}

}  // namespace coheft
