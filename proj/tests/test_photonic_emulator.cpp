#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "coheft/errors.hpp"
#include "coheft/photonic.hpp"
#include "coheft/qubit.hpp"
#include "coheft/tpm.hpp"

using namespace coheft;

namespace {

constexpr double kPi = std::numbers::pi;
const double kTheta = 86.6 * kPi / 180.0;

Hamiltonian qubit_h() {
  return Hamiltonian::from_energies(Eigen::Vector2d(0.0, 1.0));
}

// Exact three-point distribution a record estimates, in (C=-1,0,+1) order.
std::array<double, 3> exact_probs(double beta, double theta) {
  const double p0 = 1.0 / (1.0 + std::exp(-beta));
  const double s2 = std::pow(std::sin(theta / 2.0), 2);
  return {(1.0 - p0) * s2, 1.0 - s2, p0 * s2};
}

}  // namespace

TEST_CASE("source state reduces to the thermal signal state") {
  for (double beta : {0.0, 0.5, 2.0, 10.0, 50.0}) {
    const SourceState src = SourceState::from_beta(beta);
    CHECK(std::abs(src.amplitudes().squaredNorm() - 1.0) <= 1e-12);
    const DensityMatrix reduced = src.reduced_signal();
    const DensityMatrix thermal = thermal_state(qubit_h(), beta);
    CHECK(max_abs(reduced.matrix() - thermal.matrix()) <= 1e-12);
  }
}

TEST_CASE("source beta round trip") {
  const SourceState src = SourceState::from_weights(0.75, 0.25);
  CHECK(src.beta() == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(SourceState::from_beta(-1.0), InvalidBeta);
  CHECK_THROWS_AS(SourceState::from_weights(0.7, 0.7), InvalidStateMatrix);
}

TEST_CASE("identity process leaves perfect correlations") {
  const SourceState src = SourceState::from_beta(std::log(3.0));
  const auto p = joint_probabilities(
      src, UnitaryOperator(ComplexMatrix::Identity(2, 2)));
  CHECK(p[0] == doctest::Approx(0.75).epsilon(1e-14));  // (0,0)
  CHECK(p[1] == doctest::Approx(0.0));                  // (0,1)
  CHECK(p[2] == doctest::Approx(0.0));                  // (1,0)
  CHECK(p[3] == doctest::Approx(0.25).epsilon(1e-14));  // (1,1)
}

TEST_CASE("rotation process populates the C = +1 channel as p0 sin^2") {
  const double beta = 1.2, theta = 1.0;
  const SourceState src = SourceState::from_beta(beta);
  const auto p = joint_probabilities(src, rotation_unitary(theta, 0.0));
  const double p0 = 1.0 / (1.0 + std::exp(-beta));
  CHECK(p[1] ==
        doctest::Approx(p0 * std::pow(std::sin(theta / 2.0), 2)).epsilon(1e-14));
  CHECK(std::abs(p[0] + p[1] + p[2] + p[3] - 1.0) <= 1e-14);
}

TEST_CASE("emulator C-statistics equal the TPM engine exactly") {
  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> ubeta(0.0, 4.0);
  std::uniform_real_distribution<double> utheta(0.0, kPi);
  for (int rep = 0; rep < 20; ++rep) {
    const double beta = ubeta(rng);
    const double theta = utheta(rng);
    const UnitaryOperator u = rotation_unitary(theta, 0.0);
    const auto p = joint_probabilities(SourceState::from_beta(beta), u);
    const auto dist = tpm_distribution(qubit_h(), beta, u);
    // Map (k, j) -> C = j - k and compare channel by channel.
    const double channel[3] = {p[2], p[0] + p[3], p[1]};
    for (std::size_t i = 0; i < dist.size(); ++i) {
      const int idx = static_cast<int>(std::lround(dist.support[i])) + 1;
      CHECK(std::abs(channel[idx] - dist.probs[i]) <= 1e-12);
    }
  }
}

TEST_CASE("measurement setting validation and single-outcome probability") {
  const UnitaryOperator u = rotation_unitary(0.9, 0.0);
  const SourceState src = SourceState::from_beta(1.0);
  const MeasurementSetting setting(0, 1, u);
  CHECK(joint_probability(src, setting) ==
        doctest::Approx(joint_probabilities(src, u)[1]).epsilon(1e-14));
  CHECK_THROWS_AS(MeasurementSetting(2, 0, u), ConfigParse);
  CHECK_THROWS_AS(MeasurementSetting(0, -1, u), ConfigParse);
}

TEST_CASE("sample_counts is deterministic and validates exposure") {
  const std::array<double, 4> p{0.4, 0.3, 0.2, 0.1};
  const NoiseConfig noise;
  const CountRecord a = sample_counts(p, 1e4, noise, 77);
  const CountRecord b = sample_counts(p, 1e4, noise, 77);
  CHECK(a.counts == b.counts);
  const CountRecord c = sample_counts(p, 1e4, noise, 78);
  CHECK(a.counts != c.counts);
  CHECK_THROWS_AS(sample_counts(p, 0.0, noise, 1), InvalidExposure);
  CHECK_THROWS_AS(sample_counts(p, -5.0, noise, 1), InvalidExposure);
}

TEST_CASE("degenerate probabilities concentrate all counts in one outcome") {
  const std::array<double, 4> p{1.0, 0.0, 0.0, 0.0};
  const CountRecord rec = sample_counts(p, 5000.0, NoiseConfig{}, 3);
  CHECK(rec.counts[0] > 0);
  CHECK(rec.counts[1] == 0);
  CHECK(rec.counts[2] == 0);
  CHECK(rec.counts[3] == 0);
}

TEST_CASE("counts concentrate around N p at large exposure") {
  const auto p = joint_probabilities(SourceState::from_beta(1.0),
                                     rotation_unitary(kTheta, 0.0));
  const double n = 1e6;
  const CountRecord rec = sample_counts(p, n, NoiseConfig{}, 99);
  for (int o = 0; o < 4; ++o) {
    const double mean = n * p[o];
    CHECK(std::abs(rec.counts[o] - mean) <= 5.0 * std::sqrt(mean) + 1.0);
  }
}

TEST_CASE("noise config validation") {
  NoiseConfig bad;
  bad.misalignment_sigma = -0.1;
  CHECK_THROWS_AS(bad.validate(), InvalidNoiseConfig);
  bad = NoiseConfig{};
  bad.background = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidNoiseConfig);
}

TEST_CASE("estimator recovers exact-proportion counts exactly") {
  // beta = ln 3, theta = pi/2: joint probabilities (.375, .375, .125, .125).
  CountRecord rec;
  rec.counts = {375, 375, 125, 125};
  rec.exposure = 1000.0;
  const auto dist = estimate_distribution(rec, std::log(3.0));
  CHECK(dist.probs[0] == doctest::Approx(0.125));
  CHECK(dist.probs[1] == doctest::Approx(0.5));
  CHECK(dist.probs[2] == doctest::Approx(0.375));
  CHECK_THROWS_AS(estimate_distribution(CountRecord{}, 1.0), EmptyRecord);
}

TEST_CASE("P(0) estimate lands within three standard errors") {
  const double beta = 1.0;
  const CountRecord rec =
      emulate_counts(beta, kTheta / 4.0, 1e4, NoiseConfig{}, StreamKey{11, 0, 0, 0});
  const auto est = estimate_with_errors(rec, beta, 1000, 5);
  const auto exact = exact_probs(beta, kTheta);
  CHECK(std::abs(est.dist.probs[1] - exact[1]) <=
        3.0 * est.errors.prob_stderr[1]);
  CHECK(exact[1] == doctest::Approx(0.5296531867879809).epsilon(1e-12));
}

TEST_CASE("bootstrap of a degenerate record has zero spread") {
  CountRecord rec;
  rec.counts = {5000, 0, 0, 0};
  rec.exposure = 5000.0;
  const BootstrapErrors errors = bootstrap_errorbars(rec, 1.0, 500, 21);
  CHECK(errors.prob_stderr[0] == 0.0);
  CHECK(errors.prob_stderr[1] == 0.0);
  CHECK(errors.prob_stderr[2] == 0.0);
  CHECK(errors.ift_stderr == 0.0);
  CHECK_THROWS_AS(bootstrap_errorbars(rec, 1.0, 50, 21), InvalidResamples);
}

TEST_CASE("IFT standard error scales as 1/sqrt(N)") {
  const double beta = 1.0;
  std::vector<double> log_n, log_se;
  for (double n : {1e3, 1e4, 1e5}) {
    const CountRecord rec = emulate_counts(beta, kTheta / 4.0, n, NoiseConfig{},
                                           StreamKey{1234, 0, 0, 0});
    const BootstrapErrors errors = bootstrap_errorbars(rec, beta, 1000, 6);
    log_n.push_back(std::log(n));
    log_se.push_back(std::log(errors.ift_stderr));
  }
  // Least-squares slope over the three points.
  const double mean_x = (log_n[0] + log_n[1] + log_n[2]) / 3.0;
  const double mean_y = (log_se[0] + log_se[1] + log_se[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (log_n[i] - mean_x) * (log_se[i] - mean_y);
    sxx += (log_n[i] - mean_x) * (log_n[i] - mean_x);
  }
  const double slope = sxy / sxx;
  CHECK(slope >= -0.6);
  CHECK(slope <= -0.4);
}

TEST_CASE("large-beta IFT spread is dominated by the e^beta channel") {
  const double beta = 3.0;
  const CountRecord rec = emulate_counts(beta, kTheta / 4.0, 1e4, NoiseConfig{},
                                         StreamKey{777, 0, 0, 0});
  const BootstrapErrors errors = bootstrap_errorbars(rec, beta, 2000, 8);
  // Delta method: Var = sum_o c_o ((w_o - ift)/T)^2 with Poisson pieces.
  const double t = static_cast<double>(rec.total());
  const double w[4] = {1.0, std::exp(-beta), std::exp(beta), 1.0};
  const auto est = estimate_distribution(rec, beta);
  const double ift = ift_estimate(est);
  double var = 0.0, minus_one_term = 0.0;
  for (int o = 0; o < 4; ++o) {
    const double piece = rec.counts[o] * std::pow((w[o] - ift) / t, 2);
    var += piece;
    if (o == 2) minus_one_term = piece;
  }
  const double delta_se = std::sqrt(var);
  CHECK(std::abs(errors.ift_stderr - delta_se) / delta_se <= 0.25);
  CHECK(minus_one_term / var >= 0.85);
}

TEST_CASE("noise-off IFT sweep stays within 0.02 of unity at N = 1e6") {
  std::vector<double> betas{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  const auto points =
      ift_experiment(betas, kTheta, 1e6, NoiseConfig{}, 4242, 400);
  REQUIRE(points.size() == betas.size());
  for (const auto& pt : points) {
    CHECK(std::abs(pt.estimate - 1.0) <= 0.02);
    CHECK(pt.stderror > 0.0);
  }
}

TEST_CASE("IFT at beta = 0 is exactly the unit total") {
  const auto points =
      ift_experiment({0.0}, kTheta, 1e4, NoiseConfig{}, 31, 200);
  CHECK(std::abs(points[0].estimate - 1.0) <= 1e-15);
}

TEST_CASE("flat background biases the IFT upward like b e^beta / N") {
  const double beta = 3.5, n = 1e4, b = 20.0;
  NoiseConfig noisy;
  noisy.background_enabled = true;
  noisy.background = b;
  double clean_sum = 0.0, noisy_sum = 0.0;
  const int reps = 60;
  for (int r = 0; r < reps; ++r) {
    const CountRecord clean = emulate_counts(beta, kTheta / 4.0, n, NoiseConfig{},
                                             StreamKey{90, 0, (unsigned)r, 0});
    const CountRecord dirty = emulate_counts(beta, kTheta / 4.0, n, noisy,
                                             StreamKey{91, 0, (unsigned)r, 0});
    clean_sum += ift_estimate(estimate_distribution(clean, beta));
    noisy_sum += ift_estimate(estimate_distribution(dirty, beta));
  }
  const double observed_bias = (noisy_sum - clean_sum) / reps;
  const double predicted = b * std::exp(beta) / n;
  CHECK(observed_bias >= 0.5 * predicted);
  CHECK(observed_bias <= 1.5 * predicted);
}

TEST_CASE("background bias grows with beta") {
  NoiseConfig noisy;
  noisy.background_enabled = true;
  noisy.background = 10.0;
  const auto bias_at = [&](double beta) {
    double acc = 0.0;
    const int reps = 40;
    for (int r = 0; r < reps; ++r) {
      const CountRecord rec = emulate_counts(beta, kTheta / 4.0, 1e4, noisy,
                                             StreamKey{55, 0, (unsigned)r, 0});
      acc += ift_estimate(estimate_distribution(rec, beta));
    }
    return acc / reps - 1.0;
  };
  CHECK(bias_at(3.5) > 2.0 * bias_at(2.0));
}

TEST_CASE("misalignment jitter perturbs counts deterministically") {
  NoiseConfig jitter;
  jitter.misalignment_enabled = true;
  jitter.misalignment_sigma = 0.05;
  const StreamKey key{17, 3, 2, 0};
  const CountRecord a = emulate_counts(1.0, kTheta / 4.0, 1e5, jitter, key);
  const CountRecord b = emulate_counts(1.0, kTheta / 4.0, 1e5, jitter, key);
  CHECK(a.counts == b.counts);
  const CountRecord plain = emulate_counts(1.0, kTheta / 4.0, 1e5, NoiseConfig{}, key);
  CHECK(a.counts != plain.counts);
}

TEST_CASE("backward protocol: HWP axis + 90 degrees matches the engine") {
  const Hamiltonian h = qubit_h();
  for (double beta : {0.0, 0.7, 1.5, 3.0}) {
    for (double theta : {0.4, 1.2, 2.7}) {
      const double alpha = theta / 4.0;
      const auto fwd_probs = joint_probabilities(SourceState::from_beta(beta),
                                                 hwp_jones(alpha));
      const auto bwd_probs = joint_probabilities(
          SourceState::from_beta(beta), hwp_jones(backward_hwp_alpha(alpha)));
      const auto engine_bwd = backward_distribution(h, beta, hwp_jones(alpha));
      const double channel[3] = {bwd_probs[2], bwd_probs[0] + bwd_probs[3],
                                 bwd_probs[1]};
      for (std::size_t i = 0; i < engine_bwd.size(); ++i) {
        const int idx = static_cast<int>(std::lround(engine_bwd.support[i])) + 1;
        CHECK(std::abs(channel[idx] - engine_bwd.probs[i]) <= 1e-12);
      }
      // Sanity: the forward channels differ only by the +-1 swap.
      CHECK(std::abs(fwd_probs[1] - bwd_probs[1]) <= 1e-12);
    }
  }
}

TEST_CASE("statistical soundness: 3 sigma covers 97% of cases") {
  const double beta = 1.0;
  const auto exact = exact_probs(beta, kTheta);
  int covered = 0, total = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const CountRecord rec = emulate_counts(beta, kTheta / 4.0, 1e4, NoiseConfig{},
                                           StreamKey{2025, 0, (unsigned)rep, 0});
    const auto est = estimate_with_errors(
        rec, beta, 200, derive_seed(StreamKey{2025, 0, (unsigned)rep, 2}));
    for (int c = 0; c < 3; ++c) {
      ++total;
      if (std::abs(est.dist.probs[c] - exact[c]) <=
          3.0 * est.errors.prob_stderr[c])
        ++covered;
    }
  }
  CHECK(static_cast<double>(covered) / total >= 0.97);
}

TEST_CASE("1 sigma bootstrap intervals cover at the nominal rate") {
  const double beta = 1.0;
  const auto exact = exact_probs(beta, kTheta);
  int covered = 0, total = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const CountRecord rec = emulate_counts(beta, kTheta / 4.0, 1e4, NoiseConfig{},
                                           StreamKey{630, 0, (unsigned)rep, 0});
    const auto est = estimate_with_errors(
        rec, beta, 200, derive_seed(StreamKey{630, 0, (unsigned)rep, 2}));
    for (int c = 0; c < 3; ++c) {
      ++total;
      if (std::abs(est.dist.probs[c] - exact[c]) <= est.errors.prob_stderr[c])
        ++covered;
    }
  }
  const double coverage = static_cast<double>(covered) / total;
  CHECK(coverage >= 0.58);
  CHECK(coverage <= 0.77);
}
