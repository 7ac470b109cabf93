#include "coheft/energy_decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coheft/csv.hpp"
#include "coheft/errors.hpp"

namespace coheft {

Eigen::MatrixXd overlap_weights(const Hamiltonian& h, const DensityMatrix& rho) {
  if (h.dim() != rho.dim())
    throw DimensionMismatch("overlap_weights: H is d = " +
                            std::to_string(h.dim()) + " but rho is d = " +
                            std::to_string(rho.dim()));
  const ComplexMatrix overlaps = h.eigenvectors().adjoint() * rho.eigenvectors();
  return overlaps.cwiseAbs2();
}

double EnergyLedger::max_residual() const {
  double worst = 0.0;
  for (double r : residual) worst = std::max(worst, r);
  return worst;
}

namespace {

struct TrackedSpectra {
  std::vector<Eigen::VectorXd> values;
  std::vector<ComplexMatrix> vectors;
};

// Relabels eigenvalue branches so label b refers to the same continuously
// evolving branch at every grid point. Matching is greedy per branch on
// squared eigenvector overlaps and must form a permutation.
TrackedSpectra track_branches(const std::vector<Eigen::VectorXd>& values,
                              const std::vector<ComplexMatrix>& vectors,
                              const char* what) {
  TrackedSpectra tracked;
  tracked.values.push_back(values[0]);
  tracked.vectors.push_back(vectors[0]);
  const int d = static_cast<int>(values[0].size());
  for (std::size_t i = 1; i < values.size(); ++i) {
    const ComplexMatrix& prev = tracked.vectors.back();
    const Eigen::MatrixXd overlap2 =
        (prev.adjoint() * vectors[i]).cwiseAbs2();
    std::vector<int> match(d, -1);
    std::vector<bool> taken(d, false);
    for (int b = 0; b < d; ++b) {
      int best = 0;
      for (int j = 1; j < d; ++j)
        if (overlap2(b, j) > overlap2(b, best)) best = j;
      if (overlap2(b, best) < 0.5)
        throw EigenTrackingAmbiguous(
            std::string(what) + ": branch " + std::to_string(b) +
            " has matched overlap^2 = " + std::to_string(overlap2(b, best)) +
            " < 0.5 between grid points " + std::to_string(i - 1) + " and " +
            std::to_string(i) + "; refine the time grid");
      if (taken[best])
        throw EigenTrackingAmbiguous(
            std::string(what) + ": branches collide on column " +
            std::to_string(best) + " between grid points " +
            std::to_string(i - 1) + " and " + std::to_string(i) +
            "; refine the time grid");
      taken[best] = true;
      match[b] = best;
    }
    Eigen::VectorXd v(d);
    ComplexMatrix w(vectors[i].rows(), d);
    for (int b = 0; b < d; ++b) {
      v(b) = values[i](match[b]);
      w.col(b) = vectors[i].col(match[b]);
    }
    tracked.values.push_back(std::move(v));
    tracked.vectors.push_back(std::move(w));
  }
  return tracked;
}

// d/dt of a sampled scalar series on a (possibly nonuniform) grid: centered
// three-point stencils inside, one-sided second order at the ends, plain
// difference when only two points exist.
std::vector<double> differentiate(const std::vector<double>& t,
                                  const std::vector<double>& f) {
  const std::size_t n = t.size();
  std::vector<double> df(n);
  if (n == 2) {
    const double slope = (f[1] - f[0]) / (t[1] - t[0]);
    df[0] = df[1] = slope;
    return df;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      const double h1 = t[1] - t[0], h2 = t[2] - t[1];
      df[0] = -f[0] * (2.0 * h1 + h2) / (h1 * (h1 + h2)) +
              f[1] * (h1 + h2) / (h1 * h2) - f[2] * h1 / (h2 * (h1 + h2));
    } else if (i == n - 1) {
      const double h1 = t[n - 2] - t[n - 3], h2 = t[n - 1] - t[n - 2];
      df[i] = f[n - 3] * h2 / (h1 * (h1 + h2)) -
              f[n - 2] * (h1 + h2) / (h1 * h2) +
              f[n - 1] * (h1 + 2.0 * h2) / (h2 * (h1 + h2));
    } else {
      const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
      df[i] = -f[i - 1] * h2 / (h1 * (h1 + h2)) +
              f[i] * (h2 - h1) / (h1 * h2) +
              f[i + 1] * h1 / (h2 * (h1 + h2));
    }
  }
  return df;
}

}  // namespace

namespace detail {

EnergyLedger decompose_spectral(
    const std::vector<double>& times,
    const std::vector<Eigen::VectorXd>& energies,
    const std::vector<ComplexMatrix>& energy_vectors,
    const std::vector<Eigen::VectorXd>& populations,
    const std::vector<ComplexMatrix>& population_vectors) {
  const std::size_t m = times.size();
  const int d = static_cast<int>(energies[0].size());

  const TrackedSpectra h_tracked =
      track_branches(energies, energy_vectors, "energy spectrum");
  const TrackedSpectra rho_tracked =
      track_branches(populations, population_vectors, "state spectrum");

  // Per-point overlap weights w(n, k) = |<n|k>|^2 on tracked labels.
  std::vector<Eigen::MatrixXd> weights(m);
  for (std::size_t i = 0; i < m; ++i)
    weights[i] =
        (h_tracked.vectors[i].adjoint() * rho_tracked.vectors[i]).cwiseAbs2();

  // Branch-wise time derivatives.
  std::vector<std::vector<double>> de(d), dp(d);
  for (int n = 0; n < d; ++n) {
    std::vector<double> series(m);
    for (std::size_t i = 0; i < m; ++i) series[i] = h_tracked.values[i](n);
    de[n] = differentiate(times, series);
  }
  for (int k = 0; k < d; ++k) {
    std::vector<double> series(m);
    for (std::size_t i = 0; i < m; ++i) series[i] = rho_tracked.values[i](k);
    dp[k] = differentiate(times, series);
  }
  std::vector<Eigen::MatrixXd> dw(m, Eigen::MatrixXd(d, d));
  for (int n = 0; n < d; ++n)
    for (int k = 0; k < d; ++k) {
      std::vector<double> series(m);
      for (std::size_t i = 0; i < m; ++i) series[i] = weights[i](n, k);
      const std::vector<double> deriv = differentiate(times, series);
      for (std::size_t i = 0; i < m; ++i) dw[i](n, k) = deriv[i];
    }

  // Integrands of the three first-law channels.
  std::vector<double> fw(m, 0.0), fq(m, 0.0), fc(m, 0.0);
  EnergyLedger ledger;
  ledger.times = times;
  ledger.internal.resize(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double u = 0.0;
    for (int n = 0; n < d; ++n)
      for (int k = 0; k < d; ++k) {
        const double e = h_tracked.values[i](n);
        const double p = rho_tracked.values[i](k);
        const double w = weights[i](n, k);
        fw[i] += p * w * de[n][i];
        fq[i] += e * w * dp[k][i];
        fc[i] += e * p * dw[i](n, k);
        u += e * p * w;
      }
    ledger.internal[i] = u;
  }

  ledger.work.assign(m, 0.0);
  ledger.heat.assign(m, 0.0);
  ledger.coherent.assign(m, 0.0);
  ledger.residual.assign(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) {
    const double half_dt = 0.5 * (times[i] - times[i - 1]);
    ledger.work[i] = ledger.work[i - 1] + half_dt * (fw[i - 1] + fw[i]);
    ledger.heat[i] = ledger.heat[i - 1] + half_dt * (fq[i - 1] + fq[i]);
    ledger.coherent[i] =
        ledger.coherent[i - 1] + half_dt * (fc[i - 1] + fc[i]);
  }
  for (std::size_t i = 0; i < m; ++i)
    ledger.residual[i] =
        std::abs(ledger.internal[i] - ledger.internal[0] - ledger.work[i] -
                 ledger.heat[i] - ledger.coherent[i]);
  return ledger;
}

}  // namespace detail

EnergyLedger decompose(const Trajectory& traj) {
  const std::size_t m = traj.points();
  std::vector<Eigen::VectorXd> energies(m), populations(m);
  std::vector<ComplexMatrix> energy_vectors(m), population_vectors(m);
  for (std::size_t i = 0; i < m; ++i) {
    energies[i] = traj.hamiltonians()[i].energies();
    energy_vectors[i] = traj.hamiltonians()[i].eigenvectors();
    populations[i] = traj.states()[i].eigenvalues();
    population_vectors[i] = traj.states()[i].eigenvectors();
  }
  return detail::decompose_spectral(traj.times(), energies, energy_vectors,
                                    populations, population_vectors);
}

double closure_report(const EnergyLedger& ledger) {
  return ledger.max_residual();
}

void write_ledger_csv(const EnergyLedger& ledger, std::ostream& out) {
  CsvWriter csv(out);
  csv.header({"time", "U", "W", "Q", "C", "residual"});
  for (std::size_t i = 0; i < ledger.times.size(); ++i)
    csv.row({format_double(ledger.times[i]), format_double(ledger.internal[i]),
             format_double(ledger.work[i]), format_double(ledger.heat[i]),
             format_double(ledger.coherent[i]),
             format_double(ledger.residual[i])});
}

}  // namespace coheft
