#pragma once

#include <string>
#include <vector>

#include "coheft/operators.hpp"

namespace coheft {

/// Discretized quantum path: one (H, rho) pair per time grid point. The
/// grid is data, not a generator; callers discretize their own dynamics.
class Trajectory {
public:
  Trajectory(std::vector<double> times, std::vector<Hamiltonian> hamiltonians,
             std::vector<DensityMatrix> states);

  int dim() const { return hamiltonians_.front().dim(); }
  std::size_t points() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Hamiltonian>& hamiltonians() const { return hamiltonians_; }
  const std::vector<DensityMatrix>& states() const { return states_; }

private:
  std::vector<double> times_;
  std::vector<Hamiltonian> hamiltonians_;
  std::vector<DensityMatrix> states_;
};

/// File form: {"dim": d, "m": M, "steps": [{"time": t, "hamiltonian": ...,
/// "state": ...}, ...]} with matrices in the standard serialization.
Trajectory load_trajectory(const std::string& path);
void save_trajectory(const Trajectory& traj, const std::string& path);

}  // namespace coheft
