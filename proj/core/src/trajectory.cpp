#include "coheft/trajectory.hpp"

#include <nlohmann/json.hpp>

#include "coheft/errors.hpp"
#include "coheft/serialization.hpp"

namespace coheft {

using nlohmann::json;

Trajectory::Trajectory(std::vector<double> times,
                       std::vector<Hamiltonian> hamiltonians,
                       std::vector<DensityMatrix> states)
    : times_(std::move(times)),
      hamiltonians_(std::move(hamiltonians)),
      states_(std::move(states)) {
  if (times_.size() < 2)
    throw InvalidTrajectory("need at least 2 grid points, got " +
                            std::to_string(times_.size()));
  if (hamiltonians_.size() != times_.size() || states_.size() != times_.size())
    throw InvalidTrajectory("grid sizes disagree: " +
                            std::to_string(times_.size()) + " times, " +
                            std::to_string(hamiltonians_.size()) +
                            " hamiltonians, " + std::to_string(states_.size()) +
                            " states");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1]))
      throw InvalidTrajectory("times must be strictly increasing at index " +
                              std::to_string(i));
  const int d = hamiltonians_.front().dim();
  for (std::size_t i = 0; i < times_.size(); ++i)
    if (hamiltonians_[i].dim() != d || states_[i].dim() != d)
      throw DimensionMismatch("trajectory dimension changes at index " +
                              std::to_string(i));
}

Trajectory load_trajectory(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigParse(std::string("load_trajectory: ") + e.what());
  }
  for (const char* key : {"dim", "m", "steps"})
    if (!doc.contains(key))
      throw MissingField(std::string("load_trajectory: missing \"") + key +
                         "\"");
  const auto& steps = doc["steps"];
  if (!steps.is_array() || steps.size() != doc["m"].get<std::size_t>())
    throw ConfigParse("load_trajectory: \"m\" does not match the step count");
  std::vector<double> times;
  std::vector<Hamiltonian> hamiltonians;
  std::vector<DensityMatrix> states;
  for (const auto& step : steps) {
    for (const char* key : {"time", "hamiltonian", "state"})
      if (!step.contains(key))
        throw MissingField(std::string("load_trajectory: step missing \"") +
                           key + "\"");
    times.push_back(step["time"].get<double>());
    hamiltonians.emplace_back(matrix_from_json(step["hamiltonian"].dump()));
    states.emplace_back(matrix_from_json(step["state"].dump()));
  }
  return Trajectory(std::move(times), std::move(hamiltonians),
                    std::move(states));
}

void save_trajectory(const Trajectory& traj, const std::string& path) {
  json steps = json::array();
  for (std::size_t i = 0; i < traj.points(); ++i) {
    json step;
    step["time"] = traj.times()[i];
    step["hamiltonian"] = json::parse(matrix_to_json(traj.hamiltonians()[i].matrix()));
    step["state"] = json::parse(matrix_to_json(traj.states()[i].matrix()));
    steps.push_back(std::move(step));
  }
  json doc;
  doc["dim"] = traj.dim();
  doc["m"] = traj.points();
  doc["steps"] = std::move(steps);
  write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace coheft
