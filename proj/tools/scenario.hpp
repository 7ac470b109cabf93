#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coheft/photonic.hpp"

namespace coheft::cli {

enum class Mode {
  kTpmExact,
  kTpmSample,
  kIftSweep,
  kDftSweep,
  kArrowSweep,
  kDecompose,
};

std::string mode_name(Mode mode);

/// One run = one config file. Only --seed and --out may override it.
/// Angles in the file are degrees; everything internal is radians.
struct ScenarioConfig {
  Mode mode;
  std::string scenario_id;
  std::vector<double> beta_grid;
  std::vector<double> theta_grid;  // radians; single entry outside arrow mode
  double phi = 0.0;                // radians
  std::optional<double> hwp_alpha;  // radians; overrides theta/4 when present
  std::optional<std::string> hamiltonian_file;
  std::optional<std::string> unitary_file;
  std::optional<std::string> trajectory_file;
  double exposure = 0.0;  // N; required by sampled modes
  int resamples = 1000;
  NoiseConfig noise;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  bool emit_json = false;

  /// HWP fast-axis angle realizing the configured process.
  double alpha() const;
  bool sampled() const;
};

/// Parses and validates a config document for the subcommand's mode.
/// `base_dir` anchors relative file references.
ScenarioConfig parse_config(const std::string& text, Mode mode,
                            const std::string& base_dir);

struct RunResult {
  std::vector<std::string> written_files;
  bool coupled_energy_shells = false;
};

/// Executes the scenario and writes its CSV (and optional JSON) outputs.
/// `config_hash` is stamped into every file.
RunResult run_scenario(const ScenarioConfig& config,
                       const std::string& config_hash);

/// FNV-1a 64-bit of the raw config bytes, in hex.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace coheft::cli
