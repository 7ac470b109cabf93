#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <thread>

#include <nlohmann/json.hpp>

#include "coheft/arrow.hpp"
#include "coheft/csv.hpp"
#include "coheft/energy_decomposition.hpp"
#include "coheft/errors.hpp"
#include "coheft/qubit.hpp"
#include "coheft/serialization.hpp"
#include "coheft/version.hpp"

namespace coheft::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }

const std::vector<std::pair<Mode, const char*>> kModeNames = {
    {Mode::kTpmExact, "tpm-exact"},   {Mode::kTpmSample, "tpm-sample"},
    {Mode::kIftSweep, "ift-sweep"},   {Mode::kDftSweep, "dft-sweep"},
    {Mode::kArrowSweep, "arrow-sweep"}, {Mode::kDecompose, "decompose"},
};

// number | {"values": [...]} | {"start": a, "stop": b, "step": s}
std::vector<double> parse_grid(const json& j, const std::string& name) {
  std::vector<double> grid;
  if (j.is_number()) {
    grid.push_back(j.get<double>());
  } else if (j.is_object() && j.contains("values")) {
    for (const auto& v : j["values"]) grid.push_back(v.get<double>());
  } else if (j.is_object() && j.contains("start")) {
    for (const char* key : {"stop", "step"})
      if (!j.contains(key))
        throw MissingField(name + ": range form needs start/stop/step");
    const double start = j["start"].get<double>();
    const double stop = j["stop"].get<double>();
    const double step = j["step"].get<double>();
    if (!(step > 0.0))
      throw ConfigParse(name + ": step must be positive");
    if (stop < start)
      throw ConfigParse(name + ": stop is below start");
    const auto count =
        static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) grid.push_back(start + i * step);
  } else {
    throw ConfigParse(name +
                      ": expected a number, {\"values\": [...]}, or "
                      "{\"start\",\"stop\",\"step\"}");
  }
  if (grid.empty()) throw ConfigParse(name + ": grid is empty");
  return grid;
}

std::string resolve_path(const std::string& base_dir, const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_dir) / p).string();
}

void require_file_exists(const std::string& path, const std::string& field) {
  if (!fs::exists(path))
    throw ConfigParse(field + ": referenced file does not exist: " + path);
}

// Chunked index parallelism; results land in pre-sized slots so assembly
// order never depends on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct OutputTable {
  std::string name;  // basename without extension
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  std::vector<std::pair<std::string, std::string>> trailing_comments;
};

std::string cell_to_csv(const json& cell) {
  if (cell.is_string()) return cell.get<std::string>();
  if (cell.is_null()) return "nan";
  return format_double(cell.get<double>());
}

void write_table(const OutputTable& table, const ScenarioConfig& config,
                 const std::string& config_hash, RunResult& result) {
  fs::create_directories(config.out_dir);
  const std::string csv_path =
      (fs::path(config.out_dir) / (table.name + ".csv")).string();
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw IOFailure("cannot open for writing: " + csv_path);
    CsvWriter csv(out);
    csv.comment("tool_version", kVersion);
    csv.comment("config_hash", config_hash);
    csv.comment("scenario", config.scenario_id);
    if (config.sampled()) csv.comment("seed", std::to_string(config.seed));
    csv.header(table.columns);
    for (const auto& row : table.rows) {
      std::vector<std::string> cells;
      cells.reserve(row.size());
      for (const auto& cell : row) cells.push_back(cell_to_csv(cell));
      csv.row(cells);
    }
    for (const auto& [k, v] : table.trailing_comments) csv.comment(k, v);
    if (!out.good()) throw IOFailure("write failed: " + csv_path);
  }
  result.written_files.push_back(csv_path);

  if (config.emit_json) {
    json doc;
    doc["tool_version"] = kVersion;
    doc["config_hash"] = config_hash;
    doc["scenario"] = config.scenario_id;
    doc["columns"] = table.columns;
    doc["rows"] = table.rows;
    for (const auto& [k, v] : table.trailing_comments) doc[k] = v;
    const std::string json_path =
        (fs::path(config.out_dir) / (table.name + ".json")).string();
    write_text_file(json_path, doc.dump(2) + "\n");
    result.written_files.push_back(json_path);
  }
}

struct Process {
  Hamiltonian hamiltonian;
  UnitaryOperator unitary;
};

// Explicit operator files win; otherwise the qubit HWP/rotation process.
Process resolve_process(const ScenarioConfig& config) {
  if (config.hamiltonian_file || config.unitary_file) {
    if (!config.hamiltonian_file || !config.unitary_file)
      throw MissingField(
          "hamiltonian_file and unitary_file must be given together");
    Hamiltonian h(load_matrix(*config.hamiltonian_file));
    UnitaryOperator u(load_matrix(*config.unitary_file));
    if (h.dim() != u.dim())
      throw DimensionMismatch("hamiltonian_file and unitary_file disagree on d");
    return {std::move(h), std::move(u)};
  }
  Hamiltonian h = Hamiltonian::from_energies(Eigen::Vector2d(0.0, 1.0));
  if (config.hwp_alpha)
    return {std::move(h), hwp_jones(*config.hwp_alpha)};
  return {std::move(h), rotation_unitary(config.theta_grid.front(), config.phi)};
}

double exact_prob_at(const TPMDistribution& dist, double c) {
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (std::abs(dist.support[i] - c) < kDegeneracyTol) return dist.probs[i];
  return 0.0;
}

json opt_cell(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

RunResult run_tpm_exact(const ScenarioConfig& config,
                        const std::string& config_hash) {
  const Process process = resolve_process(config);
  const std::size_t n = config.beta_grid.size();
  std::vector<TPMDistribution> dists(n);
  std::vector<double> mean_exact(n);
  parallel_for(n, [&](std::size_t i) {
    const double beta = config.beta_grid[i];
    dists[i] = tpm_distribution(process.hamiltonian, beta, process.unitary);
    mean_exact[i] = mean_c_trace(thermal_state(process.hamiltonian, beta),
                                 process.unitary, process.hamiltonian);
  });

  OutputTable distribution;
  distribution.name = "distribution";
  distribution.columns = {"scenario_id", "beta", "C", "estimate", "stderr",
                          "exact"};
  OutputTable summary;
  summary.name = "summary";
  summary.columns = {"scenario_id",     "beta",
                     "ift_estimate",    "ift_stderr",
                     "ift_exact",       "mean_C_estimate",
                     "mean_C_stderr",   "mean_C_exact"};
  RunResult result;
  for (std::size_t i = 0; i < n; ++i) {
    const double beta = config.beta_grid[i];
    for (std::size_t k = 0; k < dists[i].size(); ++k)
      distribution.rows.push_back({config.scenario_id, beta,
                                   dists[i].support[k], dists[i].probs[k], 0.0,
                                   dists[i].probs[k]});
    summary.rows.push_back({config.scenario_id, beta, ift_value(dists[i]), 0.0,
                            1.0, mean_coherent_energy(dists[i]), 0.0,
                            mean_exact[i]});
    result.coupled_energy_shells |= dists[i].couples_energy_shells;
  }
  write_table(distribution, config, config_hash, result);
  write_table(summary, config, config_hash, result);
  return result;
}

RunResult run_sampled_sweep(const ScenarioConfig& config,
                            const std::string& config_hash) {
  const double alpha = config.alpha();
  const std::size_t n = config.beta_grid.size();
  const Hamiltonian h = Hamiltonian::from_energies(Eigen::Vector2d(0.0, 1.0));

  struct Point {
    TPMDistribution exact;
    DistributionEstimate estimate;
    double mean_exact;
  };
  std::vector<Point> points(n);
  parallel_for(n, [&](std::size_t i) {
    const double beta = config.beta_grid[i];
    const UnitaryOperator u = hwp_jones(alpha);
    const StreamKey key{config.seed, i, 0, 0};
    const CountRecord record =
        emulate_counts(beta, alpha, config.exposure, config.noise, key);
    StreamKey boot = key;
    boot.purpose = 2;
    points[i] = {tpm_distribution(h, beta, u),
                 estimate_with_errors(record, beta, config.resamples,
                                      derive_seed(boot)),
                 mean_c_trace(thermal_state(h, beta), u, h)};
  });

  OutputTable distribution;
  distribution.name = "distribution";
  distribution.columns = {"scenario_id", "beta", "C", "estimate", "stderr",
                          "exact"};
  OutputTable summary;
  summary.name = "summary";
  summary.columns = {"scenario_id",     "beta",
                     "ift_estimate",    "ift_stderr",
                     "ift_exact",       "mean_C_estimate",
                     "mean_C_stderr",   "mean_C_exact"};
  RunResult result;
  for (std::size_t i = 0; i < n; ++i) {
    const double beta = config.beta_grid[i];
    const auto& est = points[i].estimate;
    for (int k = 0; k < 3; ++k) {
      const double c = est.dist.support[k];
      distribution.rows.push_back({config.scenario_id, beta, c,
                                   est.dist.probs[k], est.errors.prob_stderr[k],
                                   exact_prob_at(points[i].exact, c)});
    }
    const double mean_est = mean_coherent_energy(est.dist);
    summary.rows.push_back({config.scenario_id, beta, ift_estimate(est.dist),
                            est.errors.ift_stderr, 1.0, mean_est,
                            est.errors.mean_c_stderr, points[i].mean_exact});
    result.coupled_energy_shells |= points[i].exact.couples_energy_shells;
  }
  write_table(distribution, config, config_hash, result);
  write_table(summary, config, config_hash, result);
  return result;
}

RunResult run_dft_sweep(const ScenarioConfig& config,
                        const std::string& config_hash) {
  const Process process = resolve_process(config);
  const std::size_t n = config.beta_grid.size();

  struct Row {
    double beta;
    DFTRow exact;
    std::optional<double> log_ratio_est;
    double log_ratio_stderr = 0.0;
  };
  std::vector<std::vector<Row>> per_point(n);
  std::vector<bool> coupled(n, false);

  parallel_for(n, [&](std::size_t i) {
    const double beta = config.beta_grid[i];
    const TPMDistribution fwd =
        tpm_distribution(process.hamiltonian, beta, process.unitary);
    const TPMDistribution bwd =
        backward_distribution(process.hamiltonian, beta, process.unitary);
    const DFTReport report = dft_report(fwd, bwd);
    coupled[i] = fwd.couples_energy_shells;

    std::vector<Row> rows;
    if (!config.sampled()) {
      for (const auto& row : report.rows)
        rows.push_back({beta, row, row.log_ratio, 0.0});
    } else {
      // Emulated forward and time-reversed (HWP axis + 90 deg) batches;
      // replicate index separates the two protocols' streams.
      const double alpha = config.alpha();
      const CountRecord fwd_rec =
          emulate_counts(beta, alpha, config.exposure, config.noise,
                         StreamKey{config.seed, i, 0, 0});
      const CountRecord bwd_rec =
          emulate_counts(beta, backward_hwp_alpha(alpha), config.exposure,
                         config.noise, StreamKey{config.seed, i, 1, 0});
      const TPMDistribution fwd_est = estimate_distribution(fwd_rec, beta);
      const TPMDistribution bwd_est = estimate_distribution(bwd_rec, beta);

      const auto log_ratio_of =
          [](const std::array<double, 3>& pf,
             const std::array<double, 3>& pb,
             int idx) -> std::optional<double> {
        const double f = pf[idx];
        const double b = pb[2 - idx];  // P~(-C)
        if (f <= 0.0 || b <= 0.0) return std::nullopt;
        return std::log(f) - std::log(b);
      };
      const std::array<double, 3> pf{fwd_est.probs[0], fwd_est.probs[1],
                                     fwd_est.probs[2]};
      const std::array<double, 3> pb{bwd_est.probs[0], bwd_est.probs[1],
                                     bwd_est.probs[2]};

      // Joint Poisson bootstrap of both records for the ratio spread.
      std::mt19937_64 rng(derive_seed(StreamKey{config.seed, i, 0, 2}));
      std::array<std::vector<double>, 3> samples;
      for (int r = 0; r < config.resamples; ++r) {
        std::array<std::int64_t, 4> sf{}, sb{};
        for (int o = 0; o < 4; ++o) {
          if (fwd_rec.counts[o] > 0) {
            std::poisson_distribution<std::int64_t> d(
                static_cast<double>(fwd_rec.counts[o]));
            sf[o] = d(rng);
          }
          if (bwd_rec.counts[o] > 0) {
            std::poisson_distribution<std::int64_t> d(
                static_cast<double>(bwd_rec.counts[o]));
            sb[o] = d(rng);
          }
        }
        const double tf = static_cast<double>(sf[0] + sf[1] + sf[2] + sf[3]);
        const double tb = static_cast<double>(sb[0] + sb[1] + sb[2] + sb[3]);
        if (tf <= 0.0 || tb <= 0.0) continue;
        const std::array<double, 3> qf{sf[2] / tf, (sf[0] + sf[3]) / tf,
                                       sf[1] / tf};
        const std::array<double, 3> qb{sb[2] / tb, (sb[0] + sb[3]) / tb,
                                       sb[1] / tb};
        for (int idx = 0; idx < 3; ++idx)
          if (qf[idx] > 0.0 && qb[2 - idx] > 0.0)
            samples[idx].push_back(std::log(qf[idx]) - std::log(qb[2 - idx]));
      }
      const auto spread = [](const std::vector<double>& v) {
        if (v.size() < 2) return 0.0;
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        return std::sqrt(var / static_cast<double>(v.size() - 1));
      };

      for (const auto& row : report.rows) {
        const int idx = static_cast<int>(std::lround(row.c)) + 1;
        rows.push_back({beta, row, log_ratio_of(pf, pb, idx),
                        spread(samples[idx])});
      }
    }
    per_point[i] = std::move(rows);
  });

  OutputTable dft;
  dft.name = "dft";
  dft.columns = {"scenario_id", "beta",   "C",
                 "P_fwd",       "P_bwd_neg", "log_ratio",
                 "beta_C",      "residual",  "log_ratio_est",
                 "log_ratio_stderr"};
  RunResult result;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& row : per_point[i])
      dft.rows.push_back({config.scenario_id, row.beta, row.exact.c,
                          row.exact.p_forward, row.exact.p_backward_neg,
                          opt_cell(row.exact.log_ratio), row.exact.beta_c,
                          opt_cell(row.exact.residual),
                          opt_cell(row.log_ratio_est), row.log_ratio_stderr});
    result.coupled_energy_shells = result.coupled_energy_shells || coupled[i];
  }
  write_table(dft, config, config_hash, result);
  return result;
}

RunResult run_arrow_sweep(const ScenarioConfig& config,
                          const std::string& config_hash) {
  const ArrowSweep sweep = arrow_sweep(config.theta_grid, config.beta_grid);
  OutputTable table;
  table.name = "arrow";
  table.columns = {"theta", "beta", "mean_C"};
  for (std::size_t i = 0; i < sweep.thetas.size(); ++i)
    for (std::size_t j = 0; j < sweep.betas.size(); ++j)
      table.rows.push_back(
          {sweep.thetas[i], sweep.betas[j], sweep.mean_c(i, j)});
  table.trailing_comments.emplace_back("min_mean_C",
                                       format_double(sweep.min_value));
  RunResult result;
  write_table(table, config, config_hash, result);
  return result;
}

RunResult run_decompose(const ScenarioConfig& config,
                        const std::string& config_hash) {
  const Trajectory traj = load_trajectory(*config.trajectory_file);
  const EnergyLedger ledger = decompose(traj);
  OutputTable table;
  table.name = "ledger";
  table.columns = {"time", "U", "W", "Q", "C", "residual"};
  for (std::size_t i = 0; i < ledger.times.size(); ++i)
    table.rows.push_back({ledger.times[i], ledger.internal[i], ledger.work[i],
                          ledger.heat[i], ledger.coherent[i],
                          ledger.residual[i]});
  RunResult result;
  write_table(table, config, config_hash, result);
  return result;
}

}  // namespace

std::string mode_name(Mode mode) {
  for (const auto& [m, name] : kModeNames)
    if (m == mode) return name;
  return "?";
}

double ScenarioConfig::alpha() const {
  if (hwp_alpha) return *hwp_alpha;
  return theta_grid.front() / 4.0;
}

bool ScenarioConfig::sampled() const {
  return exposure > 0.0;
}

ScenarioConfig parse_config(const std::string& text, Mode mode,
                            const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigParse(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigParse("config: top level must be an object");
  if (!doc.contains("mode")) throw MissingField("config: missing \"mode\"");
  const std::string declared = doc["mode"].get<std::string>();
  if (declared != mode_name(mode))
    throw ConfigParse("config mode \"" + declared +
                      "\" does not match the subcommand's mode \"" +
                      mode_name(mode) + "\"");

  ScenarioConfig config;
  config.mode = mode;
  config.scenario_id = doc.value("scenario_id", declared);
  for (char c : config.scenario_id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'))
      throw ConfigParse("scenario_id may only hold [A-Za-z0-9_-]");

  const bool needs_beta = mode != Mode::kDecompose;
  if (needs_beta) {
    if (!doc.contains("beta")) throw MissingField("config: missing \"beta\"");
    config.beta_grid = parse_grid(doc["beta"], "beta");
    for (double b : config.beta_grid)
      if (!(b >= 0.0) || !std::isfinite(b))
        throw ConfigParse("beta grid values must be finite and >= 0");
  }

  if (mode == Mode::kArrowSweep) {
    if (!doc.contains("theta_deg"))
      throw MissingField("config: arrow-sweep needs \"theta_deg\"");
    for (double t : parse_grid(doc["theta_deg"], "theta_deg"))
      config.theta_grid.push_back(deg2rad(t));
  } else if (doc.contains("theta_deg")) {
    if (!doc["theta_deg"].is_number())
      throw ConfigParse("theta_deg: this mode takes a single angle");
    config.theta_grid.push_back(deg2rad(doc["theta_deg"].get<double>()));
  }
  for (double t : config.theta_grid)
    if (!(t >= 0.0 && t <= kPi + 1e-12))
      throw ConfigParse("theta_deg values must lie in [0, 180]");

  config.phi = deg2rad(doc.value("phi_deg", 0.0));
  if (!(config.phi >= 0.0 && config.phi < 2.0 * kPi))
    throw ConfigParse("phi_deg must lie in [0, 360)");

  if (doc.contains("hwp_alpha_deg")) {
    if (doc.contains("theta_deg"))
      throw ConfigParse("give either theta_deg or hwp_alpha_deg, not both");
    config.hwp_alpha = deg2rad(doc["hwp_alpha_deg"].get<double>());
    // The equivalent rotation angle, for the modes that report it.
    config.theta_grid.push_back(4.0 * *config.hwp_alpha);
  }

  const auto optional_path = [&](const char* key) -> std::optional<std::string> {
    if (!doc.contains(key)) return std::nullopt;
    const std::string resolved =
        resolve_path(base_dir, doc[key].get<std::string>());
    require_file_exists(resolved, key);
    return resolved;
  };
  config.hamiltonian_file = optional_path("hamiltonian_file");
  config.unitary_file = optional_path("unitary_file");
  config.trajectory_file = optional_path("trajectory_file");

  const bool is_sampling_mode =
      mode == Mode::kTpmSample || mode == Mode::kIftSweep;
  if (doc.contains("exposure")) {
    config.exposure = doc["exposure"].get<double>();
    if (!(config.exposure > 0.0) || !std::isfinite(config.exposure))
      throw ConfigParse("exposure must be finite and > 0");
  } else if (is_sampling_mode) {
    throw MissingField("config: this mode needs \"exposure\"");
  }
  config.resamples = doc.value("resamples", 1000);
  if (config.resamples < 100)
    throw ConfigParse("resamples must be >= 100");

  if (doc.contains("noise")) {
    const auto& noise = doc["noise"];
    config.noise.misalignment_sigma =
        deg2rad(noise.value("misalignment_sigma_deg", 0.0));
    config.noise.misalignment_enabled = config.noise.misalignment_sigma > 0.0;
    config.noise.background = noise.value("background", 0.0);
    config.noise.background_enabled = config.noise.background > 0.0;
    config.noise.validate();
  }

  config.seed = doc.value("seed", std::uint64_t{0});
  config.out_dir = resolve_path(base_dir, doc.value("out_dir", "out"));
  config.emit_json = doc.value("emit_json", false);

  // Mode-specific completeness.
  const bool has_process_files = config.hamiltonian_file.has_value();
  switch (mode) {
    case Mode::kTpmExact:
    case Mode::kDftSweep:
      if (!has_process_files && config.theta_grid.empty())
        throw MissingField(
            "config: give theta_deg/hwp_alpha_deg or operator files");
      break;
    case Mode::kTpmSample:
    case Mode::kIftSweep:
      if (has_process_files)
        throw ConfigParse(
            "sampled modes emulate the qubit experiment; operator files are "
            "not supported");
      if (config.theta_grid.empty())
        throw MissingField("config: missing \"theta_deg\" or \"hwp_alpha_deg\"");
      break;
    case Mode::kArrowSweep:
      break;
    case Mode::kDecompose:
      if (!config.trajectory_file)
        throw MissingField("config: decompose needs \"trajectory_file\"");
      break;
  }
  if (config.sampled() && mode == Mode::kDftSweep && has_process_files)
    throw ConfigParse("dft-sweep sampling requires the qubit process");
  return config;
}

RunResult run_scenario(const ScenarioConfig& config,
                       const std::string& config_hash) {
  switch (config.mode) {
    case Mode::kTpmExact:
      return run_tpm_exact(config, config_hash);
    case Mode::kTpmSample:
    case Mode::kIftSweep:
      return run_sampled_sweep(config, config_hash);
    case Mode::kDftSweep:
      return run_dft_sweep(config, config_hash);
    case Mode::kArrowSweep:
      return run_arrow_sweep(config, config_hash);
    case Mode::kDecompose:
      return run_decompose(config, config_hash);
  }
  throw ConfigParse("unknown mode");
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(buf);
}

}  // namespace coheft::cli
