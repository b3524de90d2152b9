#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "latentvqe/optimize.hpp"
#include "latentvqe/predictor.hpp"

namespace latentvqe {

namespace fs = std::filesystem;

// Pipeline commands behind the CLI verbs. Each writes its artifact(s) plus a
// RunManifest next to them and returns the manifest.

struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::map<std::string, std::string> input_hashes; // path -> fnv1a64 hex
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
  double wall_time_seconds = 0.0;

  nlohmann::json to_json() const;
};

/// Staged settings used by the pipeline: converged well past the library
/// default so that per-point errors sit near rounding level.
inline StagedConfig pipeline_staged_config() {
  StagedConfig c;
  c.sweep_tolerance = 1e-12;
  c.max_sweeps = 30;
  return c;
}

struct GridSpec {
  double start = 0.3;
  double stop = 2.85;
  int count = 100;

  /// Parses "start:stop:count"; throws UsageError on malformed input.
  static GridSpec parse(const std::string& text);
  std::vector<double> points() const;
  std::string str() const;
};

// Method labels used in result files and reports.
inline constexpr const char* kMethodUccsd = "uccsd";
inline constexpr const char* kMethodSu2 = "su2";
inline constexpr const char* kMethodAeVqe = "ae-vqe";
inline constexpr const char* kMethodNnAeVqe = "nn-ae-vqe";

struct ResultPoint {
  double bond_length = 0.0;
  double energy = 0.0;
  double oracle_energy = 0.0;
  std::vector<double> params;
  long evaluations = 0;

  double error() const { return energy - oracle_energy; }
};

// Summary row: {method, mae, n_gates, n_params}. For latent methods n_gates
// counts the PQC only and n_decoder_gates the frozen decoder.
struct MethodResult {
  std::string method;
  std::vector<ResultPoint> points;
  int n_gates = 0;
  int n_decoder_gates = 0;
  int n_params = 0;
  std::uint64_t seed = 0;
  nlohmann::json extra = nlohmann::json::object();

  double mae() const;
  nlohmann::json to_json() const;
  static MethodResult from_json(const nlohmann::json& j);
};

struct HamBuildOptions {
  std::optional<double> distance;
  std::optional<GridSpec> grid;
  fs::path out;
};

// Exactly one Hamiltonian source: a file (single or grid index), a distance,
// or a grid. `restarts` defaults to 1 random start for su2 and 20 anchor
// restarts for latent; uccsd always starts from zero amplitudes. The simplex
// step defaults to 0.1 for uccsd and 0.5 for su2.
struct VqeRunOptions {
  std::string ansatz = "uccsd"; // uccsd | su2 | latent
  std::optional<fs::path> hamiltonian;
  std::optional<double> distance;
  std::optional<GridSpec> grid;
  std::optional<fs::path> qae;
  OptimizerConfig optimizer{OptimizerMethod::NELDER_MEAD, 5000, 1e-12, 0, 0, 0.5, 2, 0.05};
  std::optional<double> initial_step;
  std::optional<int> restarts;
  StagedConfig staged = pipeline_staged_config(); // latent only
  fs::path out;
};

struct QaeTrainOptions {
  std::vector<double> bond_lengths{0.4, 0.7, 1.0, 1.5, 2.0, 2.5};
  int layers = 2;
  int restarts = 20;
  double target = 1e-8;
  std::uint64_t seed = 0;
  fs::path out;
};

struct DatasetGenerateOptions {
  fs::path qae;
  GridSpec grid;
  double anchor_bond_length = 0.735;
  StepConstraint constraint;
  int anchor_restarts = 20;
  StagedConfig staged = pipeline_staged_config();
  std::uint64_t seed = 0;
  fs::path out;
};

struct NnTrainOptions {
  fs::path dataset;
  TrainConfig train;
  fs::path out;
};

struct NnEvalOptions {
  fs::path model;
  fs::path qae;
  GridSpec grid{0.3, 2.85, 30};
  fs::path out;
};

struct ReportOptions {
  std::vector<fs::path> inputs;
  fs::path out;
};

RunManifest cmd_ham_build(const HamBuildOptions& options);
RunManifest cmd_vqe_run(const VqeRunOptions& options);
RunManifest cmd_qae_train(const QaeTrainOptions& options);
RunManifest cmd_dataset_generate(const DatasetGenerateOptions& options);
RunManifest cmd_nn_train(const NnTrainOptions& options);
RunManifest cmd_nn_eval(const NnEvalOptions& options);
RunManifest cmd_report(const ReportOptions& options);

// File helpers shared with the tests.
std::string read_text(const fs::path& path);
nlohmann::json read_json(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);
void write_json(const fs::path& path, const nlohmann::json& j);
std::string hash_file(const fs::path& path);

/// Hamiltonians listed by a single file or a grid index, in file order.
std::vector<QubitHamiltonian> load_hamiltonians(const fs::path& path);

/// Path of the manifest written alongside `artifact`.
fs::path manifest_path(const fs::path& artifact);

} // namespace latentvqe
