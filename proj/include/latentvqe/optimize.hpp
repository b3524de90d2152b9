#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latentvqe/ansatz.hpp"
#include "latentvqe/circuit.hpp"
#include "latentvqe/hamiltonian.hpp"

namespace latentvqe {

enum class OptimizerMethod { NELDER_MEAD, ADAM_PARAM_SHIFT };

std::string to_string(OptimizerMethod m);
OptimizerMethod optimizer_method_from_string(const std::string& name);

struct OptimizerConfig {
  OptimizerMethod method = OptimizerMethod::NELDER_MEAD;
  int max_iterations = 5000;
  double tolerance = 1e-12; // Nelder-Mead: simplex value spread; Adam: gradient max-norm
  int restarts = 0;         // random restarts, consumed by the callers that own an RNG
  std::uint64_t seed = 0;
  double initial_step = 0.5;    // simplex edge length
  int simplex_restarts = 2;     // rebuild the simplex around the best vertex after convergence
  double learning_rate = 0.05;  // Adam only

  void validate() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

using CostFunction = std::function<double(std::span<const double>)>;
using GradientFunction = std::function<std::vector<double>(std::span<const double>)>;

struct MinimizeResult {
  std::vector<double> params;
  double value = 0.0;
  long evaluations = 0;
  int iterations = 0;
  std::vector<double> trace; // best-so-far value after each iteration
};

/// Nelder-Mead (reflection 1, expansion 2, contraction 0.5, shrink 0.5) with
/// bounds enforced by clipping, or Adam when the method asks for it and a
/// gradient is supplied. Throws NumericalError on a non-finite cost.
MinimizeResult minimize(const CostFunction& cost, std::span<const double> initial,
                        std::span<const Interval> bounds, const OptimizerConfig& config,
                        const GradientFunction& gradient = nullptr);

/// Shift-rule gradient of <psi(params)|observable|psi(params)>. U3 angles are
/// differentiated through U3 = RZ(phi) RY(theta) RZ(lambda) up to phase; shared
/// slots accumulate scale-weighted contributions.
std::vector<double> parameter_shift_gradient(const Circuit& circuit, std::span<const PauliString> observable,
                                             std::span<const double> params, const StateVector& initial_state);
std::vector<double> parameter_shift_gradient(const Circuit& circuit, const QubitHamiltonian& hamiltonian,
                                             std::span<const double> params, const StateVector& initial_state);

// ---------------------------------------------------------------------------
// Staged U1 -> U3 optimization

struct StagedConfig {
  OptimizerConfig inner{OptimizerMethod::NELDER_MEAD, 400, 1e-14, 0, 0, 0.5, 1, 0.05};
  double sweep_tolerance = 1e-9; // Hartree
  int max_sweeps = 10;
};

struct StagedResult {
  std::vector<double> params;
  double energy = 0.0;
  int sweeps = 0;
  long evaluations = 0;
};

/// Gate-by-gate coordinate search over U3 gates: lambda alone first, then
/// (theta, phi) with lambda frozen; repeated until a sweep improves the energy
/// by less than `sweep_tolerance`. Optional per-slot bounds are honored.
StagedResult staged_gate_optimize(const Circuit& circuit, const QubitHamiltonian& hamiltonian,
                                  std::span<const double> init, const StagedConfig& config,
                                  std::span<const Interval> bounds = {},
                                  const std::optional<StateVector>& initial_state = std::nullopt);

/// Best of `restarts` staged runs from uniform random angles in [0, 2pi).
StagedResult optimize_anchor(const Circuit& circuit, const QubitHamiltonian& hamiltonian, int restarts,
                             std::uint64_t seed, const StagedConfig& config,
                             const std::optional<StateVector>& initial_state = std::nullopt);

// ---------------------------------------------------------------------------
// Bond-length sweep with step constraint

struct StepConstraint {
  double alpha = 0.5;
  double gamma = 0.05; // rad

  void validate() const;
};

/// Per-parameter feasible interval for the next point: centered at
/// prev + delta with half-width alpha * (gamma + |delta|), delta = prev - prev2
/// (zero when prev2 is absent).
std::vector<Interval> step_bounds(std::span<const double> prev, std::span<const double> prev2,
                                  const StepConstraint& constraint);

struct DatasetRecord {
  double bond_length = 0.0;
  std::vector<double> angles;
  double energy = 0.0;
  double oracle_energy = 0.0;
  bool flagged = false;

  double error() const { return energy - oracle_energy; }
};

struct ParameterDataset {
  std::vector<DatasetRecord> records; // ascending bond length
  int anchor_index = 0;
  AnsatzSpec pqc_spec;

  std::size_t n_angles() const { return records.empty() ? 0 : records.front().angles.size(); }
  void validate() const;
};

struct SweepConfig {
  StepConstraint constraint;
  StagedConfig staged;
  double flag_factor = 100.0;
  double flag_floor = 1e-8; // Hartree; see constrained_sweep
};

struct Anchor {
  int grid_index = 0;
  std::vector<double> params;
};

/// Hamiltonian and exact ground energy for a bond length.
struct GridPoint {
  QubitHamiltonian hamiltonian;
  double oracle_energy = 0.0;
};

GridPoint make_grid_point(double bond_length);

/// Walks the grid outward from the anchor in both directions, optimizing each
/// point with the staged procedure inside its step bounds, warm-started at the
/// bound center. A point is flagged when its energy error exceeds
/// flag_factor * max(anchor error, flag_floor).
ParameterDataset constrained_sweep(const Circuit& circuit, std::span<const GridPoint> grid, const Anchor& anchor,
                                   const SweepConfig& config, const AnsatzSpec& pqc_spec,
                                   const std::optional<StateVector>& initial_state = std::nullopt);

std::string dataset_to_csv(const ParameterDataset& dataset);
ParameterDataset dataset_from_csv(const std::string& text);

} // namespace latentvqe
