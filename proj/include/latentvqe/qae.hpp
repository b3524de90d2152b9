#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "latentvqe/ansatz.hpp"
#include "latentvqe/circuit.hpp"
#include "latentvqe/optimize.hpp"

namespace latentvqe {

struct QaeModel {
  AnsatzSpec encoder_spec{AnsatzFamily::QAE_ENCODER, 4, 2, {}};
  Circuit encoder;
  std::vector<double> encoder_params;
  std::vector<int> latent_qubits{0, 1};
  std::vector<int> trash_qubits{2, 3};
  double achieved_trash_infidelity = 1.0;
  std::vector<double> training_bond_lengths;

  void validate() const;
};

/// Mean over states of 1 - <00|rho_trash|00> after encoding.
double trash_cost(const Circuit& encoder, std::span<const double> encoder_params,
                  std::span<const StateVector> training_states, std::span<const int> trash_qubits);

struct QaeTrainConfig {
  OptimizerConfig optimizer{OptimizerMethod::NELDER_MEAD, 60000, 1e-15, 20, 0, 0.5, 5, 0.05};
  double target_cost = 1e-8;
  double failure_cost = 1e-4; // best cost above this after all restarts is an error
};

struct QaeTrainResult {
  QaeModel model;
  int restarts_used = 0;
  long evaluations = 0;
  std::vector<double> trace; // best-so-far cost per optimizer iteration, across restarts
};

/// Trains the encoder on exact ground states at `bond_lengths`, restarting
/// from fresh random angles (config.optimizer.restarts attempts, seeded by
/// config.optimizer.seed) until the cost reaches target_cost.
QaeTrainResult train_qae(std::span<const double> bond_lengths, const AnsatzSpec& encoder_spec,
                         const QaeTrainConfig& config);

StateVector encode(const QaeModel& model, const StateVector& state);

/// Encodes, resets the trash register to |0...0> by projection, and decodes.
StateVector reconstruct(const QaeModel& model, const StateVector& state);

/// PQC on the latent qubits of |0000> followed by the decoder (inverse
/// encoder, parameters frozen). Free slots are exactly the PQC's.
Circuit latent_vqe_circuit(const QaeModel& model, const Circuit& pqc);

nlohmann::json to_json(const QaeModel& model);
QaeModel qae_model_from_json(const nlohmann::json& j);

} // namespace latentvqe
