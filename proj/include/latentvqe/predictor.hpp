#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "latentvqe/ansatz.hpp"
#include "latentvqe/optimize.hpp"
#include "latentvqe/qae.hpp"

namespace latentvqe {

enum class AngleLoss { CIRCULAR, COSINE_SIMILARITY };

std::string to_string(AngleLoss loss);
AngleLoss angle_loss_from_string(const std::string& name);

/// Mean over parameters of (cos t - cos p)^2 + (sin t - sin p)^2.
double circular_loss(std::span<const double> predicted, std::span<const double> target);

/// 1 - cosine similarity of the raw angle vectors.
double cosine_similarity_loss(std::span<const double> predicted, std::span<const double> target);

struct DenseLayer {
  int fan_in = 0;
  int fan_out = 0;
  std::vector<double> weights; // row-major fan_out x fan_in
  std::vector<double> biases;
};

// Bond length -> PQC angles. Hidden layers use tanh, the output is linear.
struct MlpModel {
  std::vector<int> layer_sizes{1, 30, 30, 30, 30, 12};
  std::vector<DenseLayer> layers;
  std::string activation = "tanh";
  double input_min = 0.0; // Angstrom
  double input_max = 1.0;
  std::uint64_t seed = 0;
  std::string dataset_hash;
  AngleLoss loss = AngleLoss::CIRCULAR;
  AnsatzSpec pqc_spec{AnsatzFamily::STRONGLY_ENTANGLING, 2, 1, {}};

  /// Xavier-uniform weights, zero biases.
  static MlpModel initialized(std::vector<int> layer_sizes, double input_min, double input_max, std::uint64_t seed);

  double normalize(double bond_length) const { return (bond_length - input_min) / (input_max - input_min); }
  double denormalize(double x) const { return input_min + x * (input_max - input_min); }

  /// Raw (unwrapped) network output for a normalized input.
  std::vector<double> forward(double normalized_input) const;

  std::vector<double> flat_parameters() const;
  void set_flat_parameters(std::span<const double> flat);

  void validate() const;
};

struct LossGradient {
  double loss = 0.0;
  std::vector<double> gradient; // matches flat_parameters()
};

/// Batch-mean loss and its backpropagated gradient. Inputs are normalized.
LossGradient loss_and_gradient(const MlpModel& model, std::span<const double> inputs,
                               std::span<const std::vector<double>> targets);

struct TrainConfig {
  double learning_rate = 0.05;
  double momentum = 0.9;
  int epochs = 30000;
  int batch_size = 0; // 0 = full batch
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  AngleLoss loss = AngleLoss::CIRCULAR;
  std::vector<int> hidden{30, 30, 30, 30};

  void validate() const;
};

struct TrainResult {
  MlpModel model;
  std::vector<double> train_loss_trace; // per epoch
  double train_loss = 0.0;
  double test_loss = 0.0;
  std::vector<std::size_t> train_indices; // into the unflagged records
  std::vector<std::size_t> test_indices;
};

/// Momentum gradient descent on the dataset's unflagged records.
TrainResult train(const ParameterDataset& dataset, const TrainConfig& config);

/// Network output wrapped into [0, 2pi). Rejects inputs outside the training
/// range padded by 10% of its width.
std::vector<double> predict(const MlpModel& model, double bond_length);

struct EnergyPoint {
  double bond_length = 0.0;
  double energy = 0.0;
  double oracle_energy = 0.0;

  double error() const { return energy - oracle_energy; }
};

struct EnergyEvaluation {
  double mae = 0.0;
  std::vector<EnergyPoint> points;
};

/// Energy of the latent VQE circuit with the given angles.
EnergyPoint latent_energy(const QaeModel& qae, const Circuit& pqc, double bond_length, std::span<const double> angles);

EnergyEvaluation evaluate_energy_mae(const MlpModel& model, const QaeModel& qae, std::span<const double> bond_lengths);

double mean_absolute_error(std::span<const EnergyPoint> points);

nlohmann::json to_json(const MlpModel& model);
MlpModel mlp_model_from_json(const nlohmann::json& j);

} // namespace latentvqe
