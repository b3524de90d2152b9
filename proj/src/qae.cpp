#include "latentvqe/qae.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "latentvqe/errors.hpp"
#include "latentvqe/hamiltonian.hpp"
#include "latentvqe/random.hpp"
#include "latentvqe/schema.hpp"

namespace latentvqe {

void QaeModel::validate() const {
  if (encoder_params.size() != static_cast<std::size_t>(encoder.n_params()))
    throw std::invalid_argument("QAE encoder parameter count mismatch");
  std::vector<int> all = latent_qubits;
  all.insert(all.end(), trash_qubits.begin(), trash_qubits.end());
  std::sort(all.begin(), all.end());
  for (int q = 0; q < encoder.n_qubits(); ++q) {
    if (static_cast<std::size_t>(q) >= all.size() || all[static_cast<std::size_t>(q)] != q)
      throw std::invalid_argument("latent and trash qubits must partition the register");
  }
  if (all.size() != static_cast<std::size_t>(encoder.n_qubits()))
    throw std::invalid_argument("latent and trash qubits must partition the register");
  if (!(achieved_trash_infidelity >= 0.0 && achieved_trash_infidelity <= 1.0))
    throw std::invalid_argument("trash infidelity outside [0, 1]");
}

double trash_cost(const Circuit& encoder, std::span<const double> encoder_params,
                  std::span<const StateVector> training_states, std::span<const int> trash_qubits) {
  if (training_states.empty()) throw std::invalid_argument("trash_cost: empty training set");
  double acc = 0.0;
  for (const StateVector& s : training_states) {
    if (s.n_qubits() != encoder.n_qubits()) throw std::invalid_argument("trash_cost: state qubit count mismatch");
    const StateVector e = simulate(encoder, encoder_params, s);
    acc += 1.0 - fidelity_with_zero(partial_trace(e, trash_qubits));
  }
  return std::clamp(acc / static_cast<double>(training_states.size()), 0.0, 1.0);
}

QaeTrainResult train_qae(std::span<const double> bond_lengths, const AnsatzSpec& encoder_spec,
                         const QaeTrainConfig& config) {
  if (bond_lengths.empty()) throw std::invalid_argument("train_qae: no training bond lengths");
  if (encoder_spec.n_qubits != 4) throw std::invalid_argument("train_qae: the H2 encoder acts on 4 qubits");
  std::vector<StateVector> states;
  for (double r : bond_lengths) states.push_back(exact_ground_energy(h2_hamiltonian(r)).eigenvector);

  QaeTrainResult result;
  QaeModel& model = result.model;
  model.encoder_spec = encoder_spec;
  model.encoder = build_ansatz(encoder_spec);
  model.training_bond_lengths.assign(bond_lengths.begin(), bond_lengths.end());

  auto cost = [&](std::span<const double> p) { return trash_cost(model.encoder, p, states, model.trash_qubits); };

  Rng rng(config.optimizer.seed);
  double best = std::numeric_limits<double>::infinity();
  const int attempts = std::max(1, config.optimizer.restarts);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::vector<double> init(static_cast<std::size_t>(model.encoder.n_params()));
    for (double& v : init) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const MinimizeResult r = minimize(cost, init, {}, config.optimizer);
    result.evaluations += r.evaluations;
    result.restarts_used = attempt + 1;
    for (double v : r.trace) {
      best = std::min(best, v);
      result.trace.push_back(best);
    }
    if (r.value < model.achieved_trash_infidelity || model.encoder_params.empty()) {
      model.encoder_params = r.params;
      model.achieved_trash_infidelity = std::clamp(r.value, 0.0, 1.0);
    }
    if (model.achieved_trash_infidelity < config.target_cost) break;
  }
  if (model.achieved_trash_infidelity > config.failure_cost)
    throw NumericalError("QAE training stalled at trash cost " + std::to_string(model.achieved_trash_infidelity));
  return result;
}

StateVector encode(const QaeModel& model, const StateVector& state) {
  return simulate(model.encoder, model.encoder_params, state);
}

StateVector reconstruct(const QaeModel& model, const StateVector& state) {
  StateVector e = encode(model, state);
  std::size_t trash_mask = 0;
  for (int q : model.trash_qubits) trash_mask |= std::size_t{1} << q;
  for (std::size_t i = 0; i < e.dim(); ++i)
    if (i & trash_mask) e[i] = 0.0;
  e.normalize();
  return simulate(freeze(inverse(model.encoder), model.encoder_params), {}, e);
}

Circuit latent_vqe_circuit(const QaeModel& model, const Circuit& pqc) {
  if (pqc.n_qubits() != static_cast<int>(model.latent_qubits.size()))
    throw std::invalid_argument("PQC acts on " + std::to_string(pqc.n_qubits()) + " qubits, latent space has " +
                                std::to_string(model.latent_qubits.size()));
  Circuit out(model.encoder.n_qubits());
  append(out, pqc, model.latent_qubits, 0);
  const Circuit decoder = freeze(inverse(model.encoder), model.encoder_params);
  std::vector<int> identity(static_cast<std::size_t>(decoder.n_qubits()));
  for (std::size_t q = 0; q < identity.size(); ++q) identity[q] = static_cast<int>(q);
  append(out, decoder, identity, out.n_params());
  return out;
}

nlohmann::json to_json(const QaeModel& model) {
  nlohmann::json j = schema_header("qae_model");
  nlohmann::json enc = to_json(model.encoder);
  enc["ansatz"] = to_json(model.encoder_spec);
  j["encoder"] = std::move(enc);
  j["encoder_params"] = model.encoder_params;
  j["latent_qubits"] = model.latent_qubits;
  j["trash_qubits"] = model.trash_qubits;
  j["achieved_trash_infidelity"] = model.achieved_trash_infidelity;
  j["training_bond_lengths"] = model.training_bond_lengths;
  return j;
}

QaeModel qae_model_from_json(const nlohmann::json& j) {
  require_schema(j, "qae_model");
  QaeModel m;
  try {
    const auto& enc = j.at("encoder");
    m.encoder = circuit_from_json(enc);
    if (enc.contains("ansatz")) m.encoder_spec = ansatz_spec_from_json(enc.at("ansatz"));
    m.encoder_params = j.at("encoder_params").get<std::vector<double>>();
    m.latent_qubits = j.at("latent_qubits").get<std::vector<int>>();
    m.trash_qubits = j.at("trash_qubits").get<std::vector<int>>();
    m.achieved_trash_infidelity = j.at("achieved_trash_infidelity").get<double>();
    m.training_bond_lengths = j.at("training_bond_lengths").get<std::vector<double>>();
    m.validate();
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("malformed QAE model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ArtifactError(std::string("invalid QAE model: ") + e.what());
  }
  return m;
}

} // namespace latentvqe
