#include "latentvqe/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "latentvqe/errors.hpp"
#include "latentvqe/hamiltonian.hpp"
#include "latentvqe/random.hpp"
#include "latentvqe/schema.hpp"

namespace latentvqe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("angle vectors differ in length");
  if (a.empty()) throw std::invalid_argument("empty angle vector");
}

// dLoss/dPredicted for one sample.
std::vector<double> loss_derivative(AngleLoss kind, std::span<const double> y, std::span<const double> t) {
  const std::size_t p = y.size();
  std::vector<double> d(p);
  if (kind == AngleLoss::CIRCULAR) {
    for (std::size_t k = 0; k < p; ++k) d[k] = -2.0 * std::sin(t[k] - y[k]) / static_cast<double>(p);
    return d;
  }
  const double ty = std::inner_product(t.begin(), t.end(), y.begin(), 0.0);
  const double nt = std::sqrt(std::inner_product(t.begin(), t.end(), t.begin(), 0.0)) + 1e-12;
  const double ny = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0)) + 1e-12;
  for (std::size_t k = 0; k < p; ++k) d[k] = -(t[k] / (nt * ny) - ty * y[k] / (nt * ny * ny * ny));
  return d;
}

double sample_loss(AngleLoss kind, std::span<const double> y, std::span<const double> t) {
  return kind == AngleLoss::CIRCULAR ? circular_loss(y, t) : cosine_similarity_loss(y, t);
}

} // namespace

std::string to_string(AngleLoss loss) { return loss == AngleLoss::CIRCULAR ? "circular" : "cosine_similarity"; }

AngleLoss angle_loss_from_string(const std::string& name) {
  if (name == "circular") return AngleLoss::CIRCULAR;
  if (name == "cosine_similarity" || name == "cosine") return AngleLoss::COSINE_SIMILARITY;
  throw std::invalid_argument("unknown loss '" + name + "'");
}

double circular_loss(std::span<const double> predicted, std::span<const double> target) {
  check_lengths(predicted, target);
  double acc = 0.0;
  for (std::size_t k = 0; k < predicted.size(); ++k) {
    const double dc = std::cos(target[k]) - std::cos(predicted[k]);
    const double ds = std::sin(target[k]) - std::sin(predicted[k]);
    acc += dc * dc + ds * ds;
  }
  return acc / static_cast<double>(predicted.size());
}

double cosine_similarity_loss(std::span<const double> predicted, std::span<const double> target) {
  check_lengths(predicted, target);
  const double ty = std::inner_product(target.begin(), target.end(), predicted.begin(), 0.0);
  const double nt = std::sqrt(std::inner_product(target.begin(), target.end(), target.begin(), 0.0)) + 1e-12;
  const double ny = std::sqrt(std::inner_product(predicted.begin(), predicted.end(), predicted.begin(), 0.0)) + 1e-12;
  return 1.0 - ty / (nt * ny);
}

MlpModel MlpModel::initialized(std::vector<int> layer_sizes, double input_min, double input_max, std::uint64_t seed) {
  MlpModel m;
  m.layer_sizes = std::move(layer_sizes);
  m.input_min = input_min;
  m.input_max = input_max;
  m.seed = seed;
  if (m.layer_sizes.size() < 2) throw std::invalid_argument("network needs at least input and output layers");
  Rng rng(seed);
  for (std::size_t l = 1; l < m.layer_sizes.size(); ++l) {
    DenseLayer layer;
    layer.fan_in = m.layer_sizes[l - 1];
    layer.fan_out = m.layer_sizes[l];
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.fan_in + layer.fan_out));
    layer.weights.resize(static_cast<std::size_t>(layer.fan_in * layer.fan_out));
    for (double& w : layer.weights) w = rng.uniform(-limit, limit);
    layer.biases.assign(static_cast<std::size_t>(layer.fan_out), 0.0);
    m.layers.push_back(std::move(layer));
  }
  m.validate();
  return m;
}

void MlpModel::validate() const {
  if (!(input_min < input_max)) throw std::invalid_argument("input normalization requires min < max");
  if (layer_sizes.size() != layers.size() + 1) throw std::invalid_argument("layer size list does not match layers");
  if (layer_sizes.front() != 1) throw std::invalid_argument("network input must be the scalar bond length");
  if (activation != "tanh") throw std::invalid_argument("unsupported activation '" + activation + "'");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& layer = layers[l];
    if (layer.fan_in != layer_sizes[l] || layer.fan_out != layer_sizes[l + 1] ||
        layer.weights.size() != static_cast<std::size_t>(layer.fan_in * layer.fan_out) ||
        layer.biases.size() != static_cast<std::size_t>(layer.fan_out))
      throw std::invalid_argument("layer " + std::to_string(l) + " has inconsistent shape");
  }
}

std::vector<double> MlpModel::forward(double x) const {
  std::vector<double> a{x};
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& layer = layers[l];
    std::vector<double> z(static_cast<std::size_t>(layer.fan_out));
    for (int o = 0; o < layer.fan_out; ++o) {
      double acc = layer.biases[static_cast<std::size_t>(o)];
      for (int i = 0; i < layer.fan_in; ++i)
        acc += layer.weights[static_cast<std::size_t>(o * layer.fan_in + i)] * a[static_cast<std::size_t>(i)];
      z[static_cast<std::size_t>(o)] = (l + 1 < layers.size()) ? std::tanh(acc) : acc;
    }
    a = std::move(z);
  }
  return a;
}

std::vector<double> MlpModel::flat_parameters() const {
  std::vector<double> flat;
  for (const DenseLayer& layer : layers) {
    flat.insert(flat.end(), layer.weights.begin(), layer.weights.end());
    flat.insert(flat.end(), layer.biases.begin(), layer.biases.end());
  }
  return flat;
}

void MlpModel::set_flat_parameters(std::span<const double> flat) {
  std::size_t pos = 0;
  for (DenseLayer& layer : layers) {
    if (pos + layer.weights.size() + layer.biases.size() > flat.size())
      throw std::invalid_argument("flat parameter vector too short");
    std::copy_n(flat.begin() + static_cast<long>(pos), layer.weights.size(), layer.weights.begin());
    pos += layer.weights.size();
    std::copy_n(flat.begin() + static_cast<long>(pos), layer.biases.size(), layer.biases.begin());
    pos += layer.biases.size();
  }
  if (pos != flat.size()) throw std::invalid_argument("flat parameter vector too long");
}

LossGradient loss_and_gradient(const MlpModel& model, std::span<const double> inputs,
                               std::span<const std::vector<double>> targets) {
  if (inputs.size() != targets.size() || inputs.empty()) throw std::invalid_argument("batch size mismatch");
  const std::size_t n_layers = model.layers.size();
  LossGradient out;
  out.gradient.assign(model.flat_parameters().size(), 0.0);

  std::vector<std::size_t> offsets(n_layers);
  {
    std::size_t pos = 0;
    for (std::size_t l = 0; l < n_layers; ++l) {
      offsets[l] = pos;
      pos += model.layers[l].weights.size() + model.layers[l].biases.size();
    }
  }

  std::vector<std::vector<double>> acts(n_layers + 1);
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    acts[0] = {inputs[s]};
    for (std::size_t l = 0; l < n_layers; ++l) {
      const DenseLayer& layer = model.layers[l];
      auto& next = acts[l + 1];
      next.assign(static_cast<std::size_t>(layer.fan_out), 0.0);
      for (int o = 0; o < layer.fan_out; ++o) {
        double acc = layer.biases[static_cast<std::size_t>(o)];
        for (int i = 0; i < layer.fan_in; ++i)
          acc += layer.weights[static_cast<std::size_t>(o * layer.fan_in + i)] * acts[l][static_cast<std::size_t>(i)];
        next[static_cast<std::size_t>(o)] = (l + 1 < n_layers) ? std::tanh(acc) : acc;
      }
    }
    const auto& y = acts[n_layers];
    if (targets[s].size() != y.size()) throw std::invalid_argument("target length does not match network output");
    out.loss += sample_loss(model.loss, y, targets[s]);

    std::vector<double> delta = loss_derivative(model.loss, y, targets[s]);
    for (std::size_t l = n_layers; l-- > 0;) {
      const DenseLayer& layer = model.layers[l];
      double* gw = out.gradient.data() + offsets[l];
      double* gb = gw + layer.weights.size();
      const auto& a_in = acts[l];
      for (int o = 0; o < layer.fan_out; ++o) {
        const double d = delta[static_cast<std::size_t>(o)];
        gb[o] += d;
        for (int i = 0; i < layer.fan_in; ++i) gw[o * layer.fan_in + i] += d * a_in[static_cast<std::size_t>(i)];
      }
      if (l == 0) break;
      std::vector<double> prev(static_cast<std::size_t>(layer.fan_in), 0.0);
      for (int o = 0; o < layer.fan_out; ++o) {
        const double d = delta[static_cast<std::size_t>(o)];
        for (int i = 0; i < layer.fan_in; ++i)
          prev[static_cast<std::size_t>(i)] += layer.weights[static_cast<std::size_t>(o * layer.fan_in + i)] * d;
      }
      for (int i = 0; i < layer.fan_in; ++i) {
        const double a = a_in[static_cast<std::size_t>(i)];
        prev[static_cast<std::size_t>(i)] *= 1.0 - a * a; // tanh'
      }
      delta = std::move(prev);
    }
  }
  const double inv = 1.0 / static_cast<double>(inputs.size());
  out.loss *= inv;
  for (double& g : out.gradient) g *= inv;
  return out;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw std::invalid_argument("train_fraction must be in (0, 1)");
  if (batch_size < 0) throw std::invalid_argument("batch_size must be >= 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw std::invalid_argument("momentum must be in [0, 1)");
}

TrainResult train(const ParameterDataset& dataset, const TrainConfig& config) {
  config.validate();
  std::vector<const DatasetRecord*> usable;
  for (const auto& r : dataset.records)
    if (!r.flagged) usable.push_back(&r);
  if (usable.size() < 20)
    throw std::invalid_argument("dataset has " + std::to_string(usable.size()) + " usable records, need >= 20");

  double lo = usable.front()->bond_length, hi = lo;
  for (const auto* r : usable) {
    lo = std::min(lo, r->bond_length);
    hi = std::max(hi, r->bond_length);
  }
  std::vector<int> sizes{1};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(static_cast<int>(dataset.n_angles()));

  TrainResult result;
  result.model = MlpModel::initialized(sizes, lo, hi, config.seed);
  result.model.loss = config.loss;
  result.model.pqc_spec = dataset.pqc_spec;
  MlpModel& model = result.model;

  Rng rng(derive_seed(config.seed, "split"));
  std::vector<std::size_t> order(usable.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  const auto n_train = static_cast<std::size_t>(std::lround(config.train_fraction * static_cast<double>(order.size())));
  result.train_indices.assign(order.begin(), order.begin() + static_cast<long>(n_train));
  result.test_indices.assign(order.begin() + static_cast<long>(n_train), order.end());
  std::sort(result.train_indices.begin(), result.train_indices.end());
  std::sort(result.test_indices.begin(), result.test_indices.end());
  if (result.train_indices.empty() || result.test_indices.empty())
    throw std::invalid_argument("train/test split leaves an empty side");

  auto gather = [&](const std::vector<std::size_t>& idx, std::vector<double>& x, std::vector<std::vector<double>>& t) {
    for (std::size_t i : idx) {
      x.push_back(model.normalize(usable[i]->bond_length));
      t.push_back(usable[i]->angles);
    }
  };
  std::vector<double> x_train, x_test;
  std::vector<std::vector<double>> t_train, t_test;
  gather(result.train_indices, x_train, t_train);
  gather(result.test_indices, x_test, t_test);

  std::vector<double> params = model.flat_parameters();
  std::vector<double> velocity(params.size(), 0.0);
  const std::size_t batch =
      config.batch_size == 0 ? x_train.size() : std::min<std::size_t>(static_cast<std::size_t>(config.batch_size), x_train.size());
  Rng batch_rng(derive_seed(config.seed, "batches"));
  std::vector<std::size_t> perm(x_train.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> bx;
  std::vector<std::vector<double>> bt;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (batch < x_train.size())
      for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[batch_rng.index(i)]);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < x_train.size(); start += batch) {
      const std::size_t stop = std::min(start + batch, x_train.size());
      bx.clear();
      bt.clear();
      for (std::size_t k = start; k < stop; ++k) {
        bx.push_back(x_train[perm[k]]);
        bt.push_back(t_train[perm[k]]);
      }
      const LossGradient lg = loss_and_gradient(model, bx, bt);
      if (!std::isfinite(lg.loss)) throw NumericalError("training loss became non-finite (learning rate too high?)");
      epoch_loss += lg.loss * static_cast<double>(stop - start);
      for (std::size_t i = 0; i < params.size(); ++i) {
        velocity[i] = config.momentum * velocity[i] - config.learning_rate * lg.gradient[i];
        params[i] += velocity[i];
      }
      model.set_flat_parameters(params);
    }
    result.train_loss_trace.push_back(epoch_loss / static_cast<double>(x_train.size()));
  }

  result.train_loss = loss_and_gradient(model, x_train, t_train).loss;
  result.test_loss = loss_and_gradient(model, x_test, t_test).loss;
  if (!std::isfinite(result.test_loss)) throw NumericalError("non-finite test loss");
  return result;
}

std::vector<double> predict(const MlpModel& model, double bond_length) {
  const double pad = 0.1 * (model.input_max - model.input_min);
  if (!(bond_length >= model.input_min - pad && bond_length <= model.input_max + pad))
    throw std::invalid_argument("bond length " + std::to_string(bond_length) + " A is outside the model's range [" +
                                std::to_string(model.input_min - pad) + ", " + std::to_string(model.input_max + pad) +
                                "]");
  std::vector<double> y = model.forward(model.normalize(bond_length));
  for (double& v : y) {
    v = std::fmod(v, kTwoPi);
    if (v < 0.0) v += kTwoPi;
    if (v >= kTwoPi) v = 0.0;
  }
  return y;
}

EnergyPoint latent_energy(const QaeModel& qae, const Circuit& pqc, double bond_length, std::span<const double> angles) {
  const Circuit circuit = latent_vqe_circuit(qae, pqc);
  const QubitHamiltonian h = h2_hamiltonian(bond_length);
  EnergyPoint p;
  p.bond_length = bond_length;
  p.energy = energy(h, simulate(circuit, angles, StateVector::zero(circuit.n_qubits())));
  p.oracle_energy = exact_ground_energy(h).energy;
  return p;
}

double mean_absolute_error(std::span<const EnergyPoint> points) {
  if (points.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& p : points) acc += std::abs(p.error());
  return acc / static_cast<double>(points.size());
}

EnergyEvaluation evaluate_energy_mae(const MlpModel& model, const QaeModel& qae, std::span<const double> bond_lengths) {
  const Circuit pqc = build_ansatz(model.pqc_spec);
  EnergyEvaluation out;
  for (double r : bond_lengths) out.points.push_back(latent_energy(qae, pqc, r, predict(model, r)));
  out.mae = mean_absolute_error(out.points);
  return out;
}

nlohmann::json to_json(const MlpModel& model) {
  nlohmann::json j = schema_header("mlp_model");
  j["layer_sizes"] = model.layer_sizes;
  nlohmann::json w = nlohmann::json::array(), b = nlohmann::json::array();
  for (const auto& layer : model.layers) {
    w.push_back(layer.weights);
    b.push_back(layer.biases);
  }
  j["weights"] = std::move(w);
  j["biases"] = std::move(b);
  j["activation"] = model.activation;
  j["input_normalization"] = {{"min", model.input_min}, {"max", model.input_max}};
  j["seed"] = model.seed;
  j["dataset_hash"] = model.dataset_hash;
  j["loss"] = to_string(model.loss);
  j["pqc"] = to_json(model.pqc_spec);
  return j;
}

MlpModel mlp_model_from_json(const nlohmann::json& j) {
  require_schema(j, "mlp_model");
  MlpModel m;
  try {
    m.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    const auto w = j.at("weights").get<std::vector<std::vector<double>>>();
    const auto b = j.at("biases").get<std::vector<std::vector<double>>>();
    if (w.size() + 1 != m.layer_sizes.size() || b.size() != w.size())
      throw ArtifactError("model weight arrays do not match layer_sizes");
    for (std::size_t l = 0; l < w.size(); ++l)
      m.layers.push_back({m.layer_sizes[l], m.layer_sizes[l + 1], w[l], b[l]});
    m.activation = j.at("activation").get<std::string>();
    m.input_min = j.at("input_normalization").at("min").get<double>();
    m.input_max = j.at("input_normalization").at("max").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.dataset_hash = j.at("dataset_hash").get<std::string>();
    if (j.contains("loss")) m.loss = angle_loss_from_string(j.at("loss").get<std::string>());
    m.pqc_spec = ansatz_spec_from_json(j.at("pqc"));
    m.validate();
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("malformed model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ArtifactError(std::string("invalid model file: ") + e.what());
  }
  return m;
}

} // namespace latentvqe
