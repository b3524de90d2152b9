#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "latentvqe/errors.hpp"
#include "latentvqe/predictor.hpp"
#include "latentvqe/workflow.hpp"
#include "oracles.hpp"

using namespace latentvqe;
using std::numbers::pi;

namespace {

ParameterDataset constant_dataset(std::vector<double> angles, int n) {
  ParameterDataset ds;
  ds.pqc_spec = {AnsatzFamily::STRONGLY_ENTANGLING, 2, 1, {}};
  for (int i = 0; i < n; ++i)
    ds.records.push_back({0.3 + 0.05 * i, angles, -1.0, -1.0, false});
  return ds;
}

// Reference forward pass written out directly from the weight layout.
std::vector<double> reference_forward(const MlpModel& m, double x) {
  std::vector<double> a{x};
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const DenseLayer& layer = m.layers[l];
    std::vector<double> z(static_cast<std::size_t>(layer.fan_out));
    for (int o = 0; o < layer.fan_out; ++o) {
      double s = layer.biases[static_cast<std::size_t>(o)];
      for (int i = 0; i < layer.fan_in; ++i)
        s += layer.weights[static_cast<std::size_t>(o * layer.fan_in + i)] * a[static_cast<std::size_t>(i)];
      z[static_cast<std::size_t>(o)] = l + 1 < m.layers.size() ? std::tanh(s) : s;
    }
    a = std::move(z);
  }
  return a;
}

void check_backprop(AngleLoss loss) {
  Rng rng(77);
  MlpModel m = MlpModel::initialized({1, 4, 2}, 0.3, 2.85, 5);
  m.loss = loss;
  auto flat = m.flat_parameters();
  for (auto& w : flat) w += rng.uniform(-0.5, 0.5);
  m.set_flat_parameters(flat);
  const std::vector<double> x{0.1, 0.45, 0.9};
  const std::vector<std::vector<double>> t{{0.3, 5.9}, {1.2, -0.4}, {2.0, 3.0}};
  const LossGradient lg = loss_and_gradient(m, x, t);
  REQUIRE(lg.gradient.size() == flat.size());
  const double h = 1e-6;
  for (std::size_t k = 0; k < flat.size(); ++k) {
    auto p = flat;
    p[k] += h;
    m.set_flat_parameters(p);
    const double plus = loss_and_gradient(m, x, t).loss;
    p[k] -= 2 * h;
    m.set_flat_parameters(p);
    const double minus = loss_and_gradient(m, x, t).loss;
    const double numeric = (plus - minus) / (2 * h);
    CHECK(std::abs(lg.gradient[k] - numeric) <= 1e-5 * std::max(std::abs(numeric), 1e-4));
  }
}

} // namespace

TEST_CASE("circular loss examples") {
  const std::vector<double> a{0.0, 1.0}, b{2 * pi, 1.0 - 2 * pi}, c{pi, 1.0};
  CHECK(std::abs(circular_loss(a, a)) < 1e-15);
  CHECK(std::abs(circular_loss(a, b)) < 1e-15);
  CHECK(std::abs(circular_loss(a, c) - 2.0) < 1e-14);
  const std::vector<double> short_one{0.0};
  CHECK_THROWS_AS(circular_loss(a, short_one), std::invalid_argument);

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> p(12), t(12), shifted(12);
    for (std::size_t i = 0; i < 12; ++i) {
      p[i] = rng.uniform(-10, 10);
      t[i] = rng.uniform(-10, 10);
      shifted[i] = t[i] + 2 * pi * static_cast<double>(static_cast<int>(rng.index(7)) - 3);
    }
    const double l = circular_loss(p, t);
    CHECK(l >= 0.0);
    CHECK(l <= 4.0);
    CHECK(std::abs(l - circular_loss(p, shifted)) < 1e-12);
    CHECK(std::abs(l - circular_loss(t, p)) < 1e-12);
  }
}

TEST_CASE("cosine similarity loss examples") {
  const std::vector<double> a{1.0, 2.0}, scaled{2.0, 4.0}, opposite{-1.0, -2.0}, ortho{2.0, -1.0};
  CHECK(std::abs(cosine_similarity_loss(a, a)) < 1e-11);
  CHECK(std::abs(cosine_similarity_loss(a, scaled)) < 1e-11);
  CHECK(std::abs(cosine_similarity_loss(a, opposite) - 2.0) < 1e-11);
  CHECK(std::abs(cosine_similarity_loss(a, ortho) - 1.0) < 1e-15);
  CHECK(angle_loss_from_string(to_string(AngleLoss::COSINE_SIMILARITY)) == AngleLoss::COSINE_SIMILARITY);
  CHECK_THROWS_AS(angle_loss_from_string("mse"), std::invalid_argument);
}

TEST_CASE("forward pass matches a direct evaluation") {
  const MlpModel m = MlpModel::initialized({1, 30, 30, 30, 30, 12}, 0.3, 2.85, 9);
  CHECK(m.flat_parameters().size() == 30 * 2 + 3 * (30 * 31) + 12 * 31);
  for (double x : {0.0, 0.25, 0.5, 1.0}) {
    const auto got = m.forward(x);
    const auto want = reference_forward(m, x);
    REQUIRE(got.size() == 12);
    for (std::size_t k = 0; k < 12; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-14);
  }
  for (const auto& layer : m.layers) {
    const double limit = std::sqrt(6.0 / (layer.fan_in + layer.fan_out));
    for (double w : layer.weights) CHECK(std::abs(w) <= limit);
    for (double b : layer.biases) CHECK(b == 0.0);
  }
}

TEST_CASE("backpropagation matches finite differences") {
  check_backprop(AngleLoss::CIRCULAR);
  check_backprop(AngleLoss::COSINE_SIMILARITY);
}

TEST_CASE("input normalization round trip") {
  const MlpModel m = MlpModel::initialized({1, 4, 2}, 0.3, 2.85, 1);
  CHECK(m.normalize(0.3) == 0.0);
  CHECK(m.normalize(2.85) == 1.0);
  for (double r : {0.3, 0.77, 1.9, 2.85}) CHECK(std::abs(m.denormalize(m.normalize(r)) - r) < 1e-15);
}

TEST_CASE("a constant-angle dataset is learned") {
  const ParameterDataset ds = constant_dataset({1.0, 2.0, 4.0}, 30);
  TrainConfig cfg;
  cfg.hidden = {8};
  cfg.epochs = 8000;
  cfg.learning_rate = 0.1;
  cfg.seed = 3;
  const TrainResult r = train(ds, cfg);
  CHECK(r.test_loss < 1e-6);
  CHECK(r.train_indices.size() == 21);
  CHECK(r.test_indices.size() == 9);
  const auto& trace = r.train_loss_trace;
  REQUIRE(trace.size() == 8000);
  auto window = [&](std::size_t start) {
    double s = 0.0;
    for (std::size_t i = start; i < start + 50; ++i) s += trace[i];
    return s / 50.0;
  };
  for (std::size_t start = 50; start + 50 <= trace.size(); start += 50) CHECK(window(start) <= window(start - 50));
}

TEST_CASE("training rejects too few usable records") {
  ParameterDataset ds = constant_dataset({1.0, 2.0}, 25);
  for (int i = 0; i < 6; ++i) ds.records[static_cast<std::size_t>(i)].flagged = true;
  CHECK_THROWS_AS(train(ds, TrainConfig{}), std::invalid_argument);
  TrainConfig bad;
  bad.learning_rate = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("predict is deterministic, wrapped and range checked") {
  MlpModel m = MlpModel::initialized({1, 6, 3}, 0.3, 2.85, 11);
  auto flat = m.flat_parameters();
  for (auto& w : flat) w *= 20.0;
  m.set_flat_parameters(flat);
  for (double r : {0.3, 1.0, 2.85, 0.1, 3.1}) {
    const auto a = predict(m, r);
    CHECK(a == predict(m, r));
    const auto raw = m.forward(m.normalize(r));
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k] >= 0.0);
      CHECK(a[k] < 2 * pi);
      CHECK(std::abs(std::remainder(a[k] - raw[k], 2 * pi)) < 1e-9);
    }
  }
  CHECK_THROWS_AS(predict(m, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(predict(m, 3.2), std::invalid_argument);
}

TEST_CASE("model JSON reproduces predictions exactly") {
  const ParameterDataset ds = constant_dataset({0.5, 6.0}, 24);
  TrainConfig cfg;
  cfg.hidden = {5, 5};
  cfg.epochs = 200;
  TrainResult r = train(ds, cfg);
  r.model.dataset_hash = "00000000deadbeef";
  const MlpModel back = mlp_model_from_json(nlohmann::json::parse(to_json(r.model).dump()));
  CHECK(back.dataset_hash == r.model.dataset_hash);
  CHECK(back.layer_sizes == r.model.layer_sizes);
  for (double x : {0.3, 0.71, 1.234, 1.45}) CHECK(predict(back, x) == predict(r.model, x));

  nlohmann::json wrong = to_json(r.model);
  wrong["layer_sizes"] = {1, 5, 2};
  CHECK_THROWS(mlp_model_from_json(wrong));
  wrong = to_json(r.model);
  wrong["schema_version"] = "latentvqe/0";
  CHECK_THROWS_AS(mlp_model_from_json(wrong), ArtifactError);
}

TEST_CASE("trained on a full sweep dataset") {
  QaeTrainConfig qcfg;
  qcfg.optimizer.seed = 21;
  const QaeModel qae =
      train_qae(std::vector<double>{0.4, 0.7, 1.0, 1.5, 2.0, 2.5}, {AnsatzFamily::QAE_ENCODER, 4, 2, {}}, qcfg).model;
  const AnsatzSpec pqc_spec{AnsatzFamily::STRONGLY_ENTANGLING, 2, 1, {}};
  const Circuit pqc = build_ansatz(pqc_spec);
  const Circuit circuit = latent_vqe_circuit(qae, pqc);
  std::vector<GridPoint> grid;
  for (double r : GridSpec{}.points()) grid.push_back(make_grid_point(r));
  SweepConfig sweep;
  sweep.staged = pipeline_staged_config();
  const StagedResult anchor = optimize_anchor(circuit, grid[17].hamiltonian, 20, 21, sweep.staged);
  const ParameterDataset ds = constrained_sweep(circuit, grid, Anchor{17, anchor.params}, sweep, pqc_spec);

  TrainConfig cfg;
  cfg.seed = 21;
  const TrainResult r = train(ds, cfg);
  for (double l : r.train_loss_trace) CHECK(std::isfinite(l));

  for (std::size_t i : r.train_indices) {
    const auto& rec = ds.records[i];
    const auto pred = predict(r.model, rec.bond_length);
    for (std::size_t k = 0; k < pred.size(); ++k) {
      const std::vector<double> a{pred[k]}, b{rec.angles[k]};
      CHECK(circular_loss(a, b) < 1e-2);
    }
  }

  const EnergyPoint at_eq = latent_energy(qae, pqc, 0.735, predict(r.model, 0.735));
  CHECK(std::abs(at_eq.error()) < 1.59e-3);

  auto mae_at = [&](const std::vector<std::size_t>& idx) {
    std::vector<double> rs;
    for (std::size_t i : idx) rs.push_back(ds.records[i].bond_length);
    return evaluate_energy_mae(r.model, qae, rs).mae;
  };
  const double in_sample = mae_at(r.train_indices);
  const double held_out = mae_at(r.test_indices);
  CHECK(held_out < 1.59e-3);
  CHECK(held_out <= 10.0 * in_sample);
  CHECK(evaluate_energy_mae(r.model, qae, GridSpec{0.3, 2.85, 30}.points()).mae < 1.59e-3);
}
