#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "latentvqe/errors.hpp"
#include "latentvqe/workflow.hpp"

using namespace latentvqe;

namespace {

std::optional<GridSpec> grid_from(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return GridSpec::parse(text);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"H2 latent-space VQE pipeline: Hamiltonians, baselines, autoencoder, datasets, predictor, reports"};
  app.require_subcommand(1);

  std::string grid_text, out, ansatz = "uccsd", optimizer = "nelder-mead", hamiltonian, qae_path, model_path,
                             dataset_path, loss = "circular";
  double distance = 0.0, alpha = 0.5, gamma = 0.05, anchor = 0.735, step = 0.0, lr = 0.05, target = 1e-8;
  std::uint64_t seed = 0;
  int restarts = 0, max_iter = 5000, epochs = 30000, layers = 2;
  std::vector<double> bond_lengths{0.4, 0.7, 1.0, 1.5, 2.0, 2.5};
  std::vector<std::string> inputs;

  auto* ham = app.add_subcommand("ham", "Qubit Hamiltonians")->require_subcommand(1);
  auto* ham_build = ham->add_subcommand("build", "Write Hamiltonian JSON for one distance or a grid");
  auto* ham_distance = ham_build->add_option("--distance", distance, "Bond length in Angstrom");
  ham_build->add_option("--grid", grid_text, "start:stop:count in Angstrom");
  ham_build->add_option("--out", out, "Output file (distance) or directory (grid)")->required();

  auto* vqe = app.add_subcommand("vqe", "Variational eigensolver runs")->require_subcommand(1);
  auto* vqe_run = vqe->add_subcommand("run", "Minimize the energy with one ansatz");
  vqe_run->add_option("--ansatz", ansatz, "uccsd | su2 | latent")->check(CLI::IsMember({"uccsd", "su2", "latent"}));
  vqe_run->add_option("--hamiltonian", hamiltonian, "Hamiltonian JSON or grid index.json");
  auto* vqe_distance = vqe_run->add_option("--distance", distance, "Bond length in Angstrom");
  vqe_run->add_option("--grid", grid_text, "start:stop:count in Angstrom");
  vqe_run->add_option("--qae", qae_path, "QAE model (latent mode)");
  vqe_run->add_option("--optimizer", optimizer, "nelder-mead | adam");
  auto* vqe_restarts = vqe_run->add_option("--restarts", restarts, "Random starts (su2) or anchor restarts (latent)");
  vqe_run->add_option("--max-iterations", max_iter, "Optimizer iteration budget per start");
  auto* vqe_step = vqe_run->add_option("--step", step, "Initial simplex edge length");
  vqe_run->add_option("--learning-rate", lr, "Adam learning rate");
  vqe_run->add_option("--seed", seed, "Root seed");
  vqe_run->add_option("--out", out, "Result JSON")->required();

  auto* qae = app.add_subcommand("qae", "Quantum autoencoder")->require_subcommand(1);
  auto* qae_train = qae->add_subcommand("train", "Train the encoder on exact ground states");
  qae_train->add_option("--bond-lengths", bond_lengths, "Training bond lengths in Angstrom");
  qae_train->add_option("--layers", layers, "Encoder layers");
  auto* qae_restarts = qae_train->add_option("--restarts", restarts, "Random restarts");
  qae_train->add_option("--target", target, "Trash-cost target");
  qae_train->add_option("--seed", seed, "Root seed");
  qae_train->add_option("--out", out, "Model JSON")->required();

  auto* dataset = app.add_subcommand("dataset", "Parameter datasets")->require_subcommand(1);
  auto* dataset_gen = dataset->add_subcommand("generate", "Anchor optimization and constrained sweep");
  dataset_gen->add_option("--qae", qae_path, "QAE model")->required();
  dataset_gen->add_option("--grid", grid_text, "start:stop:count in Angstrom (default 0.3:2.85:100)");
  dataset_gen->add_option("--anchor", anchor, "Anchor bond length; the nearest grid point is used");
  dataset_gen->add_option("--alpha", alpha, "Step constraint alpha");
  dataset_gen->add_option("--gamma", gamma, "Step constraint gamma (rad)");
  auto* ds_restarts = dataset_gen->add_option("--restarts", restarts, "Anchor restarts");
  dataset_gen->add_option("--seed", seed, "Root seed");
  dataset_gen->add_option("--out", out, "Dataset CSV")->required();

  auto* nn = app.add_subcommand("nn", "Angle predictor")->require_subcommand(1);
  auto* nn_train = nn->add_subcommand("train", "Train the MLP on a parameter dataset");
  nn_train->add_option("--dataset", dataset_path, "Dataset CSV")->required();
  nn_train->add_option("--epochs", epochs, "Training epochs");
  nn_train->add_option("--learning-rate", lr, "Learning rate");
  nn_train->add_option("--loss", loss, "circular | cosine")->check(CLI::IsMember({"circular", "cosine"}));
  nn_train->add_option("--seed", seed, "Root seed");
  nn_train->add_option("--out", out, "Model JSON")->required();

  auto* nn_eval = nn->add_subcommand("eval", "Energy errors of predicted angles");
  nn_eval->add_option("--model", model_path, "MLP model JSON")->required();
  nn_eval->add_option("--qae", qae_path, "QAE model")->required();
  nn_eval->add_option("--grid", grid_text, "start:stop:count in Angstrom (default 0.3:2.85:30)");
  nn_eval->add_option("--out", out, "Result JSON")->required();

  auto* report = app.add_subcommand("report", "Merge result files into comparison tables");
  report->add_option("inputs", inputs, "Result JSON files");
  report->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunManifest manifest;
    if (ham_build->parsed()) {
      HamBuildOptions o;
      if (ham_distance->count()) o.distance = distance;
      o.grid = grid_from(grid_text);
      o.out = out;
      manifest = cmd_ham_build(o);
    } else if (vqe_run->parsed()) {
      VqeRunOptions o;
      o.ansatz = ansatz;
      if (!hamiltonian.empty()) o.hamiltonian = hamiltonian;
      if (vqe_distance->count()) o.distance = distance;
      o.grid = grid_from(grid_text);
      if (!qae_path.empty()) o.qae = qae_path;
      o.optimizer.method = optimizer_method_from_string(optimizer);
      o.optimizer.max_iterations = max_iter;
      o.optimizer.learning_rate = lr;
      o.optimizer.seed = seed;
      if (vqe_step->count()) o.initial_step = step;
      if (vqe_restarts->count()) o.restarts = restarts;
      o.out = out;
      manifest = cmd_vqe_run(o);
    } else if (qae_train->parsed()) {
      QaeTrainOptions o;
      o.bond_lengths = bond_lengths;
      o.layers = layers;
      if (qae_restarts->count()) o.restarts = restarts;
      o.target = target;
      o.seed = seed;
      o.out = out;
      manifest = cmd_qae_train(o);
    } else if (dataset_gen->parsed()) {
      DatasetGenerateOptions o;
      o.qae = qae_path;
      if (!grid_text.empty()) o.grid = GridSpec::parse(grid_text);
      o.anchor_bond_length = anchor;
      o.constraint = {alpha, gamma};
      if (ds_restarts->count()) o.anchor_restarts = restarts;
      o.seed = seed;
      o.out = out;
      manifest = cmd_dataset_generate(o);
    } else if (nn_train->parsed()) {
      NnTrainOptions o;
      o.dataset = dataset_path;
      o.train.epochs = epochs;
      o.train.learning_rate = lr;
      o.train.loss = loss == "cosine" ? AngleLoss::COSINE_SIMILARITY : AngleLoss::CIRCULAR;
      o.train.seed = seed;
      o.out = out;
      manifest = cmd_nn_train(o);
    } else if (nn_eval->parsed()) {
      NnEvalOptions o;
      o.model = model_path;
      o.qae = qae_path;
      if (!grid_text.empty()) o.grid = GridSpec::parse(grid_text);
      o.out = out;
      manifest = cmd_nn_eval(o);
    } else if (report->parsed()) {
      ReportOptions o;
      for (const auto& in : inputs) o.inputs.emplace_back(in);
      o.out = out;
      manifest = cmd_report(o);
    }
    if (manifest.outputs.size() <= 8)
      for (const auto& path : manifest.outputs) std::printf("wrote %s\n", path.c_str());
    else
      std::printf("wrote %zu files\n", manifest.outputs.size());
    std::printf("%s finished in %.2f s\n", manifest.command.c_str(), manifest.wall_time_seconds);
    return 0;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const ArtifactError& e) {
    std::fprintf(stderr, "artifact error: %s\n", e.what());
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "artifact error: %s\n", e.what());
    return 3;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}
