#include "latentvqe/workflow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "latentvqe/errors.hpp"
#include "latentvqe/parallel.hpp"
#include "latentvqe/random.hpp"
#include "latentvqe/schema.hpp"

namespace latentvqe {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_header(std::string_view kind) {
  return "# schema_version: " + std::string(kSchemaVersion) + "\n# kind: " + std::string(kind) + "\n";
}

fs::path with_suffix(const fs::path& path, const std::string& suffix) {
  return path.parent_path() / (path.stem().string() + suffix);
}

void finish(RunManifest& m, const fs::path& where, Clock::time_point start) {
  for (const auto& out : m.outputs)
    if (!fs::exists(out)) throw NumericalError("declared output was not written: " + out);
  m.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  write_json(where, m.to_json());
}

void add_input(RunManifest& m, const fs::path& path) { m.input_hashes[path.string()] = hash_file(path); }

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) throw UsageError("invalid " + what + " '" + text + "'");
  return v;
}

ResultPoint to_result_point(const DatasetRecord& r) {
  return {r.bond_length, r.energy, r.oracle_energy, r.angles, 0};
}

} // namespace

// ---------------------------------------------------------------------------

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j = schema_header("run_manifest");
  j["command"] = command;
  j["config"] = config;
  j["input_hashes"] = input_hashes;
  j["outputs"] = outputs;
  j["seed"] = seed;
  j["wall_time_seconds"] = wall_time_seconds;
  return j;
}

GridSpec GridSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw UsageError("grid must be start:stop:count, got '" + text + "'");
  GridSpec g;
  g.start = parse_number(parts[0], "grid start");
  g.stop = parse_number(parts[1], "grid stop");
  const double count = parse_number(parts[2], "grid count");
  if (count != std::floor(count) || count < 2 || count > 100000) throw UsageError("grid count must be an integer >= 2");
  g.count = static_cast<int>(count);
  if (!(g.start < g.stop)) throw UsageError("grid start must be below stop");
  if (g.start < kMinBondLength || g.stop > kMaxBondLength)
    throw UsageError("grid must lie inside [" + fmt(kMinBondLength) + ", " + fmt(kMaxBondLength) + "] Angstrom");
  return g;
}

std::vector<double> GridSpec::points() const {
  std::vector<double> pts(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pts[static_cast<std::size_t>(i)] = start + (stop - start) * i / (count - 1);
  pts.back() = stop;
  return pts;
}

std::string GridSpec::str() const { return fmt(start) + ":" + fmt(stop) + ":" + std::to_string(count); }

double MethodResult::mae() const {
  if (points.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : points) sum += std::abs(p.error());
  return sum / static_cast<double>(points.size());
}

nlohmann::json MethodResult::to_json() const {
  nlohmann::json j = schema_header("vqe_result");
  j["method"] = method;
  j["seed"] = seed;
  j["summary"] = {{"method", method},     {"mae", mae()},
                  {"n_gates", n_gates},   {"n_decoder_gates", n_decoder_gates},
                  {"n_params", n_params}, {"n_points", points.size()}};
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points)
    pts.push_back({{"bond_length", p.bond_length},
                   {"energy", p.energy},
                   {"oracle_energy", p.oracle_energy},
                   {"error", p.error()},
                   {"params", p.params},
                   {"evaluations", p.evaluations}});
  j["points"] = std::move(pts);
  j["details"] = extra;
  if (points.size() == 1) {
    const auto& p = points.front();
    j["energy"] = p.energy;
    j["oracle_energy"] = p.oracle_energy;
    j["error"] = p.error();
    j["params"] = p.params;
    j["evaluations"] = p.evaluations;
  }
  return j;
}

MethodResult MethodResult::from_json(const nlohmann::json& j) {
  require_schema(j, "vqe_result");
  MethodResult r;
  try {
    r.method = j.at("method").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    const auto& s = j.at("summary");
    r.n_gates = s.at("n_gates").get<int>();
    r.n_decoder_gates = s.at("n_decoder_gates").get<int>();
    r.n_params = s.at("n_params").get<int>();
    for (const auto& p : j.at("points"))
      r.points.push_back({p.at("bond_length").get<double>(), p.at("energy").get<double>(),
                          p.at("oracle_energy").get<double>(), p.at("params").get<std::vector<double>>(),
                          p.at("evaluations").get<long>()});
    r.extra = j.value("details", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("malformed result file: ") + e.what());
  }
  return r;
}

// ---------------------------------------------------------------------------

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ArtifactError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << text;
  if (!out.flush()) throw UsageError("write to '" + path.string() + "' failed");
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

std::string hash_file(const fs::path& path) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(read_text(path))));
  return buf;
}

fs::path manifest_path(const fs::path& artifact) {
  if (fs::is_directory(artifact)) return artifact / "manifest.json";
  return artifact.parent_path() / (artifact.filename().string() + ".manifest.json");
}

std::vector<QubitHamiltonian> load_hamiltonians(const fs::path& path) {
  const nlohmann::json j = read_json(path);
  const std::string kind = j.is_object() ? j.value("kind", "") : "";
  if (kind == "hamiltonian_grid") {
    require_schema(j, kind);
    std::vector<QubitHamiltonian> out;
    try {
      for (const auto& entry : j.at("files"))
        out.push_back(hamiltonian_from_json(read_json(path.parent_path() / entry.at("path").get<std::string>())));
    } catch (const nlohmann::json::exception& e) {
      throw ArtifactError(std::string("malformed grid index: ") + e.what());
    }
    return out;
  }
  return {hamiltonian_from_json(j)};
}

// ---------------------------------------------------------------------------

RunManifest cmd_ham_build(const HamBuildOptions& options) {
  const auto start = Clock::now();
  if (options.distance.has_value() == options.grid.has_value())
    throw UsageError("ham build needs exactly one of --distance or --grid");
  if (options.out.empty()) throw UsageError("ham build needs --out");

  RunManifest m;
  m.command = "ham build";
  if (options.distance) {
    m.config = {{"distance", *options.distance}};
    write_json(options.out, to_json(h2_hamiltonian(*options.distance)));
    m.outputs.push_back(options.out.string());
    finish(m, manifest_path(options.out), start);
    return m;
  }

  const GridSpec& grid = *options.grid;
  m.config = {{"grid", grid.str()}};
  const auto pts = grid.points();
  struct Row {
    std::string file;
    double oracle = 0.0;
    double hf = 0.0;
  };
  std::vector<Row> rows(pts.size());
  fs::create_directories(options.out);
  parallel_for(pts.size(), [&](std::size_t i) {
    const QubitHamiltonian h = h2_hamiltonian(pts[i]);
    char name[32];
    std::snprintf(name, sizeof name, "h2_%04zu.json", i);
    rows[i].file = name;
    write_json(options.out / name, to_json(h));
    rows[i].oracle = exact_ground_energy(h).energy;
    rows[i].hf = energy(h, hartree_fock_state());
  });

  nlohmann::json index = schema_header("hamiltonian_grid");
  index["grid"] = {{"start", grid.start}, {"stop", grid.stop}, {"count", grid.count}};
  index["files"] = nlohmann::json::array();
  std::string curve = csv_header("curve") + "bond_length,oracle_energy,hf_energy\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    index["files"].push_back({{"bond_length", pts[i]}, {"path", rows[i].file}});
    curve += fmt(pts[i]) + "," + fmt(rows[i].oracle) + "," + fmt(rows[i].hf) + "\n";
    m.outputs.push_back((options.out / rows[i].file).string());
  }
  write_json(options.out / "index.json", index);
  write_text(options.out / "curve.csv", curve);
  m.outputs.push_back((options.out / "index.json").string());
  m.outputs.push_back((options.out / "curve.csv").string());
  finish(m, options.out / "manifest.json", start);
  return m;
}

RunManifest cmd_vqe_run(const VqeRunOptions& options) {
  const auto start = Clock::now();
  const int sources = options.hamiltonian.has_value() + options.distance.has_value() + options.grid.has_value();
  if (sources != 1) throw UsageError("vqe run needs exactly one of --hamiltonian, --distance or --grid");
  if (options.out.empty()) throw UsageError("vqe run needs --out");
  if (options.ansatz != "uccsd" && options.ansatz != "su2" && options.ansatz != "latent")
    throw UsageError("unknown ansatz '" + options.ansatz + "' (expected uccsd, su2 or latent)");
  if (options.ansatz == "latent" && !options.qae) throw UsageError("latent mode needs a QAE model (--qae)");
  if (options.ansatz == "latent" && options.optimizer.method != OptimizerMethod::NELDER_MEAD)
    throw UsageError("latent mode uses the staged Nelder-Mead procedure; --optimizer adam is not available");
  if (options.restarts && *options.restarts < 1) throw UsageError("--restarts must be >= 1");
  options.optimizer.validate();

  RunManifest m;
  m.command = "vqe run";
  m.seed = options.optimizer.seed;

  std::vector<QubitHamiltonian> hams;
  if (options.hamiltonian) {
    add_input(m, *options.hamiltonian);
    hams = load_hamiltonians(*options.hamiltonian);
  } else {
    const std::vector<double> pts = options.distance ? std::vector<double>{*options.distance} : options.grid->points();
    hams.resize(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { hams[i] = h2_hamiltonian(pts[i]); });
  }

  MethodResult result;
  result.seed = options.optimizer.seed;
  Circuit circuit(4, 0);
  Circuit pqc(2, 0);
  int restarts = 1;
  if (options.ansatz == "uccsd") {
    result.method = kMethodUccsd;
    circuit = uccsd_h2();
  } else if (options.ansatz == "su2") {
    result.method = kMethodSu2;
    circuit = efficient_su2(4, 3);
    restarts = options.restarts.value_or(1);
  } else {
    result.method = kMethodAeVqe;
    add_input(m, *options.qae);
    const QaeModel qae = qae_model_from_json(read_json(*options.qae));
    pqc = strongly_entangling(2, 1);
    circuit = latent_vqe_circuit(qae, pqc);
    restarts = options.restarts.value_or(20);
  }
  const ResourceCounts rc = resource_counts(circuit);
  result.n_params = rc.n_params;
  result.n_gates = rc.n_gates;
  if (options.ansatz == "latent") {
    result.n_gates = resource_counts(pqc).n_gates;
    result.n_decoder_gates = rc.n_gates - result.n_gates;
  }

  OptimizerConfig opt = options.optimizer;
  opt.initial_step = options.initial_step.value_or(options.ansatz == "uccsd" ? 0.1 : 0.5);
  m.config = {{"ansatz", options.ansatz},
              {"optimizer", to_string(opt.method)},
              {"max_iterations", opt.max_iterations},
              {"tolerance", opt.tolerance},
              {"initial_step", opt.initial_step},
              {"simplex_restarts", opt.simplex_restarts},
              {"learning_rate", opt.learning_rate},
              {"restarts", restarts}};

  const StateVector initial = StateVector::zero(4);
  result.points.resize(hams.size());
  parallel_for(hams.size(), [&](std::size_t i) {
    const QubitHamiltonian& h = hams[i];
    ResultPoint& point = result.points[i];
    point.bond_length = h.bond_length;
    point.oracle_energy = exact_ground_energy(h).energy;
    const std::uint64_t stream = derive_seed(options.optimizer.seed, "vqe/" + options.ansatz + "/" + std::to_string(i));

    if (options.ansatz == "latent") {
      const StagedResult r = optimize_anchor(circuit, h, restarts, stream, options.staged);
      point.energy = r.energy;
      point.params = r.params;
      point.evaluations = r.evaluations;
      return;
    }
    const auto cost = [&](std::span<const double> p) { return energy(h, simulate(circuit, p, initial)); };
    const GradientFunction grad = [&](std::span<const double> p) {
      return parameter_shift_gradient(circuit, h, p, initial);
    };
    Rng rng(stream);
    bool have = false;
    for (int r = 0; r < restarts; ++r) {
      std::vector<double> x(static_cast<std::size_t>(circuit.n_params()), 0.0);
      if (options.ansatz == "su2")
        for (auto& v : x) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const MinimizeResult mr = minimize(cost, x, {}, opt, grad);
      point.evaluations += mr.evaluations;
      if (!have || mr.value < point.energy) {
        point.energy = mr.value;
        point.params = mr.params;
        have = true;
      }
    }
  });

  write_json(options.out, result.to_json());
  m.outputs.push_back(options.out.string());
  finish(m, manifest_path(options.out), start);
  return m;
}

RunManifest cmd_qae_train(const QaeTrainOptions& options) {
  const auto start = Clock::now();
  if (options.out.empty()) throw UsageError("qae train needs --out");
  if (options.bond_lengths.empty()) throw UsageError("qae train needs at least one bond length");
  if (options.restarts < 1) throw UsageError("--restarts must be >= 1");

  RunManifest m;
  m.command = "qae train";
  m.seed = options.seed;
  m.config = {{"bond_lengths", options.bond_lengths},
              {"layers", options.layers},
              {"restarts", options.restarts},
              {"target", options.target}};

  QaeTrainConfig config;
  config.optimizer.restarts = options.restarts;
  config.optimizer.seed = derive_seed(options.seed, "qae");
  config.target_cost = options.target;
  const AnsatzSpec spec{AnsatzFamily::QAE_ENCODER, 4, options.layers, {}};
  const QaeTrainResult result = train_qae(options.bond_lengths, spec, config);

  write_json(options.out, to_json(result.model));
  const fs::path trace_path = with_suffix(options.out, "_trace.csv");
  std::string trace = csv_header("qae_trace") + "iteration,trash_cost\n";
  for (std::size_t i = 0; i < result.trace.size(); ++i) trace += std::to_string(i) + "," + fmt(result.trace[i]) + "\n";
  write_text(trace_path, trace);
  m.outputs = {options.out.string(), trace_path.string()};
  finish(m, manifest_path(options.out), start);
  return m;
}

RunManifest cmd_dataset_generate(const DatasetGenerateOptions& options) {
  const auto start = Clock::now();
  if (options.out.empty()) throw UsageError("dataset generate needs --out");
  if (options.anchor_restarts < 1) throw UsageError("--restarts must be >= 1");
  options.constraint.validate();

  RunManifest m;
  m.command = "dataset generate";
  m.seed = options.seed;
  m.config = {{"grid", options.grid.str()},
              {"anchor_bond_length", options.anchor_bond_length},
              {"alpha", options.constraint.alpha},
              {"gamma", options.constraint.gamma},
              {"restarts", options.anchor_restarts},
              {"sweep_tolerance", options.staged.sweep_tolerance},
              {"max_sweeps", options.staged.max_sweeps}};
  add_input(m, options.qae);
  const QaeModel qae = qae_model_from_json(read_json(options.qae));

  const AnsatzSpec pqc_spec{AnsatzFamily::STRONGLY_ENTANGLING, 2, 1, {}};
  const Circuit pqc = build_ansatz(pqc_spec);
  const Circuit circuit = latent_vqe_circuit(qae, pqc);

  const auto pts = options.grid.points();
  std::vector<GridPoint> grid(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { grid[i] = make_grid_point(pts[i]); });

  std::size_t k = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (std::abs(pts[i] - options.anchor_bond_length) < std::abs(pts[k] - options.anchor_bond_length)) k = i;

  SweepConfig sweep;
  sweep.constraint = options.constraint;
  sweep.staged = options.staged;
  const StagedResult anchor =
      optimize_anchor(circuit, grid[k].hamiltonian, options.anchor_restarts, derive_seed(options.seed, "anchor"), sweep.staged);
  const ParameterDataset ds =
      constrained_sweep(circuit, grid, Anchor{static_cast<int>(k), anchor.params}, sweep, pqc_spec);

  write_text(options.out, dataset_to_csv(ds));

  MethodResult result;
  result.method = kMethodAeVqe;
  result.seed = options.seed;
  result.n_gates = resource_counts(pqc).n_gates;
  result.n_decoder_gates = resource_counts(circuit).n_gates - result.n_gates;
  result.n_params = resource_counts(circuit).n_params;
  int flagged = 0;
  for (const auto& r : ds.records) {
    result.points.push_back(to_result_point(r));
    flagged += r.flagged;
  }
  result.extra = {{"anchor_index", ds.anchor_index},
                  {"anchor_bond_length", pts[k]},
                  {"n_flagged", flagged},
                  {"alpha", options.constraint.alpha},
                  {"gamma", options.constraint.gamma}};
  const fs::path result_path = with_suffix(options.out, "_result.json");
  write_json(result_path, result.to_json());

  m.outputs = {options.out.string(), result_path.string()};
  finish(m, manifest_path(options.out), start);
  return m;
}

RunManifest cmd_nn_train(const NnTrainOptions& options) {
  const auto start = Clock::now();
  if (options.out.empty()) throw UsageError("nn train needs --out");
  options.train.validate();

  RunManifest m;
  m.command = "nn train";
  m.seed = options.train.seed;
  m.config = {{"learning_rate", options.train.learning_rate},
              {"momentum", options.train.momentum},
              {"epochs", options.train.epochs},
              {"batch_size", options.train.batch_size},
              {"train_fraction", options.train.train_fraction},
              {"loss", to_string(options.train.loss)},
              {"hidden", options.train.hidden}};
  add_input(m, options.dataset);
  const std::string text = read_text(options.dataset);
  const ParameterDataset ds = dataset_from_csv(text);

  TrainConfig config = options.train;
  config.seed = derive_seed(options.train.seed, "nn");
  TrainResult tr = train(ds, config);
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  tr.model.dataset_hash = hash;

  std::vector<double> usable;
  for (const auto& r : ds.records)
    if (!r.flagged) usable.push_back(r.bond_length);
  std::vector<double> train_r, test_r;
  for (auto i : tr.train_indices) train_r.push_back(usable[i]);
  for (auto i : tr.test_indices) test_r.push_back(usable[i]);

  nlohmann::json j = to_json(tr.model);
  j["split"] = {{"train_bond_lengths", train_r},
                {"test_bond_lengths", test_r},
                {"train_loss", tr.train_loss},
                {"test_loss", tr.test_loss}};
  write_json(options.out, j);

  const fs::path loss_path = with_suffix(options.out, "_loss.csv");
  std::string loss = csv_header("nn_loss") + "epoch,train_loss\n";
  for (std::size_t i = 0; i < tr.train_loss_trace.size(); ++i)
    loss += std::to_string(i) + "," + fmt(tr.train_loss_trace[i]) + "\n";
  write_text(loss_path, loss);

  m.outputs = {options.out.string(), loss_path.string()};
  finish(m, manifest_path(options.out), start);
  return m;
}

RunManifest cmd_nn_eval(const NnEvalOptions& options) {
  const auto start = Clock::now();
  if (options.out.empty()) throw UsageError("nn eval needs --out");

  RunManifest m;
  m.command = "nn eval";
  m.config = {{"grid", options.grid.str()}};
  add_input(m, options.model);
  add_input(m, options.qae);
  const nlohmann::json model_json = read_json(options.model);
  const MlpModel model = mlp_model_from_json(model_json);
  const QaeModel qae = qae_model_from_json(read_json(options.qae));
  m.seed = model.seed;

  const Circuit pqc = build_ansatz(model.pqc_spec);
  if (pqc.n_params() != model.layer_sizes.back())
    throw ArtifactError("model output width does not match its PQC parameter count");
  const Circuit circuit = latent_vqe_circuit(qae, pqc);

  const auto evaluate = [&](const std::vector<double>& rs) {
    std::vector<EnergyPoint> pts(rs.size());
    std::vector<std::vector<double>> angles(rs.size());
    parallel_for(rs.size(), [&](std::size_t i) {
      angles[i] = predict(model, rs[i]);
      pts[i] = latent_energy(qae, pqc, rs[i], angles[i]);
    });
    return std::make_pair(pts, angles);
  };

  const auto [pts, angles] = evaluate(options.grid.points());
  MethodResult result;
  result.method = kMethodNnAeVqe;
  result.seed = model.seed;
  result.n_gates = resource_counts(pqc).n_gates;
  result.n_decoder_gates = resource_counts(circuit).n_gates - result.n_gates;
  result.n_params = pqc.n_params();
  for (std::size_t i = 0; i < pts.size(); ++i)
    result.points.push_back({pts[i].bond_length, pts[i].energy, pts[i].oracle_energy, angles[i], 1});

  if (model_json.contains("split")) {
    const auto& split = model_json["split"];
    for (const auto& [field, key] : {std::pair{"train_bond_lengths", "in_sample"}, {"test_bond_lengths", "held_out"}}) {
      const auto rs = split.value(field, std::vector<double>{});
      if (rs.empty()) continue;
      const auto evaluated = evaluate(rs).first;
      result.extra[std::string(key) + "_mae"] = mean_absolute_error(evaluated);
      result.extra[std::string(key) + "_points"] = evaluated.size();
    }
  }

  write_json(options.out, result.to_json());
  const fs::path errors_path = with_suffix(options.out, "_errors.csv");
  std::string csv = csv_header("nn_errors") + "bond_length,energy,oracle_energy,error,abs_error\n";
  for (const auto& p : pts)
    csv += fmt(p.bond_length) + "," + fmt(p.energy) + "," + fmt(p.oracle_energy) + "," + fmt(p.error()) + "," +
           fmt(std::abs(p.error())) + "\n";
  write_text(errors_path, csv);

  m.outputs = {options.out.string(), errors_path.string()};
  finish(m, manifest_path(options.out), start);
  return m;
}

RunManifest cmd_report(const ReportOptions& options) {
  const auto start = Clock::now();
  if (options.inputs.empty()) throw UsageError("report needs at least one result file");
  if (options.out.empty()) throw UsageError("report needs --out");

  RunManifest m;
  m.command = "report";
  std::vector<MethodResult> runs;
  std::set<std::string> seen;
  for (const auto& path : options.inputs) {
    add_input(m, path);
    const nlohmann::json j = read_json(path);
    MethodResult r = MethodResult::from_json(j);
    const double stored = j.at("summary").at("mae").get<double>();
    if (std::abs(r.mae() - stored) > 1e-15)
      throw ArtifactError("'" + path.string() + "': stored MAE does not match its per-point errors");
    if (!seen.insert(r.method).second) throw UsageError("method '" + r.method + "' appears in more than one input");
    runs.push_back(std::move(r));
  }

  fs::create_directories(options.out);
  std::string csv = csv_header("report") + "method,mae,n_gates,n_params\n";
  std::vector<std::array<std::string, 4>> cells{{"method", "mae", "n_gates", "n_params"}};
  for (const auto& r : runs) {
    char mae[32];
    std::snprintf(mae, sizeof mae, "%.3e", r.mae());
    csv += r.method + "," + fmt(r.mae()) + "," + std::to_string(r.n_gates) + "," + std::to_string(r.n_params) + "\n";
    cells.push_back({r.method, mae, std::to_string(r.n_gates), std::to_string(r.n_params)});
  }
  std::array<std::size_t, 4> width{};
  for (const auto& row : cells)
    for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());
  std::string table;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t c = 0; c < 4; ++c) {
      const std::string& s = cells[i][c];
      const std::string pad(width[c] - s.size(), ' ');
      table += c == 0 ? s + pad : "  " + pad + s;
    }
    table += "\n";
    if (i == 0) table += std::string(width[0] + width[1] + width[2] + width[3] + 6, '-') + "\n";
  }

  write_text(options.out / "report.csv", csv);
  write_text(options.out / "report.txt", table);
  m.outputs = {(options.out / "report.csv").string(), (options.out / "report.txt").string()};

  const auto emit_dat = [&](const std::string& name, const std::vector<std::pair<double, double>>& rows) {
    std::string dat = "# schema_version: " + std::string(kSchemaVersion) + "\n# kind: curve_data\n# bond_length energy\n";
    for (const auto& [x, y] : rows) dat += fmt(x) + " " + fmt(y) + "\n";
    const fs::path path = options.out / (name + ".dat");
    write_text(path, dat);
    m.outputs.push_back(path.string());
  };
  std::map<double, double> oracle;
  for (const auto& r : runs) {
    std::vector<std::pair<double, double>> rows;
    for (const auto& p : r.points) {
      rows.emplace_back(p.bond_length, p.energy);
      oracle.emplace(p.bond_length, p.oracle_energy);
    }
    emit_dat(r.method, rows);
  }
  emit_dat("oracle", {oracle.begin(), oracle.end()});

  finish(m, options.out / "manifest.json", start);
  return m;
}

} // namespace latentvqe
