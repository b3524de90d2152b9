#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>

#include "latentvqe/errors.hpp"
#include "latentvqe/hamiltonian.hpp"
#include "latentvqe/workflow.hpp"
#include "oracles.hpp"

using namespace latentvqe;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "latentvqe_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LATENTVQE_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string name = e.path().filename().string();
    if (name.find("manifest") != std::string::npos) continue;
    files[fs::relative(e.path(), dir).string()] = read_text(e.path());
  }
  return files;
}

void run_mini_pipeline(const fs::path& d) {
  const std::string dir = d.string();
  REQUIRE(run_cli("qae train --seed 5 --out " + dir + "/qae.json") == 0);
  REQUIRE(run_cli("dataset generate --qae " + dir + "/qae.json --grid 0.5:1.5:24 --restarts 3 --seed 5 --out " +
                  dir + "/dataset.csv") == 0);
  REQUIRE(run_cli("nn train --dataset " + dir + "/dataset.csv --epochs 200 --seed 5 --out " + dir + "/nn.json") == 0);
  REQUIRE(run_cli("nn eval --model " + dir + "/nn.json --qae " + dir + "/qae.json --grid 0.5:1.5:5 --out " + dir +
                  "/nn_result.json") == 0);
  REQUIRE(run_cli("vqe run --ansatz uccsd --distance 0.735 --out " + dir + "/uccsd.json") == 0);
  REQUIRE(run_cli("report " + dir + "/uccsd.json " + dir + "/dataset_result.json " + dir + "/nn_result.json --out " +
                  dir + "/report") == 0);
}

} // namespace

TEST_CASE("grid specs") {
  const GridSpec g = GridSpec::parse("0.3:2.85:100");
  const auto pts = g.points();
  REQUIRE(pts.size() == 100);
  CHECK(pts.front() == 0.3);
  CHECK(pts.back() == 2.85);
  CHECK(std::abs(pts[1] - pts[0] - 2.55 / 99) < 1e-15);
  CHECK(GridSpec::parse(g.str()).points() == pts);
  CHECK_THROWS_AS(GridSpec::parse("0.3:2.85"), UsageError);
  CHECK_THROWS_AS(GridSpec::parse("a:b:c"), UsageError);
  CHECK_THROWS_AS(GridSpec::parse("2.0:1.0:5"), UsageError);
  CHECK_THROWS_AS(GridSpec::parse("0.3:2.85:1"), UsageError);
}

TEST_CASE("method results round trip and recompute their MAE") {
  MethodResult r;
  r.method = kMethodUccsd;
  r.points = {{0.5, -1.0, -1.1, {0.1}, 10}, {0.6, -1.2, -1.2, {0.2}, 12}};
  r.n_gates = 3;
  r.n_params = 1;
  CHECK(std::abs(r.mae() - 0.05) < 1e-15);
  const MethodResult back = MethodResult::from_json(nlohmann::json::parse(r.to_json().dump()));
  CHECK(back.method == r.method);
  CHECK(back.points.size() == 2);
  CHECK(back.mae() == r.mae());
}

TEST_CASE("ham build writes one file per grid point") {
  const fs::path d = scratch("ham");
  const RunManifest m = cmd_ham_build({std::nullopt, GridSpec{}, d / "grid"});
  int json_files = 0;
  for (const auto& e : fs::directory_iterator(d / "grid")) json_files += e.path().filename().string().rfind("h2_", 0) == 0;
  CHECK(json_files == 100);
  CHECK(fs::exists(d / "grid" / "index.json"));
  CHECK(fs::exists(d / "grid" / "curve.csv"));
  CHECK(fs::exists(manifest_path(d / "grid")));
  const auto hs = load_hamiltonians(d / "grid" / "index.json");
  REQUIRE(hs.size() == 100);
  const auto pts = GridSpec{}.points();
  for (std::size_t i = 0; i < hs.size(); i += 11) {
    CHECK(hs[i].bond_length == pts[i]);
    CHECK(std::abs(exact_ground_energy(hs[i]).energy - oracle::h2_reference(pts[i]).fci) < 1e-8);
  }
  CHECK(m.command == "ham build");

  cmd_ham_build({0.735, std::nullopt, d / "single.json"});
  const nlohmann::json j = read_json(d / "single.json");
  CHECK(j.at("schema_version") == "latentvqe/1");
  CHECK(j.at("bond_length_angstrom") == 0.735);
  CHECK(j.at("n_qubits") == 4);
  CHECK(j.contains("terms"));
  const nlohmann::json manifest = read_json(manifest_path(d / "single.json"));
  CHECK(manifest.at("command") == "ham build");
  CHECK(manifest.contains("outputs"));
}

TEST_CASE("vqe run from a Hamiltonian file") {
  const fs::path d = scratch("vqe");
  cmd_ham_build({0.9, std::nullopt, d / "h.json"});
  VqeRunOptions o;
  o.hamiltonian = d / "h.json";
  o.out = d / "result.json";
  cmd_vqe_run(o);
  const MethodResult r = MethodResult::from_json(read_json(d / "result.json"));
  REQUIRE(r.points.size() == 1);
  CHECK(std::abs(r.points[0].energy - oracle::h2_reference(0.9).fci) < 1e-6);
  CHECK(r.n_params == 3);

  VqeRunOptions both = o;
  both.distance = 0.9;
  CHECK_THROWS_AS(cmd_vqe_run(both), UsageError);
  VqeRunOptions latent;
  latent.ansatz = "latent";
  latent.distance = 0.9;
  latent.out = d / "latent.json";
  CHECK_THROWS_AS(cmd_vqe_run(latent), UsageError);
}

TEST_CASE("CLI exit codes") {
  const fs::path d = scratch("exit");
  const std::string dir = d.string();
  CHECK(run_cli("ham build --distance 0.735 --out " + dir + "/h.json") == 0);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("ham build --out " + dir + "/x.json") == 2);
  CHECK(run_cli("ham build --distance 0.735 --grid 0.3:1:5 --out " + dir + "/x.json") == 2);
  CHECK(run_cli("vqe run --ansatz qaoa --distance 0.7 --out " + dir + "/x.json") == 2);
  CHECK(run_cli("report --out " + dir + "/r") == 2);
  CHECK(run_cli("vqe run --hamiltonian " + dir + "/missing.json --out " + dir + "/x.json") == 3);

  nlohmann::json wrong = read_json(d / "h.json");
  wrong["schema_version"] = "latentvqe/0";
  write_json(d / "wrong.json", wrong);
  CHECK(run_cli("vqe run --hamiltonian " + dir + "/wrong.json --out " + dir + "/x.json") == 3);
  write_text(d / "garbage.json", "{not json");
  CHECK(run_cli("report " + dir + "/garbage.json --out " + dir + "/r") == 3);
  CHECK(run_cli("ham build --distance 9.0 --out " + dir + "/far.json") == 2);
}

TEST_CASE("report rejects duplicates and tampered results") {
  const fs::path d = scratch("report");
  VqeRunOptions o;
  o.distance = 0.735;
  o.out = d / "u.json";
  cmd_vqe_run(o);
  CHECK_THROWS_AS(cmd_report({{d / "u.json", d / "u.json"}, d / "r"}), UsageError);
  CHECK_THROWS_AS(cmd_report({{}, d / "r"}), UsageError);
  nlohmann::json j = read_json(d / "u.json");
  j["summary"]["mae"] = 0.5;
  write_json(d / "tampered.json", j);
  CHECK_THROWS_AS(cmd_report({{d / "tampered.json"}, d / "r"}), ArtifactError);

  cmd_report({{d / "u.json"}, d / "r"});
  const std::string csv = read_text(d / "r" / "report.csv");
  CHECK(csv.find("\nmethod,mae,n_gates,n_params\n") != std::string::npos);
  CHECK(csv.find("uccsd,") != std::string::npos);
  CHECK(fs::exists(d / "r" / "uccsd.dat"));
  CHECK(fs::exists(d / "r" / "oracle.dat"));
}

TEST_CASE("pipeline reruns are byte identical") {
  const fs::path d = scratch("rerun");
  run_mini_pipeline(d);
  const auto first = snapshot(d);
  CHECK(first.count("report/report.csv") == 1);
  CHECK(first.count("nn_loss.csv") == 1);
  CHECK(first.count("qae_trace.csv") == 1);
  CHECK(first.count("nn_result_errors.csv") == 1);
  run_mini_pipeline(d);
  const auto second = snapshot(d);
  CHECK(first.size() == second.size());
  for (const auto& [name, text] : first) {
    INFO(name);
    CHECK(second.count(name) == 1);
    if (second.count(name)) CHECK(second.at(name) == text);
  }

  const nlohmann::json manifest = read_json(manifest_path(d / "nn.json"));
  CHECK(manifest.at("input_hashes").size() == 1);
  CHECK(manifest.at("seed") == 5);

  const ParameterDataset ds = dataset_from_csv(read_text(d / "dataset.csv"));
  CHECK(ds.records.size() == 24);
  const nlohmann::json model = read_json(d / "nn.json");
  CHECK(model.at("dataset_hash") == hash_file(d / "dataset.csv"));
}
