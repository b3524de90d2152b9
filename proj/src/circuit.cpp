#include "latentvqe/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latentvqe {

namespace {

void require_finite(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("gate angle must be finite");
}

} // namespace

std::string to_string(GateKind kind) {
  switch (kind) {
  case GateKind::U3: return "U3";
  case GateKind::U1: return "U1";
  case GateKind::RY: return "RY";
  case GateKind::RZ: return "RZ";
  case GateKind::H: return "H";
  case GateKind::X: return "X";
  case GateKind::CNOT: return "CNOT";
  }
  return "?";
}

GateKind gate_kind_from_string(const std::string& name) {
  for (GateKind k : {GateKind::U3, GateKind::U1, GateKind::RY, GateKind::RZ, GateKind::H, GateKind::X,
                     GateKind::CNOT}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown gate kind '" + name + "'");
}

int angle_count(GateKind kind) {
  switch (kind) {
  case GateKind::U3: return 3;
  case GateKind::U1:
  case GateKind::RY:
  case GateKind::RZ: return 1;
  default: return 0;
  }
}

bool is_two_qubit(GateKind kind) { return kind == GateKind::CNOT; }

std::vector<int> Gate::param_slots() const {
  std::vector<int> out;
  out.reserve(angles.size());
  for (const Angle& a : angles) out.push_back(a.slot);
  return out;
}

bool Gate::is_parameterized() const {
  return std::any_of(angles.begin(), angles.end(), [](const Angle& a) { return a.is_free(); });
}

Circuit::Circuit(int n_qubits, int n_params) : n_qubits_(n_qubits), n_params_(n_params) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw std::invalid_argument("circuit qubit count out of range");
  if (n_params < 0) throw std::invalid_argument("negative parameter count");
}

int Circuit::new_param() { return n_params_++; }

void Circuit::add(Gate gate) {
  const std::size_t want_targets = is_two_qubit(gate.kind) ? 2 : 1;
  if (gate.targets.size() != want_targets) throw std::invalid_argument(to_string(gate.kind) + ": wrong target count");
  if (gate.angles.size() != static_cast<std::size_t>(angle_count(gate.kind)))
    throw std::invalid_argument(to_string(gate.kind) + ": wrong angle count");
  for (int t : gate.targets) {
    if (t < 0 || t >= n_qubits_) throw std::invalid_argument(to_string(gate.kind) + ": target out of range");
  }
  if (want_targets == 2 && gate.targets[0] == gate.targets[1])
    throw std::invalid_argument("CNOT control and target must differ");
  for (const Angle& a : gate.angles) {
    if (a.slot >= n_params_) throw std::invalid_argument("parameter slot out of range");
    require_finite(a.scale);
    require_finite(a.offset);
  }
  gates_.push_back(std::move(gate));
}

void Circuit::add_u3(int q, Angle theta, Angle phi, Angle lam) { add({GateKind::U3, {q}, {theta, phi, lam}}); }
void Circuit::add_u1(int q, Angle lam) { add({GateKind::U1, {q}, {lam}}); }
void Circuit::add_ry(int q, Angle theta) { add({GateKind::RY, {q}, {theta}}); }
void Circuit::add_rz(int q, Angle lam) { add({GateKind::RZ, {q}, {lam}}); }
void Circuit::add_h(int q) { add({GateKind::H, {q}, {}}); }
void Circuit::add_x(int q) { add({GateKind::X, {q}, {}}); }
void Circuit::add_cnot(int control, int target) { add({GateKind::CNOT, {control, target}, {}}); }

void Circuit::validate() const {
  std::vector<bool> used(static_cast<std::size_t>(n_params_), false);
  for (const Gate& g : gates_) {
    for (const Angle& a : g.angles) {
      if (a.slot >= n_params_) throw std::invalid_argument("parameter slot out of range");
      if (a.slot >= 0) used[static_cast<std::size_t>(a.slot)] = true;
    }
    for (int t : g.targets) {
      if (t < 0 || t >= n_qubits_) throw std::invalid_argument("gate target out of range");
    }
  }
  if (std::find(used.begin(), used.end(), false) != used.end())
    throw std::invalid_argument("circuit declares a parameter slot no gate references");
}

Mat2 u3_matrix(double theta, double phi, double lam) {
  require_finite(theta);
  require_finite(phi);
  require_finite(lam);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {cplx{c, 0.0}, -std::polar(s, lam), std::polar(s, phi), std::polar(c, phi + lam)};
}

Mat2 u1_matrix(double lam) {
  require_finite(lam);
  return {1.0, 0.0, 0.0, std::polar(1.0, lam)};
}

Mat2 ry_matrix(double theta) {
  require_finite(theta);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {c, -s, s, c};
}

Mat2 rz_matrix(double lam) {
  require_finite(lam);
  return {std::polar(1.0, -lam / 2.0), 0.0, 0.0, std::polar(1.0, lam / 2.0)};
}

Mat2 hadamard_matrix() {
  const double r = 1.0 / std::sqrt(2.0);
  return {r, r, r, -r};
}

Mat2 pauli_x_matrix() { return {0.0, 1.0, 1.0, 0.0}; }

Mat2 gate_matrix(GateKind kind, std::span<const double> a) {
  switch (kind) {
  case GateKind::U3: return u3_matrix(a[0], a[1], a[2]);
  case GateKind::U1: return u1_matrix(a[0]);
  case GateKind::RY: return ry_matrix(a[0]);
  case GateKind::RZ: return rz_matrix(a[0]);
  case GateKind::H: return hadamard_matrix();
  case GateKind::X: return pauli_x_matrix();
  case GateKind::CNOT: break;
  }
  throw std::invalid_argument("gate_matrix: not a single-qubit gate");
}

StateVector simulate(const Circuit& circuit, std::span<const double> params, const StateVector& initial,
                     std::optional<AngleShift> shift) {
  if (params.size() != static_cast<std::size_t>(circuit.n_params()))
    throw std::invalid_argument("parameter vector has " + std::to_string(params.size()) + " entries, circuit expects " +
                                std::to_string(circuit.n_params()));
  if (initial.n_qubits() != circuit.n_qubits()) throw std::invalid_argument("initial state qubit count mismatch");

  StateVector state = initial;
  double angles[3];
  const auto& gates = circuit.gates();
  for (std::size_t gi = 0; gi < gates.size(); ++gi) {
    const Gate& g = gates[gi];
    switch (g.kind) {
    case GateKind::CNOT: state.apply_cnot(g.targets[0], g.targets[1]); break;
    case GateKind::X: state.apply_x(g.targets[0]); break;
    default: {
      for (std::size_t k = 0; k < g.angles.size(); ++k) angles[k] = g.angles[k].value(params);
      if (shift && shift->gate == gi) angles[shift->angle] += shift->delta;
      state.apply_1q(gate_matrix(g.kind, std::span<const double>(angles, g.angles.size())), g.targets[0]);
    }
    }
  }
  return state;
}

Circuit inverse(const Circuit& circuit) {
  Circuit out(circuit.n_qubits(), circuit.n_params());
  const auto& gates = circuit.gates();
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    Gate g = *it;
    switch (g.kind) {
    case GateKind::U3:
      // U3(t, p, l)^dagger = U3(-t, -l, -p)
      g.angles = {g.angles[0].negated(), g.angles[2].negated(), g.angles[1].negated()};
      break;
    case GateKind::U1:
    case GateKind::RY:
    case GateKind::RZ: g.angles[0] = g.angles[0].negated(); break;
    default: break;
    }
    out.add(std::move(g));
  }
  return out;
}

Circuit freeze(const Circuit& circuit, std::span<const double> params) {
  if (params.size() != static_cast<std::size_t>(circuit.n_params()))
    throw std::invalid_argument("freeze: parameter vector length mismatch");
  Circuit out(circuit.n_qubits(), 0);
  for (Gate g : circuit.gates()) {
    for (Angle& a : g.angles) a = Angle::fixed(a.value(params));
    out.add(std::move(g));
  }
  return out;
}

void append(Circuit& base, const Circuit& other, std::span<const int> qubit_map, int param_offset) {
  if (qubit_map.size() != static_cast<std::size_t>(other.n_qubits()))
    throw std::invalid_argument("append: qubit map size must equal the appended circuit's qubit count");
  while (base.n_params() < param_offset + other.n_params()) base.new_param();
  for (Gate g : other.gates()) {
    for (int& t : g.targets) t = qubit_map[static_cast<std::size_t>(t)];
    for (Angle& a : g.angles) {
      if (a.is_free()) a.slot += param_offset;
    }
    base.add(std::move(g));
  }
}

ResourceCounts resource_counts(const Circuit& circuit) {
  ResourceCounts rc;
  rc.n_gates = static_cast<int>(circuit.gates().size());
  rc.n_params = circuit.n_params();
  for (const Gate& g : circuit.gates()) rc.n_two_qubit += is_two_qubit(g.kind) ? 1 : 0;
  return rc;
}

nlohmann::json to_json(const Circuit& circuit) {
  nlohmann::json gates = nlohmann::json::array();
  for (const Gate& g : circuit.gates()) {
    nlohmann::json jg;
    jg["kind"] = to_string(g.kind);
    jg["targets"] = g.targets;
    jg["slots"] = g.param_slots();
    if (!g.angles.empty()) {
      std::vector<double> scales, offsets;
      for (const Angle& a : g.angles) {
        scales.push_back(a.scale);
        offsets.push_back(a.offset);
      }
      jg["scales"] = scales;
      jg["offsets"] = offsets;
    }
    gates.push_back(std::move(jg));
  }
  return {{"n_qubits", circuit.n_qubits()}, {"n_params", circuit.n_params()}, {"gates", std::move(gates)}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
  Circuit c(j.at("n_qubits").get<int>(), j.at("n_params").get<int>());
  for (const auto& jg : j.at("gates")) {
    Gate g{gate_kind_from_string(jg.at("kind").get<std::string>()), jg.at("targets").get<std::vector<int>>(), {}};
    const auto slots = jg.at("slots").get<std::vector<int>>();
    std::vector<double> scales(slots.size(), 1.0), offsets(slots.size(), 0.0);
    if (jg.contains("scales")) scales = jg.at("scales").get<std::vector<double>>();
    if (jg.contains("offsets")) offsets = jg.at("offsets").get<std::vector<double>>();
    if (scales.size() != slots.size() || offsets.size() != slots.size())
      throw std::invalid_argument("circuit JSON: angle arrays have inconsistent lengths");
    for (std::size_t k = 0; k < slots.size(); ++k) g.angles.push_back({slots[k], scales[k], offsets[k]});
    c.add(std::move(g));
  }
  c.validate();
  return c;
}

} // namespace latentvqe
