#include "latentvqe/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace latentvqe {

namespace {

void add_u3_layer(Circuit& c) {
  for (int q = 0; q < c.n_qubits(); ++q) {
    const int t = c.new_param();
    const int p = c.new_param();
    const int l = c.new_param();
    c.add_u3(q, Angle::param(t), Angle::param(p), Angle::param(l));
  }
}

void add_ring(Circuit& c, int range) {
  const int n = c.n_qubits();
  if (n == 2) {
    if (range == 1) c.add_cnot(0, 1);
    else c.add_cnot(1, 0);
    return;
  }
  for (int i = 0; i < n; ++i) c.add_cnot(i, (i + range) % n);
}

// Anti-Hermitian generator (excitation - h.c.) mapped to qubits; each term is
// i * b * P with real b.
PauliOperator excitation_generator(const std::vector<std::size_t>& to, const std::vector<std::size_t>& from) {
  constexpr std::size_t n = 4;
  PauliOperator op = PauliOperator::identity(n);
  for (std::size_t p : to) op = op * jw_creation(p, n);
  for (auto it = from.rbegin(); it != from.rend(); ++it) op = op * jw_annihilation(*it, n);
  PauliOperator gen = op - op.adjoint();
  gen.prune(1e-12);
  return gen;
}

void append_excitation(Circuit& c, const PauliOperator& generator, int slot) {
  // exp(theta * sum_j i b_j P_j) = prod_j exp(-i (-b_j theta) P_j); terms commute.
  for (const auto& [label, coeff] : generator.terms()) {
    if (std::abs(coeff.real()) > 1e-12) throw std::logic_error("excitation generator is not anti-Hermitian");
    append_pauli_exponential(c, label, Angle::param(slot, -coeff.imag()));
  }
}

} // namespace

std::string to_string(AnsatzFamily family) {
  switch (family) {
  case AnsatzFamily::UCCSD_H2: return "UCCSD_H2";
  case AnsatzFamily::EFFICIENT_SU2: return "EFFICIENT_SU2";
  case AnsatzFamily::STRONGLY_ENTANGLING: return "STRONGLY_ENTANGLING";
  case AnsatzFamily::QAE_ENCODER: return "QAE_ENCODER";
  }
  return "?";
}

AnsatzFamily ansatz_family_from_string(const std::string& name) {
  for (auto f : {AnsatzFamily::UCCSD_H2, AnsatzFamily::EFFICIENT_SU2, AnsatzFamily::STRONGLY_ENTANGLING,
                 AnsatzFamily::QAE_ENCODER}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown ansatz family '" + name + "'");
}

void append_pauli_exponential(Circuit& c, const std::string& pauli, Angle angle) {
  if (pauli.size() != static_cast<std::size_t>(c.n_qubits())) throw std::invalid_argument("Pauli label length mismatch");
  constexpr double half_pi = std::numbers::pi / 2.0;
  std::vector<int> support;
  for (int q = 0; q < c.n_qubits(); ++q)
    if (pauli[static_cast<std::size_t>(q)] != 'I') support.push_back(q);
  if (support.empty()) return; // global phase

  // B with B^dagger Z B = P on each qubit: H for X, H * S^dagger for Y.
  for (int q : support) {
    const char p = pauli[static_cast<std::size_t>(q)];
    if (p == 'X') c.add_h(q);
    if (p == 'Y') {
      c.add_u1(q, Angle::fixed(-half_pi));
      c.add_h(q);
    }
  }
  for (std::size_t k = 0; k + 1 < support.size(); ++k) c.add_cnot(support[k], support[k + 1]);
  c.add_rz(support.back(), Angle{angle.slot, 2.0 * angle.scale, 2.0 * angle.offset});
  for (std::size_t k = support.size() - 1; k > 0; --k) c.add_cnot(support[k - 1], support[k]);
  for (int q : support) {
    const char p = pauli[static_cast<std::size_t>(q)];
    if (p == 'X') c.add_h(q);
    if (p == 'Y') {
      c.add_h(q);
      c.add_u1(q, Angle::fixed(half_pi));
    }
  }
}

Circuit strongly_entangling(int n_qubits, int layers) {
  if (n_qubits < 2) throw std::invalid_argument("strongly entangling ansatz needs at least 2 qubits");
  if (layers < 1) throw std::invalid_argument("strongly entangling ansatz needs at least 1 layer");
  Circuit c(n_qubits);
  for (int l = 0; l < layers; ++l) {
    add_u3_layer(c);
    add_ring(c, 1);
    add_u3_layer(c);
    add_ring(c, 2);
  }
  return c;
}

Circuit uccsd_h2() {
  Circuit c(4);
  c.add_x(0);
  c.add_x(2);
  const int t_up = c.new_param();
  const int t_down = c.new_param();
  const int t_double = c.new_param();
  append_excitation(c, excitation_generator({1}, {0}), t_up);
  append_excitation(c, excitation_generator({3}, {2}), t_down);
  append_excitation(c, excitation_generator({1, 3}, {0, 2}), t_double);
  return c;
}

Circuit efficient_su2(int n_qubits, int reps) {
  if (n_qubits < 2) throw std::invalid_argument("efficient SU2 needs at least 2 qubits");
  if (reps < 1) throw std::invalid_argument("efficient SU2 needs at least 1 repetition");
  Circuit c(n_qubits);
  for (int block = 0; block <= reps; ++block) {
    if (block > 0) {
      for (int i = 0; i < n_qubits; ++i)
        for (int j = i + 1; j < n_qubits; ++j) c.add_cnot(i, j);
    }
    for (int q = 0; q < n_qubits; ++q) c.add_ry(q, Angle::param(c.new_param()));
    for (int q = 0; q < n_qubits; ++q) c.add_rz(q, Angle::param(c.new_param()));
  }
  return c;
}

Circuit qae_encoder(int n_qubits, int layers) { return strongly_entangling(n_qubits, layers); }

void validate(const AnsatzSpec& spec) {
  if (spec.family == AnsatzFamily::UCCSD_H2 && spec.n_qubits != 4)
    throw std::invalid_argument("UCCSD_H2 requires 4 qubits");
  if (spec.family != AnsatzFamily::UCCSD_H2 && spec.n_qubits < 2)
    throw std::invalid_argument(to_string(spec.family) + " requires at least 2 qubits");
  if (spec.family != AnsatzFamily::UCCSD_H2 && spec.reps_or_layers < 1)
    throw std::invalid_argument("reps/layers must be >= 1");
}

Circuit build_ansatz(const AnsatzSpec& spec) {
  validate(spec);
  switch (spec.family) {
  case AnsatzFamily::UCCSD_H2: return uccsd_h2();
  case AnsatzFamily::EFFICIENT_SU2: return efficient_su2(spec.n_qubits, spec.reps_or_layers);
  case AnsatzFamily::STRONGLY_ENTANGLING: return strongly_entangling(spec.n_qubits, spec.reps_or_layers);
  case AnsatzFamily::QAE_ENCODER: return qae_encoder(spec.n_qubits, spec.reps_or_layers);
  }
  throw std::logic_error("unreachable");
}

nlohmann::json to_json(const AnsatzSpec& spec) {
  return {{"family", to_string(spec.family)},
          {"n_qubits", spec.n_qubits},
          {"reps_or_layers", spec.reps_or_layers},
          {"options", spec.options}};
}

AnsatzSpec ansatz_spec_from_json(const nlohmann::json& j) {
  AnsatzSpec s;
  s.family = ansatz_family_from_string(j.at("family").get<std::string>());
  s.n_qubits = j.at("n_qubits").get<int>();
  s.reps_or_layers = j.at("reps_or_layers").get<int>();
  if (j.contains("options")) s.options = j.at("options").get<std::map<std::string, std::string>>();
  validate(s);
  return s;
}

} // namespace latentvqe
