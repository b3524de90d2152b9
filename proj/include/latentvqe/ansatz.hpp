#pragma once

#include <map>
#include <string>

#include "json.hpp"
#include "latentvqe/circuit.hpp"

namespace latentvqe {

enum class AnsatzFamily { UCCSD_H2, EFFICIENT_SU2, STRONGLY_ENTANGLING, QAE_ENCODER };

std::string to_string(AnsatzFamily family);
AnsatzFamily ansatz_family_from_string(const std::string& name);

struct AnsatzSpec {
  AnsatzFamily family = AnsatzFamily::STRONGLY_ENTANGLING;
  int n_qubits = 2;
  int reps_or_layers = 1;
  std::map<std::string, std::string> options;

  bool operator==(const AnsatzSpec&) const = default;
};

/// Per layer: U3 on every qubit + range-1 CNOT ring, then U3 on every qubit +
/// range-2 CNOT ring. Two qubits use CNOT(0,1) and CNOT(1,0) as the rings.
Circuit strongly_entangling(int n_qubits, int layers);

/// HF preparation followed by the two singles (spin up, spin down) and the
/// double excitation, each as a product of Pauli-string exponentials.
Circuit uccsd_h2();

/// reps+1 blocks of RY then RZ on every qubit, with full CNOT entanglement
/// between blocks.
Circuit efficient_su2(int n_qubits, int reps);

Circuit qae_encoder(int n_qubits, int layers = 2);

Circuit build_ansatz(const AnsatzSpec& spec);
void validate(const AnsatzSpec& spec);

/// Circuit JSON with the spec embedded under "ansatz".
nlohmann::json to_json(const AnsatzSpec& spec);
AnsatzSpec ansatz_spec_from_json(const nlohmann::json& j);

/// exp(-i angle * P) appended as basis change + CNOT staircase + RZ. `angle`
/// is the half RZ angle, so pass Angle::param(slot, c) for exp(-i c p P).
void append_pauli_exponential(Circuit& circuit, const std::string& pauli, Angle angle);

} // namespace latentvqe
