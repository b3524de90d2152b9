#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "latentvqe/statevector.hpp"

namespace latentvqe {

enum class GateKind { U3, U1, RY, RZ, H, X, CNOT };

std::string to_string(GateKind kind);
GateKind gate_kind_from_string(const std::string& name);

/// Number of angles a gate kind carries (U3: theta, phi, lambda).
int angle_count(GateKind kind);
bool is_two_qubit(GateKind kind);

// An angle is `scale * params[slot] + offset`, or just `offset` when the angle
// is fixed (slot < 0). Affine slots let several gates share one parameter with
// different multipliers, and let a circuit be daggered or frozen without
// touching the parameter vector.
struct Angle {
  int slot = -1;
  double scale = 1.0;
  double offset = 0.0;

  static Angle param(int slot, double scale = 1.0) { return {slot, scale, 0.0}; }
  static Angle fixed(double value) { return {-1, 0.0, value}; }

  bool is_free() const { return slot >= 0; }
  double value(std::span<const double> params) const {
    return is_free() ? scale * params[static_cast<std::size_t>(slot)] + offset : offset;
  }
  Angle negated() const { return {slot, -scale, -offset}; }

  bool operator==(const Angle&) const = default;
};

struct Gate {
  GateKind kind;
  std::vector<int> targets; // CNOT: {control, target}
  std::vector<Angle> angles;

  /// Slots referenced by this gate, in angle order (fixed angles report -1).
  std::vector<int> param_slots() const;
  bool is_parameterized() const;

  bool operator==(const Gate&) const = default;
};

class Circuit {
public:
  Circuit() = default;
  explicit Circuit(int n_qubits, int n_params = 0);

  int n_qubits() const { return n_qubits_; }
  int n_params() const { return n_params_; }
  const std::vector<Gate>& gates() const { return gates_; }

  /// Reserves a fresh parameter slot and returns its index.
  int new_param();

  void add(Gate gate);
  void add_u3(int q, Angle theta, Angle phi, Angle lam);
  void add_u1(int q, Angle lam);
  void add_ry(int q, Angle theta);
  void add_rz(int q, Angle lam);
  void add_h(int q);
  void add_x(int q);
  void add_cnot(int control, int target);

  /// Throws std::invalid_argument unless every slot in [0, n_params) is used
  /// and every reference is in range.
  void validate() const;

  bool operator==(const Circuit&) const = default;

private:
  int n_qubits_ = 0;
  int n_params_ = 0;
  std::vector<Gate> gates_;
};

Mat2 u3_matrix(double theta, double phi, double lam);
Mat2 u1_matrix(double lam);
Mat2 ry_matrix(double theta); // exp(-i theta Y / 2)
Mat2 rz_matrix(double lam);   // exp(-i lam Z / 2)
Mat2 hadamard_matrix();
Mat2 pauli_x_matrix();

/// Single-qubit matrix of `gate` at the given angle values.
Mat2 gate_matrix(GateKind kind, std::span<const double> angles);

// Angle override for one gate, used by shift-rule differentiation.
struct AngleShift {
  std::size_t gate = 0;
  std::size_t angle = 0;
  double delta = 0.0;
};

StateVector simulate(const Circuit& circuit, std::span<const double> params, const StateVector& initial,
                     std::optional<AngleShift> shift = std::nullopt);

/// Gates in reverse order, each daggered. Angles are negated in place (and
/// U3's phi/lambda swapped) so the inverse consumes the same parameter vector
/// unchanged.
Circuit inverse(const Circuit& circuit);

/// Copy with every angle bound to its value under `params`; the result has no
/// free parameters.
Circuit freeze(const Circuit& circuit, std::span<const double> params);

/// Appends `other` to `base`, mapping other's qubit k to qubit_map[k] and its
/// slot s to s + param_offset. base.n_params grows to cover the new slots.
void append(Circuit& base, const Circuit& other, std::span<const int> qubit_map, int param_offset);

struct ResourceCounts {
  int n_gates = 0;
  int n_params = 0;
  int n_two_qubit = 0;
};

ResourceCounts resource_counts(const Circuit& circuit);

nlohmann::json to_json(const Circuit& circuit);
Circuit circuit_from_json(const nlohmann::json& j);

} // namespace latentvqe
