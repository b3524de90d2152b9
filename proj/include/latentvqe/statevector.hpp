#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "latentvqe/pauli.hpp"

namespace latentvqe {

inline constexpr int kMaxQubits = 12;

using Mat2 = std::array<cplx, 4>;  // row-major
using Mat4 = std::array<cplx, 16>; // row-major, local index = 2*bit(t0) + bit(t1)

// Dense pure state. Qubit 0 is the least-significant bit of the basis index.
class StateVector {
public:
  StateVector() = default;
  StateVector(int n_qubits, std::vector<cplx> amplitudes);

  static StateVector zero(int n_qubits);
  static StateVector basis(int n_qubits, std::size_t index);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> amplitudes() { return amps_; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  cplx& operator[](std::size_t i) { return amps_[i]; }

  double norm() const;
  void normalize();

  // Unchecked kernels used by the circuit simulator.
  void apply_1q(const Mat2& m, int target);
  void apply_2q(const Mat4& m, int t0, int t1);
  void apply_cnot(int control, int target);
  void apply_x(int target);

private:
  int n_qubits_ = 0;
  std::vector<cplx> amps_;
};

StateVector zero_state(int n_qubits);

/// Applies a 2x2 or 4x4 unitary to `targets`. Rejects non-unitary matrices
/// (tolerance 1e-10) and duplicate or out-of-range targets.
StateVector apply_gate(StateVector state, std::span<const cplx> unitary, std::span<const int> targets);

/// Exact sum_k c_k <psi|P_k|psi>.
double expectation(const StateVector& state, std::span<const PauliString> terms);
double expectation(const StateVector& state, const PauliString& term);

/// <a|b>
cplx overlap(const StateVector& a, const StateVector& b);

// Reduced density matrix over a subset of qubits. Local qubit k of the matrix
// corresponds to keep[k] and is bit k of the row/column index.
struct DensityMatrix {
  int n_qubits = 0;
  std::vector<cplx> entries; // row-major 2^n x 2^n

  std::size_t dim() const { return std::size_t{1} << n_qubits; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return entries[r * dim() + c]; }
  cplx& operator()(std::size_t r, std::size_t c) { return entries[r * dim() + c]; }
  cplx trace() const;
};

DensityMatrix partial_trace(const StateVector& state, std::span<const int> keep);

/// <0...0|rho|0...0>
double fidelity_with_zero(const DensityMatrix& rho);

/// Builds the 2N+1 qubit SWAP-test circuit on |0>|a>|b> (ancilla is qubit 0,
/// register a on qubits 1..N, register b on N+1..2N) and returns the exact
/// probability of reading the ancilla as 0.
double swap_test_probability_zero(const StateVector& a, const StateVector& b);

bool is_unitary(std::span<const cplx> m, std::size_t dim, double tol);

} // namespace latentvqe
