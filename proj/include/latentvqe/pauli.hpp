#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace latentvqe {

using cplx = std::complex<double>;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

// A real-weighted Pauli string. ops[k] acts on qubit k, so the textual form
// "IXYZ" puts qubit 0 on the left.
struct PauliString {
  std::vector<Pauli> ops;
  double coeff = 1.0;

  PauliString() = default;
  PauliString(std::vector<Pauli> ops_in, double coeff_in);

  static PauliString parse(std::string_view text, double coeff = 1.0);

  std::size_t n_qubits() const { return ops.size(); }
  std::string label() const;
  bool is_identity() const;

  // Bit masks used by the expectation kernel: x_mask marks X/Y positions,
  // z_mask marks Y/Z positions.
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;
  int y_count() const;
};

// Complex linear combination of Pauli strings keyed by label, closed under
// products. Used to build Jordan-Wigner images of fermionic operators.
class PauliOperator {
public:
  explicit PauliOperator(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  static PauliOperator identity(std::size_t n_qubits, cplx coeff = 1.0);
  static PauliOperator term(std::string_view label, cplx coeff);

  std::size_t n_qubits() const { return n_qubits_; }
  const std::map<std::string, cplx>& terms() const { return terms_; }

  void add(const std::string& label, cplx coeff);

  PauliOperator& operator+=(const PauliOperator& other);
  PauliOperator& operator*=(cplx scale);
  friend PauliOperator operator+(PauliOperator a, const PauliOperator& b) { return a += b; }
  friend PauliOperator operator-(PauliOperator a, const PauliOperator& b);
  friend PauliOperator operator*(const PauliOperator& a, const PauliOperator& b);
  friend PauliOperator operator*(PauliOperator a, cplx s) { return a *= s; }
  friend PauliOperator operator*(cplx s, PauliOperator a) { return a *= s; }

  PauliOperator adjoint() const;

  /// Removes terms whose coefficient magnitude is below `threshold`.
  void prune(double threshold);

private:
  std::size_t n_qubits_;
  std::map<std::string, cplx> terms_;
};

// Jordan-Wigner images: a_p^dagger = (prod_{q<p} Z_q) (X_p - i Y_p) / 2.
PauliOperator jw_creation(std::size_t mode, std::size_t n_qubits);
PauliOperator jw_annihilation(std::size_t mode, std::size_t n_qubits);

} // namespace latentvqe
