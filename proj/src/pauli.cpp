#include "latentvqe/pauli.hpp"

#include <cmath>
#include <stdexcept>

namespace latentvqe {

namespace {

struct Product {
  cplx phase;
  char op;
};

Product multiply(char a, char b) {
  if (a == 'I') return {1.0, b};
  if (b == 'I') return {1.0, a};
  if (a == b) return {1.0, 'I'};
  const cplx i{0.0, 1.0};
  // Cyclic order X -> Y -> Z -> X gives +i.
  if ((a == 'X' && b == 'Y')) return {i, 'Z'};
  if ((a == 'Y' && b == 'Z')) return {i, 'X'};
  if ((a == 'Z' && b == 'X')) return {i, 'Y'};
  if ((a == 'Y' && b == 'X')) return {-i, 'Z'};
  if ((a == 'Z' && b == 'Y')) return {-i, 'X'};
  return {-i, 'Y'}; // X * Z
}

} // namespace

char to_char(Pauli p) {
  switch (p) {
  case Pauli::I: return 'I';
  case Pauli::X: return 'X';
  case Pauli::Y: return 'Y';
  case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
  case 'I': return Pauli::I;
  case 'X': return Pauli::X;
  case 'Y': return Pauli::Y;
  case 'Z': return Pauli::Z;
  default: throw std::invalid_argument(std::string("invalid Pauli character '") + c + "'");
  }
}

PauliString::PauliString(std::vector<Pauli> ops_in, double coeff_in)
    : ops(std::move(ops_in)), coeff(coeff_in) {
  if (!std::isfinite(coeff)) throw std::invalid_argument("Pauli coefficient must be finite");
}

PauliString PauliString::parse(std::string_view text, double coeff) {
  std::vector<Pauli> ops;
  ops.reserve(text.size());
  for (char c : text) ops.push_back(pauli_from_char(c));
  return PauliString(std::move(ops), coeff);
}

std::string PauliString::label() const {
  std::string out;
  out.reserve(ops.size());
  for (Pauli p : ops) out.push_back(to_char(p));
  return out;
}

bool PauliString::is_identity() const {
  for (Pauli p : ops)
    if (p != Pauli::I) return false;
  return true;
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  for (std::size_t k = 0; k < ops.size(); ++k)
    if (ops[k] == Pauli::X || ops[k] == Pauli::Y) m |= std::uint64_t{1} << k;
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  for (std::size_t k = 0; k < ops.size(); ++k)
    if (ops[k] == Pauli::Z || ops[k] == Pauli::Y) m |= std::uint64_t{1} << k;
  return m;
}

int PauliString::y_count() const {
  int n = 0;
  for (Pauli p : ops) n += (p == Pauli::Y);
  return n;
}

PauliOperator PauliOperator::identity(std::size_t n_qubits, cplx coeff) {
  PauliOperator op(n_qubits);
  op.add(std::string(n_qubits, 'I'), coeff);
  return op;
}

PauliOperator PauliOperator::term(std::string_view label, cplx coeff) {
  PauliOperator op(label.size());
  op.add(std::string(label), coeff);
  return op;
}

void PauliOperator::add(const std::string& label, cplx coeff) {
  if (label.size() != n_qubits_) throw std::invalid_argument("Pauli label length mismatch");
  terms_[label] += coeff;
}

PauliOperator& PauliOperator::operator+=(const PauliOperator& other) {
  if (other.n_qubits_ != n_qubits_) throw std::invalid_argument("qubit count mismatch");
  for (const auto& [label, c] : other.terms_) terms_[label] += c;
  return *this;
}

PauliOperator& PauliOperator::operator*=(cplx scale) {
  for (auto& [label, c] : terms_) c *= scale;
  return *this;
}

PauliOperator operator-(PauliOperator a, const PauliOperator& b) {
  for (const auto& [label, c] : b.terms_) a.add(label, -c);
  return a;
}

PauliOperator operator*(const PauliOperator& a, const PauliOperator& b) {
  if (a.n_qubits_ != b.n_qubits_) throw std::invalid_argument("qubit count mismatch");
  PauliOperator out(a.n_qubits_);
  std::string label(a.n_qubits_, 'I');
  for (const auto& [la, ca] : a.terms_) {
    for (const auto& [lb, cb] : b.terms_) {
      cplx phase = ca * cb;
      for (std::size_t k = 0; k < label.size(); ++k) {
        const Product p = multiply(la[k], lb[k]);
        phase *= p.phase;
        label[k] = p.op;
      }
      out.terms_[label] += phase;
    }
  }
  return out;
}

PauliOperator PauliOperator::adjoint() const {
  PauliOperator out(n_qubits_);
  for (const auto& [label, c] : terms_) out.terms_[label] = std::conj(c);
  return out;
}

void PauliOperator::prune(double threshold) {
  std::erase_if(terms_, [threshold](const auto& kv) { return std::abs(kv.second) < threshold; });
}

PauliOperator jw_creation(std::size_t mode, std::size_t n_qubits) {
  if (mode >= n_qubits) throw std::invalid_argument("fermionic mode out of range");
  std::string x(n_qubits, 'I');
  for (std::size_t q = 0; q < mode; ++q) x[q] = 'Z';
  std::string y = x;
  x[mode] = 'X';
  y[mode] = 'Y';
  PauliOperator op(n_qubits);
  op.add(x, 0.5);
  op.add(y, cplx{0.0, -0.5});
  return op;
}

PauliOperator jw_annihilation(std::size_t mode, std::size_t n_qubits) {
  return jw_creation(mode, n_qubits).adjoint();
}

} // namespace latentvqe
