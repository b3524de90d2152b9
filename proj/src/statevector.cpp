#include "latentvqe/statevector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace latentvqe {

namespace {

void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("qubit count " + std::to_string(n) + " outside [1, " +
                                std::to_string(kMaxQubits) + "]");
}

// Swaps qubits a and b of the basis states where `control` is set.
void apply_controlled_swap(StateVector& s, int control, int a, int b) {
  const std::size_t cm = std::size_t{1} << control;
  const std::size_t am = std::size_t{1} << a;
  const std::size_t bm = std::size_t{1} << b;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if ((i & cm) && (i & am) && !(i & bm)) std::swap(s[i], s[(i & ~am) | bm]);
  }
}

} // namespace

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  check_qubit_count(n_qubits);
  if (amps_.size() != (std::size_t{1} << n_qubits))
    throw std::invalid_argument("amplitude count must equal 2^n_qubits");
}

StateVector StateVector::zero(int n_qubits) { return basis(n_qubits, 0); }

StateVector StateVector::basis(int n_qubits, std::size_t index) {
  check_qubit_count(n_qubits);
  std::vector<cplx> a(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
  if (index >= a.size()) throw std::invalid_argument("basis index out of range");
  a[index] = 1.0;
  return StateVector(n_qubits, std::move(a));
}

StateVector zero_state(int n_qubits) { return StateVector::zero(n_qubits); }

double StateVector::norm() const {
  double s = 0.0;
  for (const cplx& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("cannot normalize a zero state");
  for (cplx& a : amps_) a /= n;
}

void StateVector::apply_1q(const Mat2& m, int target) {
  const std::size_t stride = std::size_t{1} << target;
  const std::size_t n = amps_.size();
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a0 = amps_[i];
      const cplx a1 = amps_[i + stride];
      amps_[i] = m[0] * a0 + m[1] * a1;
      amps_[i + stride] = m[2] * a0 + m[3] * a1;
    }
  }
}

void StateVector::apply_2q(const Mat4& m, int t0, int t1) {
  const std::size_t m0 = std::size_t{1} << t0;
  const std::size_t m1 = std::size_t{1} << t1;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & (m0 | m1)) continue;
    const std::size_t idx[4] = {i, i | m1, i | m0, i | m0 | m1};
    cplx in[4];
    for (int k = 0; k < 4; ++k) in[k] = amps_[idx[k]];
    for (int r = 0; r < 4; ++r) {
      cplx acc = 0.0;
      for (int c = 0; c < 4; ++c) acc += m[4 * r + c] * in[c];
      amps_[idx[r]] = acc;
    }
  }
}

void StateVector::apply_cnot(int control, int target) {
  const std::size_t cm = std::size_t{1} << control;
  const std::size_t tm = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & cm) && !(i & tm)) std::swap(amps_[i], amps_[i | tm]);
  }
}

void StateVector::apply_x(int target) {
  const std::size_t tm = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (!(i & tm)) std::swap(amps_[i], amps_[i | tm]);
  }
}

bool is_unitary(std::span<const cplx> m, std::size_t dim, double tol) {
  if (m.size() != dim * dim) return false;
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < dim; ++k) acc += m[r * dim + k] * std::conj(m[c * dim + k]);
      const cplx expected = (r == c) ? 1.0 : 0.0;
      if (std::abs(acc - expected) > tol) return false;
    }
  }
  return true;
}

StateVector apply_gate(StateVector state, std::span<const cplx> unitary, std::span<const int> targets) {
  for (int t : targets) {
    if (t < 0 || t >= state.n_qubits()) throw std::invalid_argument("gate target out of range");
  }
  if (targets.size() == 1) {
    if (!is_unitary(unitary, 2, 1e-10)) throw std::invalid_argument("matrix is not unitary");
    Mat2 m;
    std::copy(unitary.begin(), unitary.end(), m.begin());
    state.apply_1q(m, targets[0]);
  } else if (targets.size() == 2) {
    if (targets[0] == targets[1]) throw std::invalid_argument("duplicate gate targets");
    if (!is_unitary(unitary, 4, 1e-10)) throw std::invalid_argument("matrix is not unitary");
    Mat4 m;
    std::copy(unitary.begin(), unitary.end(), m.begin());
    state.apply_2q(m, targets[0], targets[1]);
  } else {
    throw std::invalid_argument("only 1- and 2-qubit gates are supported");
  }
  return state;
}

double expectation(const StateVector& state, const PauliString& term) {
  if (term.n_qubits() != static_cast<std::size_t>(state.n_qubits()))
    throw std::invalid_argument("Pauli string length " + std::to_string(term.n_qubits()) +
                                " does not match state qubit count " + std::to_string(state.n_qubits()));
  const std::uint64_t xm = term.x_mask();
  const std::uint64_t zm = term.z_mask();
  // P|i> = i^{ny} (-1)^{popcount(i & zmask)} |i ^ xmask>
  static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx yphase = kIPow[term.y_count() % 4];
  cplx acc = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double sign = (std::popcount(i & zm) & 1) ? -1.0 : 1.0;
    acc += std::conj(amps[i ^ xm]) * amps[i] * sign;
  }
  acc *= yphase;
  return term.coeff * acc.real();
}

double expectation(const StateVector& state, std::span<const PauliString> terms) {
  double total = 0.0;
  for (const PauliString& t : terms) total += expectation(state, t);
  return total;
}

cplx overlap(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("overlap of states with different qubit counts");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

cplx DensityMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += (*this)(i, i);
  return t;
}

DensityMatrix partial_trace(const StateVector& state, std::span<const int> keep) {
  const int n = state.n_qubits();
  if (keep.empty() || static_cast<int>(keep.size()) >= n)
    throw std::invalid_argument("keep set must be a non-empty strict subset of the qubits");
  std::uint64_t keep_mask = 0;
  for (int q : keep) {
    if (q < 0 || q >= n) throw std::invalid_argument("keep qubit out of range");
    if (keep_mask & (std::uint64_t{1} << q)) throw std::invalid_argument("duplicate keep qubit");
    keep_mask |= std::uint64_t{1} << q;
  }
  DensityMatrix rho;
  rho.n_qubits = static_cast<int>(keep.size());
  rho.entries.assign(rho.dim() * rho.dim(), cplx{0.0, 0.0});

  auto local_index = [&](std::size_t i) {
    std::size_t r = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) r |= ((i >> keep[k]) & 1u) << k;
    return r;
  };
  // Amplitudes sharing the same traced-out bits contribute to one block.
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (amps[i] == cplx{0.0, 0.0}) continue;
    const std::size_t env = i & ~keep_mask;
    const std::size_t ri = local_index(i);
    for (std::size_t j = 0; j < amps.size(); ++j) {
      if ((j & ~keep_mask) != env) continue;
      rho(ri, local_index(j)) += amps[i] * std::conj(amps[j]);
    }
  }
  return rho;
}

double fidelity_with_zero(const DensityMatrix& rho) { return rho(0, 0).real(); }

double swap_test_probability_zero(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("SWAP test needs equal register sizes");
  const int n = a.n_qubits();
  const int total = 2 * n + 1;
  if (total > kMaxQubits) throw std::invalid_argument("SWAP test register too large");

  // |0>_anc (x) |a> (x) |b>, ancilla on bit 0.
  std::vector<cplx> amps(std::size_t{1} << total, cplx{0.0, 0.0});
  for (std::size_t ia = 0; ia < a.dim(); ++ia) {
    for (std::size_t ib = 0; ib < b.dim(); ++ib) {
      amps[(ia << 1) | (ib << (n + 1))] = a[ia] * b[ib];
    }
  }
  StateVector s(total, std::move(amps));
  const double r = 1.0 / std::sqrt(2.0);
  const Mat2 h{r, r, r, -r};
  s.apply_1q(h, 0);
  for (int k = 0; k < n; ++k) apply_controlled_swap(s, 0, 1 + k, 1 + n + k);
  s.apply_1q(h, 0);

  double p0 = 0.0;
  for (std::size_t i = 0; i < s.dim(); i += 2) p0 += std::norm(s[i]);
  return p0;
}

} // namespace latentvqe
