#pragma once

#include <array>
#include <vector>

#include "json.hpp"
#include "latentvqe/jacobi.hpp"
#include "latentvqe/pauli.hpp"
#include "latentvqe/statevector.hpp"

namespace latentvqe {

inline constexpr double kBohrPerAngstrom = 1.8897259886;
inline constexpr double kMinBondLength = 0.2; // Angstrom
inline constexpr double kMaxBondLength = 5.0;

// STO-3G integrals for H2 in the symmetry-adapted MO basis {sigma_g, sigma_u}.
struct MolecularIntegrals {
  double bond_length = 0.0; // Angstrom
  double overlap_s12 = 0.0;
  std::array<std::array<double, 2>, 2> h_mo{};
  std::array<double, 16> g_mo{}; // chemists' notation (pq|rs)
  double e_nuclear = 0.0;        // Hartree

  double g(int p, int q, int r, int s) const { return g_mo[((p * 2 + q) * 2 + r) * 2 + s]; }
};

/// Closed-form contracted-Gaussian integrals at `bond_length` (Angstrom).
MolecularIntegrals sto3g_integrals(double bond_length);

/// Boys function F0(x) = 0.5 sqrt(pi/x) erf(sqrt(x)), F0(0) = 1.
double boys_f0(double x);

// Qubit ordering: 0 = sigma_g up, 1 = sigma_u up, 2 = sigma_g down, 3 = sigma_u down.
struct QubitHamiltonian {
  int n_qubits = 4;
  std::vector<PauliString> terms;
  double bond_length = 0.0; // Angstrom

  double identity_coefficient() const;
};

QubitHamiltonian build_qubit_hamiltonian(const MolecularIntegrals& integrals);

/// Convenience: integrals + Jordan-Wigner mapping at one bond length.
QubitHamiltonian h2_hamiltonian(double bond_length);

DenseMatrix dense_matrix(const QubitHamiltonian& h);
DenseMatrix dense_matrix(std::span<const PauliString> terms, int n_qubits);

struct GroundState {
  double energy = 0.0;
  StateVector eigenvector;
};

/// Lowest eigenpair of the dense Hamiltonian via Jacobi rotations. The
/// eigenvector's phase is fixed so its largest component is real positive.
GroundState exact_ground_energy(const QubitHamiltonian& h);

/// |0101> in the blocked-spin ordering: both sigma_g spin orbitals occupied.
StateVector hartree_fock_state();

double energy(const QubitHamiltonian& h, const StateVector& state);

nlohmann::json to_json(const QubitHamiltonian& h);
QubitHamiltonian hamiltonian_from_json(const nlohmann::json& j);

} // namespace latentvqe
