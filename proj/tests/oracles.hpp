#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond its plain data types: full-matrix simulation through
// Kronecker products, an Eigen eigensolver, and an H2 minimal-basis CI built
// from its own Gaussian integrals.

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "latentvqe/circuit.hpp"
#include "latentvqe/hamiltonian.hpp"
#include "latentvqe/random.hpp"

namespace oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

Vector to_eigen(const latentvqe::StateVector& s);
latentvqe::StateVector from_eigen(const Vector& v);

/// 2^n x 2^n matrix of a single-qubit operator on qubit `q` (qubit 0 = LSB).
Matrix embed(const Eigen::Matrix2cd& m, int q, int n);
Matrix cnot_matrix(int control, int target, int n);

/// Pauli label "IXYZ" (character k on qubit k) as a dense matrix.
Matrix pauli_matrix(const std::string& label);
Matrix hamiltonian_matrix(const latentvqe::QubitHamiltonian& h);

/// Gate matrices written straight from their textbook definitions.
Eigen::Matrix2cd u3(double theta, double phi, double lam);
Eigen::Matrix2cd u1(double lam);
Eigen::Matrix2cd ry(double theta);
Eigen::Matrix2cd rz(double lam);

/// Full unitary of a circuit at the given parameters.
Matrix circuit_unitary(const latentvqe::Circuit& c, std::span<const double> params);

Matrix expm(const Matrix& a);

/// Ascending eigenvalues via Eigen's Hermitian solver.
std::vector<double> eigenvalues(const Matrix& m);

/// Dense JW fermion operators on 4 spin orbitals, built from Kronecker products.
Matrix annihilation(int mode, int n);

struct H2Reference {
  double fci = 0.0;
  double hf = 0.0;
  double e_nuclear = 0.0;
};

/// Minimal-basis H2 energies from an independent integral code and a 2x2
/// configuration-interaction matrix over |sg sg> and |su su>.
H2Reference h2_reference(double bond_length_angstrom);

latentvqe::StateVector random_state(int n, latentvqe::Rng& rng);
Matrix random_hermitian(int dim, latentvqe::Rng& rng);

/// Random circuit over all gate kinds with fresh slots for every angle.
latentvqe::Circuit random_circuit(int n_qubits, int n_gates, latentvqe::Rng& rng);

} // namespace oracle
