#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "latentvqe/errors.hpp"
#include "latentvqe/hamiltonian.hpp"
#include "latentvqe/jacobi.hpp"
#include "oracles.hpp"

using namespace latentvqe;

namespace {

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

oracle::Matrix to_eigen(const DenseMatrix& d) {
  oracle::Matrix m(static_cast<Eigen::Index>(d.dim), static_cast<Eigen::Index>(d.dim));
  for (std::size_t r = 0; r < d.dim; ++r)
    for (std::size_t c = 0; c < d.dim; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = d(r, c);
  return m;
}

DenseMatrix from_eigen(const oracle::Matrix& m) {
  DenseMatrix d(static_cast<std::size_t>(m.rows()));
  for (std::size_t r = 0; r < d.dim; ++r)
    for (std::size_t c = 0; c < d.dim; ++c) d(r, c) = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return d;
}

// Second-quantized Hamiltonian assembled from dense fermion matrices.
oracle::Matrix fermionic_hamiltonian(const MolecularIntegrals& mi) {
  constexpr int n = 4;
  std::vector<oracle::Matrix> a, ad;
  for (int p = 0; p < n; ++p) {
    a.push_back(oracle::annihilation(p, n));
    ad.push_back(a.back().adjoint());
  }
  auto spatial = [](int p) { return p % 2; };
  auto spin = [](int p) { return p / 2; };
  oracle::Matrix h = mi.e_nuclear * oracle::Matrix::Identity(16, 16);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (spin(p) == spin(q)) h += mi.h_mo[spatial(p)][spatial(q)] * ad[p] * a[q];
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          if (spin(p) != spin(r) || spin(q) != spin(s)) continue;
          const double v = mi.g(spatial(p), spatial(r), spatial(q), spatial(s));
          h += 0.5 * v * ad[p] * ad[q] * a[s] * a[r];
        }
  return h;
}

} // namespace

TEST_CASE("sto3g_integrals basic properties") {
  double prev = 1.0;
  for (double r : grid(0.2, 5.0, 60)) {
    const MolecularIntegrals mi = sto3g_integrals(r);
    CHECK(mi.overlap_s12 > 0.0);
    CHECK(mi.overlap_s12 < 1.0);
    CHECK(mi.overlap_s12 < prev);
    prev = mi.overlap_s12;
    CHECK(mi.e_nuclear > 0.0);
    CHECK(std::abs(mi.h_mo[0][1] - mi.h_mo[1][0]) < 1e-12);
  }
  CHECK(std::abs(sto3g_integrals(1.0 / kBohrPerAngstrom).e_nuclear - 1.0) < 1e-12);
  CHECK_THROWS_AS(sto3g_integrals(0.1), std::invalid_argument);
  CHECK_THROWS_AS(sto3g_integrals(5.5), std::invalid_argument);
}

TEST_CASE("two-electron integrals have eightfold symmetry") {
  for (double r : grid(0.3, 2.85, 100)) {
    const MolecularIntegrals mi = sto3g_integrals(r);
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q)
        for (int s = 0; s < 2; ++s)
          for (int t = 0; t < 2; ++t) {
            const double v = mi.g(p, q, s, t);
            CHECK(std::abs(v - mi.g(q, p, s, t)) < 1e-12);
            CHECK(std::abs(v - mi.g(p, q, t, s)) < 1e-12);
            CHECK(std::abs(v - mi.g(s, t, p, q)) < 1e-12);
          }
  }
}

TEST_CASE("boys function limits") {
  CHECK(boys_f0(0.0) == 1.0);
  CHECK(std::abs(boys_f0(1e-12) - 1.0) < 1e-12);
  CHECK(std::abs(boys_f0(1.0) - 0.7468241328124270) < 1e-14);
}

TEST_CASE("qubit Hamiltonian structure") {
  for (double r : {0.3, 0.735, 1.5, 2.85}) {
    const QubitHamiltonian h = h2_hamiltonian(r);
    CHECK(h.n_qubits == 4);
    CHECK(h.terms.size() <= 15);
    for (const auto& t : h.terms) {
      CHECK(t.n_qubits() == 4);
      CHECK(std::isfinite(t.coeff));
      CHECK(std::abs(t.coeff) >= 1e-12);
    }
    CHECK(dense_matrix(h).is_hermitian(1e-12));
  }
}

TEST_CASE("identity coefficient carries the nuclear repulsion") {
  MolecularIntegrals mi = sto3g_integrals(0.735);
  const double base = build_qubit_hamiltonian(mi).identity_coefficient();
  mi.e_nuclear += 1.0;
  CHECK(build_qubit_hamiltonian(mi).identity_coefficient() - base == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Jordan-Wigner mapping matches a dense fermionic construction") {
  for (double r : {0.4, 0.735, 1.3, 2.5, 4.0}) {
    const MolecularIntegrals mi = sto3g_integrals(r);
    const QubitHamiltonian h = build_qubit_hamiltonian(mi);
    const oracle::Matrix expected = fermionic_hamiltonian(mi);
    CHECK((to_eigen(dense_matrix(h)) - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((oracle::hamiltonian_matrix(h) - expected).cwiseAbs().maxCoeff() < 1e-12);

    // brute-force Pauli decomposition of the dense operator
    int nonzero = 0;
    const std::string letters = "IXYZ";
    for (int code = 0; code < 256; ++code) {
      std::string label;
      for (int q = 0; q < 4; ++q) label += letters[static_cast<std::size_t>((code >> (2 * q)) & 3)];
      const cplx c = (oracle::pauli_matrix(label) * expected).trace() / 16.0;
      if (std::abs(c) > 1e-12) ++nonzero;
    }
    CHECK(nonzero == static_cast<int>(h.terms.size()));
  }
}

TEST_CASE("ground energies match an independent minimal-basis CI") {
  for (double r : grid(0.3, 2.85, 30)) {
    const QubitHamiltonian h = h2_hamiltonian(r);
    const oracle::H2Reference ref = oracle::h2_reference(r);
    CHECK(std::abs(exact_ground_energy(h).energy - ref.fci) < 1e-8);
    CHECK(std::abs(energy(h, hartree_fock_state()) - ref.hf) < 1e-8);
  }
}

TEST_CASE("exact_ground_energy examples") {
  QubitHamiltonian z;
  z.terms = {PauliString::parse("ZIII")};
  CHECK(std::abs(exact_ground_energy(z).energy + 1.0) < 1e-12);

  QubitHamiltonian id;
  id.terms = {PauliString::parse("IIII", -0.37)};
  CHECK(std::abs(exact_ground_energy(id).energy + 0.37) < 1e-12);

  const GroundState g = exact_ground_energy(h2_hamiltonian(0.735));
  CHECK(std::abs(g.energy + 1.137) < 1e-3);
  CHECK(std::abs(g.eigenvector.norm() - 1.0) < 1e-12);

  std::vector<double> e;
  const auto rs = grid(0.3, 4.0, 75);
  for (double r : rs) e.push_back(exact_ground_energy(h2_hamiltonian(r)).energy);
  int minima = 0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] < e[arg]) arg = i;
    if (i > 0 && i + 1 < e.size() && e[i] < e[i - 1] && e[i] < e[i + 1]) ++minima;
  }
  CHECK(minima == 1);
  CHECK(rs[arg] > 0.65);
  CHECK(rs[arg] < 0.8);
  CHECK(e.back() - e[arg] > 0.15);
  CHECK(e.back() - e[arg] < 0.25);
}

TEST_CASE("dissociation tail is flat") {
  const double e45 = exact_ground_energy(h2_hamiltonian(4.5)).energy;
  const double e50 = exact_ground_energy(h2_hamiltonian(5.0)).energy;
  CHECK(std::abs(e50 - e45) < 5e-3);
}

TEST_CASE("Hartree-Fock state") {
  const StateVector hf = hartree_fock_state();
  int nonzero = 0;
  for (std::size_t i = 0; i < hf.dim(); ++i) nonzero += std::abs(hf[i]) > 0.0;
  CHECK(nonzero == 1);
  CHECK(std::abs(hf[0b0101] - 1.0) < 1e-15);
  for (double r : grid(0.3, 5.0, 40)) {
    const QubitHamiltonian h = h2_hamiltonian(r);
    CHECK(energy(h, hf) >= exact_ground_energy(h).energy - 1e-12);
  }
  const QubitHamiltonian h = h2_hamiltonian(0.735);
  const double gap = energy(h, hf) - exact_ground_energy(h).energy;
  CHECK(gap > 0.0);
  CHECK(gap < 0.03);
}

TEST_CASE("variational lower bound on random states") {
  Rng rng(31);
  for (double r : {0.5, 0.735, 2.0}) {
    const QubitHamiltonian h = h2_hamiltonian(r);
    const double e0 = exact_ground_energy(h).energy;
    for (int trial = 0; trial < 50; ++trial) CHECK(energy(h, oracle::random_state(4, rng)) >= e0 - 1e-10);
  }
}

TEST_CASE("Jacobi eigensolver agrees with an independent method") {
  Rng rng(555);
  for (int dim : {2, 3, 4, 8, 16, 16, 16, 16, 16, 16}) {
    const oracle::Matrix m = oracle::random_hermitian(dim, rng);
    const auto expected = oracle::eigenvalues(m);
    const EigenDecomposition ed = jacobi_eigen(from_eigen(m));
    REQUIRE(ed.values.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
      CHECK(std::abs(ed.values[k] - expected[k]) < 1e-9);
      oracle::Vector v(dim);
      for (int i = 0; i < dim; ++i) v(i) = ed.vectors[k][static_cast<std::size_t>(i)];
      CHECK((m * v - ed.values[k] * v).norm() < 1e-9);
      CHECK(std::abs(v.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("Jacobi reports non-convergence") {
  Rng rng(1);
  const DenseMatrix m = from_eigen(oracle::random_hermitian(16, rng));
  CHECK_THROWS_AS(jacobi_eigen(m, 1e-12, 1), NumericalError);
}

TEST_CASE("Hamiltonian JSON round trip and schema checks") {
  const QubitHamiltonian h = h2_hamiltonian(0.735);
  const nlohmann::json j = to_json(h);
  CHECK(j.at("n_qubits") == 4);
  CHECK(j.contains("ordering"));
  CHECK(j.at("schema_version") == "latentvqe/1");
  const QubitHamiltonian back = hamiltonian_from_json(nlohmann::json::parse(j.dump()));
  REQUIRE(back.terms.size() == h.terms.size());
  for (std::size_t i = 0; i < h.terms.size(); ++i) {
    CHECK(back.terms[i].label() == h.terms[i].label());
    CHECK(back.terms[i].coeff == h.terms[i].coeff);
  }
  CHECK(j.dump() == to_json(h2_hamiltonian(0.735)).dump());

  nlohmann::json wrong = j;
  wrong["schema_version"] = "latentvqe/0";
  CHECK_THROWS_AS(hamiltonian_from_json(wrong), ArtifactError);
}
