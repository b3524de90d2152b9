#include "latentvqe/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "latentvqe/errors.hpp"
#include "latentvqe/schema.hpp"

namespace latentvqe {

namespace {

constexpr std::array<double, 3> kExponents{3.42525091, 0.62391373, 0.16885540};
constexpr std::array<double, 3> kContraction{0.15432897, 0.53532814, 0.44463454};
constexpr double kPi = std::numbers::pi;

double primitive_norm(double alpha) { return std::pow(2.0 * alpha / kPi, 0.75); }

struct Primitive {
  double alpha;
  double weight; // contraction coefficient times primitive normalization
};

std::array<Primitive, 3> sto3g_primitives() {
  std::array<Primitive, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) out[i] = {kExponents[i], kContraction[i] * primitive_norm(kExponents[i])};
  return out;
}

// 1-D geometry: both nuclei and all Gaussian centers lie on one axis.
double overlap_prim(double a, double b, double rab2) {
  const double p = a + b;
  return std::pow(kPi / p, 1.5) * std::exp(-a * b / p * rab2);
}

double kinetic_prim(double a, double b, double rab2) {
  const double p = a + b;
  const double mu = a * b / p;
  return mu * (3.0 - 2.0 * mu * rab2) * std::pow(kPi / p, 1.5) * std::exp(-mu * rab2);
}

double nuclear_prim(double a, double xa, double b, double xb, double xc, double charge) {
  const double p = a + b;
  const double xp = (a * xa + b * xb) / p;
  const double rab2 = (xa - xb) * (xa - xb);
  const double rpc2 = (xp - xc) * (xp - xc);
  return -2.0 * kPi / p * charge * std::exp(-a * b / p * rab2) * boys_f0(p * rpc2);
}

double eri_prim(double a, double xa, double b, double xb, double c, double xc, double d, double xd) {
  const double p = a + b;
  const double q = c + d;
  const double xp = (a * xa + b * xb) / p;
  const double xq = (c * xc + d * xd) / q;
  const double rab2 = (xa - xb) * (xa - xb);
  const double rcd2 = (xc - xd) * (xc - xd);
  const double rpq2 = (xp - xq) * (xp - xq);
  return 2.0 * std::pow(kPi, 2.5) / (p * q * std::sqrt(p + q)) *
         std::exp(-a * b / p * rab2 - c * d / q * rcd2) * boys_f0(p * q / (p + q) * rpq2);
}

PauliOperator number_conserving_term(const std::vector<std::size_t>& create, const std::vector<std::size_t>& annihilate,
                                     std::size_t n) {
  PauliOperator op = PauliOperator::identity(n);
  for (std::size_t p : create) op = op * jw_creation(p, n);
  for (std::size_t p : annihilate) op = op * jw_annihilation(p, n);
  return op;
}

} // namespace

double boys_f0(double x) {
  if (x < 1e-10) return 1.0 - x / 3.0;
  const double s = std::sqrt(x);
  return 0.5 * std::sqrt(kPi / x) * std::erf(s);
}

MolecularIntegrals sto3g_integrals(double bond_length) {
  if (!(bond_length >= kMinBondLength && bond_length <= kMaxBondLength))
    throw std::invalid_argument("bond length " + std::to_string(bond_length) + " A outside [" +
                                std::to_string(kMinBondLength) + ", " + std::to_string(kMaxBondLength) + "]");
  const double r = bond_length * kBohrPerAngstrom;
  const std::array<double, 2> centers{0.0, r};
  const auto prims = sto3g_primitives();

  double s_ao[2][2]{}, h_ao[2][2]{};
  double eri_ao[2][2][2][2]{};
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 2; ++n) {
      const double rab2 = (centers[m] - centers[n]) * (centers[m] - centers[n]);
      for (const auto& pa : prims) {
        for (const auto& pb : prims) {
          const double w = pa.weight * pb.weight;
          s_ao[m][n] += w * overlap_prim(pa.alpha, pb.alpha, rab2);
          double v = kinetic_prim(pa.alpha, pb.alpha, rab2);
          for (double xc : centers) v += nuclear_prim(pa.alpha, centers[m], pb.alpha, centers[n], xc, 1.0);
          h_ao[m][n] += w * v;
        }
      }
    }
  }
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n)
      for (int l = 0; l < 2; ++l)
        for (int s = 0; s < 2; ++s) {
          double acc = 0.0;
          for (const auto& pa : prims)
            for (const auto& pb : prims)
              for (const auto& pc : prims)
                for (const auto& pd : prims)
                  acc += pa.weight * pb.weight * pc.weight * pd.weight *
                         eri_prim(pa.alpha, centers[m], pb.alpha, centers[n], pc.alpha, centers[l], pd.alpha,
                                  centers[s]);
          eri_ao[m][n][l][s] = acc;
        }

  MolecularIntegrals out;
  out.bond_length = bond_length;
  out.overlap_s12 = s_ao[0][1];
  out.e_nuclear = 1.0 / r;

  // Columns: sigma_g = (chi1 + chi2)/sqrt(2(1+S)), sigma_u = (chi1 - chi2)/sqrt(2(1-S)).
  const double S = out.overlap_s12;
  const double cg = 1.0 / std::sqrt(2.0 * (1.0 + S));
  const double cu = 1.0 / std::sqrt(2.0 * (1.0 - S));
  const double c[2][2] = {{cg, cu}, {cg, -cu}}; // c[ao][mo]

  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      double acc = 0.0;
      for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) acc += c[m][p] * c[n][q] * h_ao[m][n];
      out.h_mo[p][q] = acc;
    }
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (int rr = 0; rr < 2; ++rr)
        for (int s = 0; s < 2; ++s) {
          double acc = 0.0;
          for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n)
              for (int l = 0; l < 2; ++l)
                for (int k = 0; k < 2; ++k) acc += c[m][p] * c[n][q] * c[l][rr] * c[k][s] * eri_ao[m][n][l][k];
          out.g_mo[((p * 2 + q) * 2 + rr) * 2 + s] = acc;
        }
  return out;
}

double QubitHamiltonian::identity_coefficient() const {
  double c = 0.0;
  for (const auto& t : terms)
    if (t.is_identity()) c += t.coeff;
  return c;
}

QubitHamiltonian build_qubit_hamiltonian(const MolecularIntegrals& ints) {
  constexpr std::size_t n = 4;
  auto spatial = [](std::size_t p) { return static_cast<int>(p % 2); };
  auto spin = [](std::size_t p) { return p / 2; };

  PauliOperator op = PauliOperator::identity(n, ints.e_nuclear);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (spin(p) != spin(q)) continue;
      const double h = ints.h_mo[spatial(p)][spatial(q)];
      if (h != 0.0) op += number_conserving_term({p}, {q}, n) * cplx{h, 0.0};
    }
  }
  // 1/2 sum <pq|rs> a+_p a+_q a_s a_r with <pq|rs> = (pr|qs).
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          if (spin(p) != spin(r) || spin(q) != spin(s)) continue;
          if (p == q || r == s) continue;
          const double v = ints.g(spatial(p), spatial(r), spatial(q), spatial(s));
          if (v == 0.0) continue;
          op += number_conserving_term({p, q}, {s, r}, n) * cplx{0.5 * v, 0.0};
        }
  op.prune(1e-12);

  QubitHamiltonian h;
  h.n_qubits = static_cast<int>(n);
  h.bond_length = ints.bond_length;
  for (const auto& [label, c] : op.terms()) {
    if (std::abs(c.imag()) > 1e-10) throw NumericalError("non-Hermitian term " + label + " in qubit Hamiltonian");
    if (std::abs(c.real()) < 1e-12) continue;
    h.terms.push_back(PauliString::parse(label, c.real()));
  }
  return h;
}

QubitHamiltonian h2_hamiltonian(double bond_length) { return build_qubit_hamiltonian(sto3g_integrals(bond_length)); }

DenseMatrix dense_matrix(std::span<const PauliString> terms, int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  DenseMatrix m(dim);
  static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& t : terms) {
    if (t.n_qubits() != static_cast<std::size_t>(n_qubits)) throw std::invalid_argument("term length mismatch");
    const std::uint64_t xm = t.x_mask();
    const std::uint64_t zm = t.z_mask();
    const cplx yphase = kIPow[t.y_count() % 4];
    for (std::size_t col = 0; col < dim; ++col) {
      const double sign = (std::popcount(col & zm) & 1) ? -1.0 : 1.0;
      m(col ^ xm, col) += t.coeff * sign * yphase;
    }
  }
  return m;
}

DenseMatrix dense_matrix(const QubitHamiltonian& h) { return dense_matrix(h.terms, h.n_qubits); }

GroundState exact_ground_energy(const QubitHamiltonian& h) {
  if (h.n_qubits > 6) throw std::invalid_argument("exact diagonalization limited to 6 qubits");
  const EigenDecomposition eig = jacobi_eigen(dense_matrix(h));
  std::vector<cplx> v = eig.vectors.front();
  std::size_t big = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[big]) + 1e-12) big = i;
  const cplx phase = std::conj(v[big]) / std::abs(v[big]);
  for (cplx& a : v) a *= phase;
  v[big] = std::abs(v[big]);
  StateVector state(h.n_qubits, std::move(v));
  state.normalize();
  return {eig.values.front(), std::move(state)};
}

StateVector hartree_fock_state() { return StateVector::basis(4, 0b0101); }

double energy(const QubitHamiltonian& h, const StateVector& state) { return expectation(state, h.terms); }

nlohmann::json to_json(const QubitHamiltonian& h) {
  nlohmann::json j = schema_header("hamiltonian");
  j["bond_length_angstrom"] = h.bond_length;
  j["n_qubits"] = h.n_qubits;
  j["ordering"] = "pauli character k acts on qubit k (qubit 0 leftmost); qubit 0 = sigma_g up, 1 = sigma_u up, "
                  "2 = sigma_g down, 3 = sigma_u down";
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : h.terms) terms.push_back({{"pauli", t.label()}, {"coeff", t.coeff}});
  j["terms"] = std::move(terms);
  return j;
}

QubitHamiltonian hamiltonian_from_json(const nlohmann::json& j) {
  require_schema(j, "hamiltonian");
  QubitHamiltonian h;
  try {
    h.n_qubits = j.at("n_qubits").get<int>();
    h.bond_length = j.at("bond_length_angstrom").get<double>();
    for (const auto& t : j.at("terms")) {
      auto ps = PauliString::parse(t.at("pauli").get<std::string>(), t.at("coeff").get<double>());
      if (ps.n_qubits() != static_cast<std::size_t>(h.n_qubits))
        throw ArtifactError("Hamiltonian term length does not match n_qubits");
      h.terms.push_back(std::move(ps));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("malformed Hamiltonian file: ") + e.what());
  }
  return h;
}

} // namespace latentvqe
