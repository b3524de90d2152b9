#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "latentvqe/ansatz.hpp"
#include "latentvqe/circuit.hpp"
#include "oracles.hpp"

using namespace latentvqe;
using std::numbers::pi;

namespace {

double max_diff(const Mat2& a, const Eigen::Matrix2cd& b) {
  double d = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) d = std::max(d, std::abs(a[static_cast<std::size_t>(2 * r + c)] - b(r, c)));
  return d;
}

double max_diff(const StateVector& a, const StateVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<double> random_params(const Circuit& c, Rng& rng) {
  std::vector<double> p(static_cast<std::size_t>(c.n_params()));
  for (auto& x : p) x = rng.uniform(-2.0 * pi, 2.0 * pi);
  return p;
}

} // namespace

TEST_CASE("u3_matrix examples") {
  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity(), x, h;
  x << 0, 1, 1, 0;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  CHECK(max_diff(u3_matrix(0, 0, 0), id) < 1e-15);
  CHECK(max_diff(u3_matrix(pi, 0, pi), x) < 1e-15);
  CHECK(max_diff(u3_matrix(pi / 2, 0, pi), h) < 1e-15);
  CHECK_THROWS_AS(u3_matrix(std::numeric_limits<double>::quiet_NaN(), 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(u3_matrix(0, std::numeric_limits<double>::infinity(), 0), std::invalid_argument);
}

TEST_CASE("u1_matrix examples") {
  Eigen::Matrix2cd z, s;
  z << 1, 0, 0, -1;
  s << 1, 0, 0, cplx(0, 1);
  CHECK(max_diff(u1_matrix(0), Eigen::Matrix2cd::Identity()) < 1e-15);
  CHECK(max_diff(u1_matrix(pi), z) < 1e-15);
  CHECK(max_diff(u1_matrix(pi / 2), s) < 1e-15);
  CHECK_THROWS_AS(u1_matrix(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("gate matrices match their definitions and are unitary") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = rng.uniform(-10, 10), b = rng.uniform(-10, 10), c = rng.uniform(-10, 10);
    const Mat2 mats[] = {u3_matrix(a, b, c), u1_matrix(a), ry_matrix(a), rz_matrix(a), hadamard_matrix(),
                         pauli_x_matrix()};
    for (const auto& m : mats) CHECK(is_unitary(m, 2, 1e-12));
    CHECK(max_diff(u3_matrix(a, b, c), oracle::u3(a, b, c)) < 1e-14);
    CHECK(max_diff(ry_matrix(a), oracle::ry(a)) < 1e-13);
    CHECK(max_diff(rz_matrix(a), oracle::rz(a)) < 1e-13);
  }
}

TEST_CASE("simulate examples") {
  Circuit empty(2);
  Rng rng(1);
  const StateVector psi = oracle::random_state(2, rng);
  CHECK(max_diff(simulate(empty, {}, psi), psi) < 1e-15);

  Circuit h(1);
  h.add_h(0);
  const StateVector plus = simulate(h, {}, zero_state(1));
  CHECK(std::abs(plus[0] - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(plus[1] - std::sqrt(0.5)) < 1e-15);

  Circuit bell(2);
  bell.add_h(0);
  bell.add_cnot(0, 1);
  const StateVector b = simulate(bell, {}, zero_state(2));
  CHECK(std::abs(b[0] - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(b[3] - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(b[1]) + std::abs(b[2]) < 1e-15);

  Circuit one(1);
  one.add_ry(0, Angle::param(one.new_param()));
  const std::vector<double> too_many{1.0, 2.0};
  CHECK_THROWS_AS(simulate(one, too_many, zero_state(1)), std::invalid_argument);
  const std::vector<double> ok{1.0};
  CHECK_THROWS_AS(simulate(one, ok, zero_state(2)), std::invalid_argument);
}

TEST_CASE("inverse examples") {
  Circuit h(1);
  h.add_h(0);
  const Circuit hi = inverse(h);
  REQUIRE(hi.gates().size() == 1);
  CHECK(hi.gates()[0].kind == GateKind::H);
  CHECK(max_diff(simulate(hi, {}, simulate(h, {}, zero_state(1))), zero_state(1)) < 1e-15);

  Circuit u1(1);
  u1.add_u1(0, Angle::param(u1.new_param()));
  const Circuit u1i = inverse(u1);
  REQUIRE(u1i.gates().size() == 1);
  CHECK(u1i.gates()[0].kind == GateKind::U1);
  const std::vector<double> p{0.7};
  CHECK(std::abs(u1i.gates()[0].angles[0].value(p) + 0.7) < 1e-15);

  Circuit u3(1);
  const int t = u3.new_param(), ph = u3.new_param(), l = u3.new_param();
  u3.add_u3(0, Angle::param(t), Angle::param(ph), Angle::param(l));
  const Circuit u3i = inverse(u3);
  const std::vector<double> q{0.3, 0.5, 1.1};
  const auto& g = u3i.gates()[0];
  CHECK(g.angles[0].value(q) == doctest::Approx(-0.3));
  CHECK(g.angles[1].value(q) == doctest::Approx(-1.1));
  CHECK(g.angles[2].value(q) == doctest::Approx(-0.5));
}

TEST_CASE("circuit composed with its inverse is the identity") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const Circuit c = oracle::random_circuit(4, 10, rng);
    const Circuit ci = inverse(c);
    const auto p = random_params(c, rng);
    for (int s = 0; s < 5; ++s) {
      const StateVector psi = oracle::random_state(4, rng);
      CHECK(max_diff(simulate(ci, p, simulate(c, p, psi)), psi) < 1e-10);
    }
    const oracle::Matrix u = oracle::circuit_unitary(ci, p) * oracle::circuit_unitary(c, p);
    CHECK((u - oracle::Matrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-10);
  }
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + static_cast<int>(rng.index(6));
    const Circuit c = oracle::random_circuit(n, 1 + static_cast<int>(rng.index(60)), rng);
    const auto p = random_params(c, rng);
    const StateVector psi = oracle::random_state(n, rng);
    CHECK(max_diff(simulate(inverse(c), p, simulate(c, p, psi)), psi) < 1e-10);
  }
}

TEST_CASE("freeze binds every angle") {
  Rng rng(4);
  const Circuit c = oracle::random_circuit(3, 20, rng);
  const auto p = random_params(c, rng);
  const Circuit f = freeze(c, p);
  CHECK(f.n_params() == 0);
  const StateVector psi = oracle::random_state(3, rng);
  CHECK(max_diff(simulate(f, {}, psi), simulate(c, p, psi)) < 1e-14);
  CHECK(resource_counts(f).n_gates == resource_counts(c).n_gates);
  CHECK(resource_counts(f).n_two_qubit == resource_counts(c).n_two_qubit);
}

TEST_CASE("append remaps qubits and slots") {
  Circuit base(3);
  base.add_ry(0, Angle::param(base.new_param()));
  Circuit other(2);
  other.add_ry(0, Angle::param(other.new_param()));
  other.add_cnot(0, 1);
  const std::vector<int> map{2, 1};
  append(base, other, map, base.n_params());
  CHECK(base.n_params() == 2);
  CHECK(base.gates()[1].targets == std::vector<int>{2});
  CHECK(base.gates()[1].angles[0].slot == 1);
  CHECK(base.gates()[2].targets == std::vector<int>{2, 1});
}

TEST_CASE("resource counts") {
  CHECK(resource_counts(uccsd_h2()).n_params == 3);
  CHECK(resource_counts(efficient_su2(4, 3)).n_params == 32);
  const ResourceCounts latent = resource_counts(strongly_entangling(2, 1));
  CHECK(latent.n_params == 12);
  CHECK(latent.n_gates == 6);
  CHECK(latent.n_two_qubit == 2);
}

TEST_CASE("validation rejects malformed circuits") {
  Circuit c(2);
  CHECK_THROWS_AS(c.add_cnot(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(c.add_h(2), std::invalid_argument);
  CHECK_THROWS_AS(c.add_ry(0, Angle::param(0)), std::invalid_argument);
  Circuit unused(1, 1);
  unused.add_h(0);
  CHECK_THROWS_AS(unused.validate(), std::invalid_argument);
  CHECK_THROWS_AS(Circuit(0), std::invalid_argument);
}

TEST_CASE("circuit JSON round trip") {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const Circuit c = oracle::random_circuit(4, 30, rng);
    const nlohmann::json j = to_json(c);
    CHECK(j.at("n_qubits") == 4);
    CHECK(j.at("gates").size() == 30);
    const Circuit back = circuit_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back == c);
  }
  const Circuit u = uccsd_h2();
  CHECK(circuit_from_json(to_json(u)) == u);
}
