#include <gtest/gtest.h>

#include <random>

#include "sptkit/circuit.hpp"
#include "sptkit/locality.hpp"

using namespace sptkit;

namespace {

ChargedProductSpec spec_from(const GroupPtr& g, const std::vector<Charge>& q) {
  ChargedProductSpec s;
  s.group = g;
  s.charges = q;
  return s;
}

std::vector<Charge> random_cyclic_charges(const GroupPtr& g, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> k(0, g->order() - 1);
  std::vector<Charge> q;
  for (int i = 0; i < n; ++i) q.push_back(cyclic_charge(g, k(rng)));
  return q;
}

// Full state vector over all stacked sites, site 0 most significant.
Vec full_vector(const std::vector<Vec>& sites) {
  Vec v = Vec::Ones(1);
  for (const auto& s : sites) v = kron(v, s);
  return v;
}

Vec apply_gate_full(const GateCircuit& c, const Gate& g, const Vec& psi) {
  const int L = static_cast<int>(c.sites.size());
  std::vector<long> stride(L, 1);
  for (int i = L - 2; i >= 0; --i) stride[i] = stride[i + 1] * c.sites[i + 1].dim();
  const long gd = g.matrix.rows();
  long inner = 1;
  for (int s = g.first; s <= g.last; ++s) inner *= c.sites[s].dim();
  EXPECT_EQ(inner, gd);
  Vec out = Vec::Zero(psi.size());
  for (long idx = 0; idx < psi.size(); ++idx) {
    if (psi(idx) == cplx(0)) continue;
    // Local index on the support and the remainder.
    long local = 0, rest = idx;
    for (int s = g.first; s <= g.last; ++s) {
      long k = (idx / stride[s]) % c.sites[s].dim();
      local = local * c.sites[s].dim() + k;
      rest -= k * stride[s];
    }
    for (long k = 0; k < gd; ++k) {
      cplx a = g.matrix(k, local);
      if (a == cplx(0)) continue;
      long j = rest, t = k;
      for (int s = g.last; s >= g.first; --s) {
        j += (t % c.sites[s].dim()) * stride[s];
        t /= c.sites[s].dim();
      }
      out(j) += a * psi(idx);
    }
  }
  return out;
}

void check_trivial_interior(const ChargeTransfer& t) {
  for (int i = 0; i < t.circuit.length; ++i) EXPECT_TRUE(is_trivial(t.final_spec.charges[i])) << "site " << i;
}

}  // namespace

TEST(ChargeTransfer, TrivialChargesGiveIdentityGates) {
  auto g = build_group("Z4");
  auto t = charge_transfer_circuit(spec_from(g, std::vector<Charge>(6, trivial_charge(g))), 6);
  for (const auto& gate : t.circuit.gates)
    EXPECT_LT(max_abs(gate.matrix - Mat::Identity(gate.matrix.rows(), gate.matrix.cols())), 1e-15);
  EXPECT_EQ(t.initial, t.final);
  for (const auto& s : t.circuit.sites) EXPECT_EQ(s.dim(), 1);
}

TEST(ChargeTransfer, SingleChargeOnZ8FullVector) {
  auto g = build_group("Z8");
  const int n = 10;
  std::vector<Charge> q(n, trivial_charge(g));
  q[0] = cyclic_charge(g, 3);
  auto t = charge_transfer_circuit(spec_from(g, q), n);
  check_trivial_interior(t);
  EXPECT_TRUE(charges_equal(t.final_spec.charges[n], q[0]));
  EXPECT_LT(circuit_equivariance_residual(t.circuit), 1e-12);

  Vec psi = full_vector(basis_product(t.circuit, t.initial));
  for (const auto& gate : t.circuit.gates) psi = apply_gate_full(t.circuit, gate, psi);
  Vec expect = full_vector(basis_product(t.circuit, t.final));
  EXPECT_NEAR(std::abs(expect.dot(psi) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
}

TEST(ChargeTransfer, RandomZ4MatchesStateVectorOracle) {
  auto g = build_group("Z4");
  for (int n : {2, 4, 6}) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      auto q = random_cyclic_charges(g, n, seed * 31 + n);
      auto t = charge_transfer_circuit(spec_from(g, q), n);
      Vec psi = full_vector(basis_product(t.circuit, t.initial));
      for (const auto& gate : t.circuit.gates) psi = apply_gate_full(t.circuit, gate, psi);
      auto run = simulate_product(t.circuit, basis_product(t.circuit, t.initial));
      EXPECT_LT((full_vector(run.sites) - psi).norm(), 1e-12);
      EXPECT_NEAR(std::abs(full_vector(basis_product(t.circuit, t.final)).dot(psi) - 1.0), 0.0, 1e-12);
    }
  }
}

TEST(ChargeTransfer, RandomZ4WindowTwelve) {
  auto g = build_group("Z4");
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto q = random_cyclic_charges(g, 12, seed);
    auto t = charge_transfer_circuit(spec_from(g, q), 12);
    EXPECT_LT(circuit_equivariance_residual(t.circuit), 1e-12);
    EXPECT_TRUE(layers_disjoint(t.circuit));
    check_trivial_interior(t);
    // Boundary carries the product of all input charges.
    Charge total = trivial_charge(g);
    for (const auto& c : q) total = charge_product(total, c);
    EXPECT_TRUE(charges_equal(t.final_spec.charges[12], total));
    auto run = simulate_product(t.circuit, basis_product(t.circuit, t.initial));
    EXPECT_LT(run.product_residual, 1e-12);
    EXPECT_NEAR(std::abs(product_overlap(basis_product(t.circuit, t.final), run.sites) - 1.0), 0.0, 1e-12);
  }
}

TEST(ChargeTransfer, EquivarianceOnOtherGroups) {
  // Sign character of S3 and a character of Z2xZ2, mixed with trivial sites.
  auto s3 = build_group("S3");
  Charge sign{s3, {}};
  // Sign = +1 on the rotations {e, r, r^2}, -1 on the three involutions.
  for (int x = 0; x < 6; ++x) sign.values.push_back(x == 0 || s3->mul(x, x) != 0 ? Phase::one() : Phase::exact(1, 2));
  ASSERT_TRUE(validate_charge(sign).empty());
  auto k4 = build_group("Z2xZ2");
  Charge c{k4, {Phase::one(), Phase::exact(1, 2), Phase::exact(1, 2), Phase::one()}};
  ASSERT_TRUE(validate_charge(c).empty());
  for (const auto& q : {std::vector<Charge>{sign, trivial_charge(s3), sign, sign},
                        std::vector<Charge>{c, c, trivial_charge(k4), c, c, c}}) {
    auto t = charge_transfer_circuit(spec_from(q[0].group, q), static_cast<int>(q.size()));
    EXPECT_LT(circuit_equivariance_residual(t.circuit), 1e-12);
    check_trivial_interior(t);
  }
}

TEST(ChargeTransfer, Guards) {
  auto g = build_group("Z4");
  auto q = random_cyclic_charges(g, 4, 3);
  try {
    charge_transfer_circuit(spec_from(g, q), 26);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resource_guard);
  }
  EXPECT_THROW(charge_transfer_circuit(spec_from(g, q), 5), Error);
  auto s = spec_from(g, {cyclic_charge(g, 1)});
  s.first_site = -1;
  EXPECT_THROW(charge_transfer_circuit(s, 4), Error);
  EXPECT_THROW(charge_transfer_circuit(spec_from(g, random_cyclic_charges(g, 8, 1)), 4), Error);
  Charge bad = cyclic_charge(g, 1);
  bad.values[2] = Phase::exact(1, 3);
  EXPECT_THROW(charge_transfer_circuit(spec_from(g, {bad}), 4), Error);
}

TEST(ChargeTransfer, GeneratorsReproduceGates) {
  auto g = build_group("Z4");
  auto t = charge_transfer_circuit(spec_from(g, random_cyclic_charges(g, 8, 9)), 8);
  for (const auto& gate : t.circuit.gates) {
    Mat h = unitary_generator(gate.matrix, 1.0 / 3.0);
    EXPECT_LT(max_abs(h - h.adjoint()), 1e-12);
    EXPECT_LT(max_abs(expi_hermitian(h, -1.0 / 3.0) - gate.matrix), 1e-10);
    Gate as_gate{gate.first, gate.last, h, gate.layer};
    EXPECT_LT(gate_equivariance_residual(t.circuit, as_gate), 1e-10);
  }
}
