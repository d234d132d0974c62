#include <gtest/gtest.h>

#include <random>

#include "sptkit/mps.hpp"
#include "sptkit/states.hpp"

using namespace sptkit;

namespace {

SymmetricMps random_mps(int d, int D, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<Mat> A;
  for (int i = 0; i < d; ++i) {
    Mat m(D, D);
    for (int r = 0; r < D; ++r)
      for (int c = 0; c < D; ++c) m(r, c) = cplx(nd(rng), nd(rng));
    A.push_back(m);
  }
  auto g = build_group("Z1");
  return make_mps(A, g, {Mat::Identity(d, d)}, "random");
}

// Oracle: <O> from the raw (non-canonical) tensor with the state-index
// convention E = sum A (x) conj(A) and its dense left/right eigenvectors.
cplx raw_expectation(const std::vector<Mat>& A, const Mat& O) {
  const Eigen::Index D = A[0].rows();
  Mat E = Mat::Zero(D * D, D * D), EO = Mat::Zero(D * D, D * D);
  for (std::size_t s = 0; s < A.size(); ++s) {
    E += kron(A[s], A[s].conjugate());
    for (std::size_t sp = 0; sp < A.size(); ++sp) EO += O(sp, s) * kron(A[s], A[sp].conjugate());
  }
  Eigen::ComplexEigenSolver<Mat> right(E), left(E.transpose());
  Eigen::Index ir, il;
  right.eigenvalues().cwiseAbs().maxCoeff(&ir);
  left.eigenvalues().cwiseAbs().maxCoeff(&il);
  Vec r = right.eigenvectors().col(ir), l = left.eigenvectors().col(il);
  cplx lam = right.eigenvalues()(ir);
  return (l.transpose() * EO * r)(0) / (lam * (l.transpose() * r)(0));
}

Mat sz1() { return spin_operators(2).z; }

}  // namespace

TEST(Mps, ProductStateUnchanged) {
  auto m = product_state(trivial_charge(build_group("Z2")));
  EXPECT_EQ(m.D, 1);
  EXPECT_NEAR(std::abs(m.A[0](0, 0)), 1.0, 1e-15);
  auto s = schmidt_spectrum(m);
  ASSERT_EQ(s.values.size(), 1u);
  EXPECT_NEAR(s.values[0], 1.0, 1e-15);
}

TEST(Mps, AkltCanonicalForm) {
  auto m = aklt_state();
  EXPECT_LT(left_canonical_error(m), 1e-10);
  auto s = schmidt_spectrum(m);
  ASSERT_EQ(s.values.size(), 2u);
  EXPECT_NEAR(s.values[0], 0.5, 1e-10);
  EXPECT_NEAR(s.values[1], 0.5, 1e-10);
  EXPECT_EQ(s.blocks.size(), 1u);
  auto fp = transfer_fixed_point(m);
  EXPECT_NEAR(std::abs(fp.eigenvalue - 1.0), 0.0, 1e-12);
  EXPECT_LT(max_abs(fp.left - Mat::Identity(2, 2)), 1e-10);
  EXPECT_LT(max_abs(fp.right - Mat::Identity(2, 2) / 2.0), 1e-10);
}

TEST(Mps, RandomTensorCanonicalization) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto raw = random_mps(3, 4, seed);
    auto m = canonicalize(raw);
    EXPECT_LT(left_canonical_error(m), 1e-10);
    auto fp = transfer_fixed_point(m);
    EXPECT_LT(fp.residual, 1e-9);
    EXPECT_LT(max_abs(fp.right - fp.right.adjoint()), 1e-10);
    EXPECT_NEAR(std::abs((fp.left * fp.right).trace() - 1.0), 0.0, 1e-12);
    // Schmidt values descending and summing to one.
    auto s = schmidt_spectrum(m);
    EXPECT_NEAR(s.sum, 1.0, 1e-9);
    for (std::size_t i = 1; i < s.values.size(); ++i) EXPECT_GE(s.values[i - 1], s.values[i]);
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 3; ++t) {
      Mat O = random_hermitian(3, rng);
      EXPECT_NEAR(std::abs(expectation(m, O) - raw_expectation(raw.A, O)), 0.0, 1e-8);
    }
    // Idempotence.
    auto m2 = canonicalize(m);
    for (int i = 0; i < 3; ++i) EXPECT_LT(max_abs(m2.A[i] - m.A[i]), 1e-10);
  }
}

TEST(Mps, RefusesNonInjective) {
  Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  auto ghz = make_mps({p0, p1}, build_group("Z1"), {Mat::Identity(2, 2)}, "ghz");
  EXPECT_THROW(canonicalize(ghz), Error);
}

TEST(Mps, TwistedTransfer) {
  auto m = aklt_state();
  auto rz = expi_hermitian(sz1(), std::numbers::pi);
  EXPECT_NEAR(std::abs(transfer_fixed_point(m, rz).eigenvalue), 1.0, 1e-8);
  Mat proj = Mat::Zero(3, 3);
  proj(0, 0) = proj(1, 1) = 1;
  EXPECT_LT(std::abs(transfer_fixed_point(m, proj).eigenvalue), 1.0 - 1e-3);
}

TEST(Mps, SymmetryConsistencyOnCatalog) {
  std::vector<SymmetricMps> states{aklt_state(), cluster_state(), spin1_product_state(),
                                   product_state(cyclic_charge(build_group("Z3"), 1))};
  for (const auto& m : states)
    for (const auto& U : m.onsite) EXPECT_NEAR(std::abs(transfer_fixed_point(m, U).eigenvalue), 1.0, 1e-8) << m.label;
}

TEST(Mps, ProductStateCorrelationsVanish) {
  auto m = spin1_product_state();
  auto s = spin_operators(2);
  for (int r = 1; r <= 5; ++r) EXPECT_LT(std::abs(connected_correlation(m, s.x, s.z + s.x, r)), 1e-12);
}

TEST(Mps, AkltCorrelationRatio) {
  auto m = aklt_state();
  Mat z = sz1();
  for (int r = 1; r <= 10; ++r) {
    cplx c = connected_correlation(m, z, z, r);
    EXPECT_NEAR(c.real(), 4.0 / 3.0 * std::pow(-1.0 / 3.0, r), 1e-12);
    if (r >= 2) {
      double ratio = std::abs(c) / std::abs(connected_correlation(m, z, z, r - 1));
      EXPECT_NEAR(ratio, 1.0 / 3.0, 1e-6);
    }
  }
  // Decay rate equals the second transfer eigenvalue.
  EXPECT_NEAR(transfer_fixed_point(m).second_abs, 1.0 / 3.0, 1e-10);
}

TEST(Mps, SchmidtSpectraOfCatalog) {
  auto c = schmidt_spectrum(cluster_state());
  ASSERT_EQ(c.values.size(), 2u);
  EXPECT_NEAR(c.values[0], 0.5, 1e-10);
  EXPECT_NEAR(c.values[1], 0.5, 1e-10);
  for (const auto& m : {aklt_state(), cluster_state(), spin1_product_state()}) {
    auto s = schmidt_spectrum(m);
    EXPECT_NEAR(s.sum, 1.0, 1e-9);
    EXPECT_GE(s.values[0], s.lower_bound);
  }
}

TEST(FiniteChain, ProductTensorPower) {
  std::vector<Mat> A{Mat::Constant(1, 1, 0.6), Mat::Constant(1, 1, 0.8)};
  auto m = make_mps(A, build_group("Z1"), {Mat::Identity(2, 2)}, "p");
  Vec one = Vec::Ones(1);
  Vec psi = finite_chain_vector(m, 3, one, one);
  Vec site(2);
  site << 0.6, 0.8;
  Vec expect = kron(kron(site, site), site);
  EXPECT_LT((psi - expect).norm(), 1e-14);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
}

TEST(FiniteChain, AkltAgreesWithTransfer) {
  auto m = aklt_state();
  Mat z = sz1();
  Vec vl = Vec::Zero(2), vr = Vec::Zero(2);
  vl(0) = 1;
  vr(1) = 1;
  auto bulk = [&](int n, int dist) {
    Vec psi = finite_chain_vector(m, n, vl, vr);
    int a = n / 2 - dist / 2 - (dist % 2), b = a + dist;
    Vec t = apply_site_operator(apply_site_operator(psi, z, b, n, 3), z, a, n, 3);
    Vec sa = apply_site_operator(psi, z, a, n, 3), sb = apply_site_operator(psi, z, b, n, 3);
    return (psi.dot(t) - psi.dot(sa) * psi.dot(sb)).real();
  };
  EXPECT_NEAR(bulk(8, 2), connected_correlation(m, z, z, 2).real(), 1e-3);
  EXPECT_NEAR(finite_chain_vector(m, 8, vl, vr).norm(), 1.0, 1e-12);
  double prev = 1e9;
  for (int n : {4, 6, 8, 10}) {
    double err = std::abs(bulk(n, 1) - connected_correlation(m, z, z, 1).real());
    EXPECT_LT(err, prev) << n;
    prev = err;
  }
}

TEST(FiniteChain, Guard) {
  auto m = aklt_state();
  Vec v = Vec::Ones(2);
  try {
    finite_chain_vector(m, 13, v, v);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resource_guard);
  }
}

TEST(Mps, BlockingPreservesCorrelations) {
  auto m = aklt_state();
  auto b = canonicalize(block_sites(m, 2));
  EXPECT_EQ(b.d, 9);
  Mat z = sz1(), id = Mat::Identity(3, 3);
  // <Sz_0 Sz_2> = <(Sz x 1)_0 (Sz x 1)_1> on the blocked chain
  EXPECT_NEAR(std::abs(correlation(b, kron(z, id), kron(z, id), 1) - correlation(m, z, z, 2)), 0.0, 1e-10);
}
