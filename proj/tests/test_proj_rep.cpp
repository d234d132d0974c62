#include <gtest/gtest.h>

#include <random>

#include "sptkit/detector.hpp"
#include "sptkit/proj_rep.hpp"

using namespace sptkit;

namespace {

Mat pauli(char c) {
  Mat m(2, 2);
  switch (c) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m = Mat::Identity(2, 2);
  }
  return m;
}

// Element 1 = X, 2 = Z, 3 = XZ on Z2xZ2.
std::vector<Mat> pauli_assignment() { return {pauli('1'), pauli('x'), pauli('z'), pauli('x') * pauli('z')}; }

std::vector<Phase> random_phases(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
  std::vector<Phase> l(n);
  for (int g = 1; g < n; ++g) l[g] = Phase::from_angle(ang(rng));
  return l;
}

}  // namespace

TEST(ProjRep, PauliMultiplier) {
  auto g = build_group("Z2xZ2");
  auto rep = extract_multiplier(g, pauli_assignment());
  EXPECT_TRUE(check_cocycle(rep.multiplier).empty());
  // Independent: XZ = -ZX directly.
  Mat xz = pauli('x') * pauli('z'), zx = pauli('z') * pauli('x');
  EXPECT_LT(max_abs(xz + zx), 1e-15);
  auto cls = classify_rep(rep);
  EXPECT_FALSE(cls.is_trivial());
  EXPECT_EQ((*cls.fingerprint)[1 * 4 + 2], Phase::exact(1, 2));
  EXPECT_EQ(commutant_dimension(rep), 1);
}

TEST(ProjRep, LinearRepHasTrivialMultiplier) {
  auto g = build_group("Z2xZ2");
  auto reg = regular_projective_rep(trivial_cocycle(g));
  auto rep = extract_multiplier(g, reg.matrices);
  for (const auto& p : rep.multiplier.table) EXPECT_LT(Phase::distance(p, Phase::one()), 1e-14);
  EXPECT_TRUE(classify_rep(rep).is_trivial());
  // Permutation matrices.
  for (const auto& m : reg.matrices) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) EXPECT_NEAR(m.row(i).cwiseAbs().sum(), 1.0, 1e-15);
    EXPECT_LT(max_abs(m - m.real().cast<cplx>()), 1e-15);
  }
  EXPECT_EQ(commutant_dimension(reg), 4);
}

TEST(ProjRep, SpinDetectorRealizations) {
  for (int two_s = 1; two_s <= 6; ++two_s) {
    auto spec = so3_detector(two_s);
    auto rep = extract_multiplier(spec.subgroup, spec.realizations);
    bool half = two_s % 2 == 1;
    EXPECT_EQ(classify_rep(rep).is_trivial(), !half) << two_s;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const Phase& mu = rep.multiplier(a, b);
        // Signs only; for integer spin the group law holds exactly.
        EXPECT_TRUE(mu.is_one() || Phase::distance(mu, Phase::exact(1, 2)) < 1e-12);
        if (!half) {
          EXPECT_LT(Phase::distance(mu, Phase::one()), 1e-12);
        }
      }
  }
}

TEST(ProjRep, TensorAndConjugate) {
  auto g = build_group("Z2xZ2");
  auto p = extract_multiplier(g, pauli_assignment());
  EXPECT_TRUE(classify_rep(rep_tensor(p, p)).is_trivial());
  EXPECT_TRUE(classify_rep(rep_tensor(p, rep_conjugate(p))).is_trivial());
  auto one = extract_multiplier(g, std::vector<Mat>(4, Mat::Identity(1, 1)));
  EXPECT_EQ(classify_rep(rep_tensor(p, one)), classify_rep(p));
  auto cc = rep_conjugate(rep_conjugate(p));
  for (int e = 0; e < 4; ++e) EXPECT_EQ(cc.matrices[e], p.matrices[e]);
  auto reg = regular_projective_rep(trivial_cocycle(g));
  for (int e = 0; e < 4; ++e) EXPECT_EQ(rep_conjugate(reg).matrices[e], reg.matrices[e]);
  EXPECT_EQ(classify_rep(rep_conjugate(p)), class_inverse(classify_rep(p)));
  EXPECT_EQ(classify_rep(rep_conjugate(p)), classify_rep(p));
}

TEST(ProjRep, RegularRepRoundtripForAllGenerators) {
  for (const char* name : {"Z2", "Z4", "Z2xZ2", "Z2^3", "Z2xZ4", "Z3xZ3", "D4", "Q8", "S3"}) {
    auto g = build_group(name);
    auto h2 = compute_h2(g);
    std::vector<Cocycle> reps{trivial_cocycle(g)};
    for (const auto& gen : h2.generators) reps.push_back(gen);
    for (const auto& mu : reps) {
      auto reg = regular_projective_rep(mu);
      auto ex = extract_multiplier(g, reg.matrices);
      EXPECT_EQ(classify_rep(ex), classify(mu)) << name;
      if (!g->is_abelian()) {
        EXPECT_TRUE(same_class(classify_rep(ex), classify(mu)));
      }
    }
  }
}

TEST(ProjRep, RegularRepRejectsApproximate) {
  Cocycle mu = trivial_cocycle(build_group("Z2"));
  mu.at(1, 1) = Phase::from_angle(0.0);
  EXPECT_THROW(regular_projective_rep(mu), Error);
}

TEST(ProjRep, GaugeCovariance) {
  std::mt19937_64 rng(99);
  auto g = build_group("Z2xZ2");
  std::vector<std::vector<Mat>> reps{pauli_assignment(), regular_projective_rep(compute_h2(g).generators[0]).matrices,
                                     so3_detector(1).realizations, so3_detector(2).realizations};
  for (const auto& mats : reps) {
    auto base = extract_multiplier(g, mats);
    auto cls = classify_rep(base);
    for (int t = 0; t < 50; ++t) {
      auto lambda = random_phases(4, rng);
      auto gauged = extract_multiplier(g, phase_regauge(mats, lambda));
      auto d = coboundary(g, lambda);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          EXPECT_LT(Phase::distance(gauged.multiplier(a, b), base.multiplier(a, b) * d(a, b)), 1e-12);
      // Random phases are not algebraic: the det gauge restores snappable values.
      auto fixed = extract_multiplier(g, det_gauge(phase_regauge(mats, lambda)));
      EXPECT_EQ(classify_rep(fixed), cls);
    }
  }
}

TEST(ProjRep, DetGaugeGivesRootsOfUnity) {
  auto g = build_group("Z3xZ3");
  auto gen = compute_h2(g).generators[0];
  std::mt19937_64 rng(1);
  auto mats = phase_regauge(regular_projective_rep(gen).matrices, random_phases(9, rng));
  auto rep = extract_multiplier(g, det_gauge(mats));
  for (const auto& p : rep.multiplier.table) EXPECT_TRUE(p.snapped(rep.dim, 1e-10).has_value());
  EXPECT_EQ(classify_rep(rep), classify(gen));
}

TEST(ProjRep, TensorHomomorphismExhaustive) {
  auto g = build_group("Z2xZ2");
  std::vector<MultiplierRep> reps;
  reps.push_back(extract_multiplier(g, pauli_assignment()));
  reps.push_back(extract_multiplier(g, std::vector<Mat>(4, Mat::Identity(1, 1))));
  for (int two_s = 1; two_s <= 3; ++two_s) reps.push_back(extract_multiplier(g, so3_detector(two_s).realizations));
  reps.push_back(regular_projective_rep(compute_h2(g).generators[0]));
  for (const auto& a : reps)
    for (const auto& b : reps) {
      auto t = rep_tensor(a, b);
      auto ex = extract_multiplier(g, t.matrices);
      EXPECT_EQ(classify_rep(ex), class_product(classify_rep(a), classify_rep(b)));
    }
}

TEST(ProjRep, RejectsBadInput) {
  auto g = build_group("Z2xZ2");
  auto mats = pauli_assignment();
  mats[1] *= 1.1;
  EXPECT_THROW(extract_multiplier(g, mats), Error);
  std::mt19937_64 rng(4);
  std::vector<Mat> rnd{Mat::Identity(2, 2), random_unitary(2, rng), random_unitary(2, rng), random_unitary(2, rng)};
  try {
    extract_multiplier(g, rnd);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
  }
}
