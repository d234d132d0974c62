#include <gtest/gtest.h>

#include <algorithm>
#include <array>

#include "sptkit/group.hpp"

using namespace sptkit;

namespace {

const char* kCatalog[] = {"Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z2xZ2", "Z2^3", "D4", "Q8", "S3"};

}  // namespace

TEST(Group, CatalogTablesAreGroups) {
  for (const char* name : kCatalog) {
    auto g = build_group(name);
    for (int a = 0; a < g->order(); ++a) {
      EXPECT_EQ(g->inv(g->inv(a)), a) << name;
      EXPECT_EQ(g->mul(a, g->inv(a)), 0) << name;
      for (int b = 0; b < g->order(); ++b)
        for (int c = 0; c < g->order(); ++c)
          ASSERT_EQ(g->mul(g->mul(a, b), c), g->mul(a, g->mul(b, c))) << name;
    }
  }
}

TEST(Group, TrivialGroup) {
  auto g = build_group("Z1");
  EXPECT_EQ(g->order(), 1);
  EXPECT_EQ(g->table(), (std::vector<std::vector<int>>{{0}}));
}

TEST(Group, KleinFourSelfInverse) {
  auto g = build_group("Z2xZ2");
  EXPECT_EQ(g->order(), 4);
  for (int a = 0; a < 4; ++a) EXPECT_EQ(g->inv(a), a);
  EXPECT_TRUE(g->is_abelian());
}

TEST(Group, ExplicitS3TableHasThreeInvolutions) {
  // Independent table: permutations of {0,1,2} composed by hand.
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> c{perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]};
      t[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  auto g = make_group("S3", t);
  EXPECT_EQ(g->order(), 6);
  int involutions = 0;
  for (int a = 0; a < 6; ++a) involutions += g->element_order(a) == 2;
  EXPECT_EQ(involutions, 3);
  EXPECT_FALSE(g->is_abelian());
  EXPECT_TRUE(same_group(g, build_group("S3")));
}

TEST(Group, QuaternionAndDihedralStructure) {
  auto q8 = build_group("Q8");
  auto d4 = build_group("D4");
  int q_inv = 0, d_inv = 0;
  for (int a = 0; a < 8; ++a) {
    q_inv += q8->element_order(a) == 2;
    d_inv += d4->element_order(a) == 2;
  }
  EXPECT_EQ(q_inv, 1);
  EXPECT_EQ(d_inv, 5);
}

TEST(Group, RejectsNonAssociativeTable) {
  // Latin square with identity 0 that is not associative.
  std::vector<std::vector<int>> t{{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  try {
    make_group("bad", t);
    FAIL() << "expected validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
    EXPECT_NE(std::string(e.what()).find("associative"), std::string::npos);
  }
}

TEST(Group, RejectsNonClosedTable) {
  EXPECT_THROW(make_group("bad", {{0, 1}, {1, 2}}), Error);
  EXPECT_THROW(build_group("Zfoo"), Error);
}

TEST(Charge, ProductLaws) {
  for (const char* name : kCatalog) {
    auto g = build_group(name);
    if (g->order() > 8) continue;
    Charge triv = trivial_charge(g);
    std::vector<Charge> chars{triv};
    // All characters of cyclic factors we can write down directly.
    if (std::string(name).rfind("Z", 0) == 0 && std::string(name).find('x') == std::string::npos &&
        std::string(name).find('^') == std::string::npos) {
      for (int k = 0; k < g->order(); ++k) chars.push_back(cyclic_charge(g, k));
    }
    for (const auto& a : chars) {
      EXPECT_TRUE(validate_charge(a).empty());
      EXPECT_TRUE(charges_equal(charge_product(a, triv), a));
      EXPECT_TRUE(is_trivial(charge_product(a, charge_conjugate(a))));
      for (const auto& b : chars) {
        EXPECT_TRUE(charges_equal(charge_product(a, b), charge_product(b, a)));
        for (const auto& c : chars)
          EXPECT_TRUE(charges_equal(charge_product(charge_product(a, b), c), charge_product(a, charge_product(b, c))));
      }
    }
  }
}

TEST(Charge, Z4SquareIsSign) {
  auto g = build_group("Z4");
  Charge q = cyclic_charge(g, 1);
  Charge sq = charge_product(q, q);
  for (int x = 0; x < 4; ++x) EXPECT_EQ(sq(x), Phase::exact(x % 2, 2));
}

TEST(Charge, CorruptedEntryIsReported) {
  auto g = build_group("Z2");
  Charge q = trivial_charge(g);
  q.values[1] = Phase::exact(1, 4);
  auto bad = validate_charge(q);
  // q(1)q(1) = -1 but q(0) = 1; every pair involving the identity is fine.
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0].g, 1);
  EXPECT_EQ(bad[0].h, 1);
}

TEST(Phase, ExactArithmetic) {
  Phase a = Phase::exact(1, 4), b = Phase::exact(3, 4);
  EXPECT_TRUE((a * b).is_one());
  EXPECT_EQ(a.pow(2), Phase::exact(1, 2));
  EXPECT_EQ(Phase::exact(-1, 3), Phase::exact(2, 3));
  EXPECT_EQ(Phase::exact(2, 4).den(), 2);
  auto s = Phase::from_angle(std::numbers::pi / 2 + 1e-9).snapped(8, 1e-6);
  ASSERT_TRUE(s);
  EXPECT_EQ(*s, Phase::exact(1, 4));
  EXPECT_FALSE(Phase::from_angle(0.1).snapped(8, 1e-6));
}
