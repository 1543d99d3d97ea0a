#include <groupeq/constructions.hpp>
#include <groupeq/group_io.hpp>
#include <groupeq/isomorphism.hpp>
#include <groupeq/structure.hpp>

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace groupeq;

namespace {

std::vector<std::size_t> orders_of(const std::vector<Subgroup>& subs) {
  std::vector<std::size_t> out;
  for (const auto& s : subs) out.push_back(s.order());
  return out;
}

FiniteGroup s3() { return load_group("group S3 order 6\ngenerators:\n(1 2)\n(1 2 3)\n"); }

FiniteGroup klein() { return direct_product(cyclic(2), cyclic(2)); }

}  // namespace

TEST(LoadGroup, TrivialTable) {
  auto g = load_group("group one order 1\ntable:\n0\n");
  EXPECT_EQ(g.order(), 1u);
  EXPECT_EQ(g.element_name(0), "1");
}

TEST(LoadGroup, NonAssociativeTableIsRejected) {
  // C6 with an intercalate swapped: still a loop, but not associative.
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) t[a][b] = (a + b) % 6;
  std::swap(t[1][1], t[1][4]);
  std::swap(t[4][1], t[4][4]);
  std::string text = "group bad order 6\ntable:\n";
  for (auto& row : t) {
    for (int v : row) text += std::to_string(v) + " ";
    text += "\n";
  }
  try {
    load_group(text);
    FAIL() << "expected AxiomError";
  } catch (const AxiomError& e) {
    EXPECT_NE(std::string(e.what()).find("not associative"), std::string::npos) << e.what();
  }
}

TEST(LoadGroup, SymmetricGroupFromGenerators) {
  auto g = s3();
  EXPECT_EQ(g.order(), 6u);
  EXPECT_EQ(g.name(), "S3");
  EXPECT_FALSE(is_abelian(g));
}

TEST(LoadGroup, IdentityIsNormalizedToIndexZero) {
  // C2 with the identity stored second.
  auto g = load_group("group c2 order 2\nnames: t e\ntable:\n1 0\n0 1\n");
  EXPECT_EQ(g.element_name(0), "1");
  EXPECT_EQ(g.element_name(1), "t");
  EXPECT_EQ(g.mul(1, 1), 0u);
}

TEST(LoadGroup, Errors) {
  EXPECT_THROW(load_group(""), ParseError);
  EXPECT_THROW(load_group("group x order 2\ntable:\n0 1\n1\n"), ParseError);
  EXPECT_THROW(load_group("group x order 3\ngenerators:\n(1 2)\n"), AxiomError);
  EXPECT_THROW(load_group("group x order 2\ntable:\n0 1\n0 1\n"), AxiomError);
  EXPECT_THROW(load_group("group x order 2\nnames: 1 a b\ntable:\n0 1\n1 0\n"), ParseError);
  EXPECT_THROW(load_group("group x order 3\nnames: e a a\ntable:\n0 1 2\n1 2 0\n2 0 1\n"), AxiomError);
  EXPECT_THROW(load_group("group x order 2\ngenerators:\n(1 2\n"), ParseError);
}

TEST(LoadGroup, CommentsAndBlankLines) {
  auto g = load_group("# a comment\n\ngroup C3 order 3   # trailing\ngenerators:\n\n(1 2 3)\n");
  EXPECT_EQ(g.order(), 3u);
}

TEST(FromGenerators, Examples) {
  EXPECT_EQ(from_generators({}).order(), 1u);
  EXPECT_EQ(from_generators({parse_cycles("(1 2)")}).order(), 2u);
  auto affine = from_generators({parse_cycles("(1 2 3 4 5 6 7)"), parse_cycles("(2 4 3 7 5 6)")});
  EXPECT_EQ(affine.order(), 42u);
  EXPECT_TRUE(affine.find("(1,2,3,4,5,6,7)").has_value());
}

TEST(FromGenerators, ClosureCap) {
  EXPECT_THROW(from_generators({parse_cycles("(1 2 3 4 5)"), parse_cycles("(1 2)")}, "S5", 100), CapExceeded);
}

TEST(Constructions, CyclicAndProducts) {
  EXPECT_EQ(cyclic(1).order(), 1u);
  auto c6 = cyclic(6);
  auto c2c3 = direct_product(cyclic(2), cyclic(3));
  EXPECT_EQ(c2c3.order(), 6u);
  EXPECT_TRUE(isomorphic(c2c3, c6).has_value());
  EXPECT_THROW(cyclic(0), PreconditionError);
}

TEST(Constructions, SemidirectAffineOrder42) {
  auto c7 = cyclic(7);
  // multiplication by the primitive root 3 generates Aut(C7)
  Automorphism times3(7);
  for (Element k = 0; k < 7; ++k) times3[k] = (3 * k) % 7;
  auto g = semidirect_product(c7, cyclic(6), cyclic_action(c7, 6, times3));
  EXPECT_EQ(g.order(), 42u);
  auto affine = from_generators({parse_cycles("(1 2 3 4 5 6 7)"), parse_cycles("(2 4 3 7 5 6)")});
  EXPECT_TRUE(isomorphic(g, affine).has_value());
  EXPECT_TRUE(isomorphic(g, affine_group_over_prime_field(7)).has_value());
}

TEST(Constructions, InvalidActionRejected) {
  auto c7 = cyclic(7);
  Automorphism times3(7);
  for (Element k = 0; k < 7; ++k) times3[k] = (3 * k) % 7;
  // C2 cannot act through an element of order 6
  std::vector<Automorphism> bad{identity_map(c7).image, times3};
  EXPECT_THROW(semidirect_product(c7, cyclic(2), bad), PreconditionError);
  Automorphism not_bijective(7, 0);
  EXPECT_THROW(semidirect_product(c7, cyclic(2), {identity_map(c7).image, not_bijective}),
               PreconditionError);
}

TEST(Constructions, AffineGroup) {
  EXPECT_EQ(affine_group_over_prime_field(7).order(), 42u);
  EXPECT_EQ(affine_group_over_prime_field(2).order(), 2u);
  auto a3 = affine_group_over_prime_field(3);
  EXPECT_EQ(a3.order(), 6u);
  EXPECT_FALSE(is_abelian(a3));
  EXPECT_TRUE(isomorphic(a3, s3()).has_value());
  EXPECT_THROW(affine_group_over_prime_field(9), PreconditionError);
}

TEST(Constructions, DicyclicIsQuaternionForN2) {
  auto q8 = dicyclic(2);
  EXPECT_EQ(q8.order(), 8u);
  EXPECT_EQ(center(q8).order(), 2u);
  std::size_t involutions = 0;
  for (Element x = 0; x < 8; ++x) involutions += q8.element_order(x) == 2;
  EXPECT_EQ(involutions, 1u);
}

TEST(Subgroups, Counts) {
  for (std::size_t p : {2, 3, 5, 7, 11}) EXPECT_EQ(all_subgroups(cyclic(p)).size(), 2u);
  auto g = s3();
  EXPECT_EQ(all_subgroups(g).size(), 6u);
  EXPECT_EQ(normal_subgroups(g).size(), 3u);
  auto orders = orders_of(normal_subgroups(affine_group_over_prime_field(7)));
  EXPECT_EQ(std::set<std::size_t>(orders.begin(), orders.end()), (std::set<std::size_t>{1, 7, 14, 21, 42}));
  EXPECT_EQ(orders.size(), 5u);
}

TEST(Subgroups, ListsAreCompleteAndConsistent) {
  for (const auto& g : {s3(), dihedral(4), dicyclic(2), klein(), affine_group_over_prime_field(5)}) {
    auto all = all_subgroups(g);
    auto normal = normal_subgroups(g);
    EXPECT_EQ(all.front().order(), 1u);
    EXPECT_EQ(all.back().order(), g.order());
    for (std::size_t i = 0; i < all.size(); ++i) {
      EXPECT_TRUE(is_subgroup(g, all[i]));
      if (i) EXPECT_TRUE(canonical_less(all[i - 1], all[i]));
    }
    for (const auto& n : normal) EXPECT_NE(std::find(all.begin(), all.end(), n), all.end());
  }
  EXPECT_EQ(all_subgroups(dihedral(4)).size(), 10u);
  EXPECT_EQ(all_subgroups(dicyclic(2)).size(), 6u);
  EXPECT_EQ(normal_subgroups(dicyclic(2)).size(), 6u);
}

TEST(Subgroups, Cap) {
  EXPECT_THROW(all_subgroups(cyclic(20), 10), CapExceeded);
}

TEST(Structure, CommutatorAndDerivedSeries) {
  EXPECT_EQ(commutator_subgroup(cyclic(12)).order(), 1u);
  auto ds = derived_series(s3());
  ASSERT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds[0].order(), 6u);
  EXPECT_EQ(ds[1].order(), 3u);
  EXPECT_EQ(ds[2].order(), 1u);
  EXPECT_TRUE(is_metabelian(s3()));
  EXPECT_EQ(commutator_subgroup(affine_group_over_prime_field(7)).order(), 7u);
  EXPECT_EQ(center(s3()).order(), 1u);
  EXPECT_EQ(center(dihedral(4)).order(), 2u);
}

TEST(Structure, Sylow) {
  auto g = affine_group_over_prime_field(7);
  EXPECT_EQ(sylow_subgroup(g, 2).order(), 2u);
  EXPECT_EQ(sylow_subgroup(g, 3).order(), 3u);
  EXPECT_EQ(sylow_subgroup(g, 7).order(), 7u);
  EXPECT_EQ(sylow_subgroup(dihedral(12), 2).order(), 8u);
  EXPECT_THROW(sylow_subgroup(g, 5), PreconditionError);
  EXPECT_THROW(sylow_subgroup(g, 4), PreconditionError);
}

TEST(Structure, Quotients) {
  auto g = s3();
  EXPECT_TRUE(isomorphic(quotient(g, trivial_subgroup()).group, g).has_value());
  auto a3 = derived_series(g)[1];
  EXPECT_EQ(quotient(g, a3).group.order(), 2u);
  auto affine = affine_group_over_prime_field(7);
  auto c7 = commutator_subgroup(affine);
  auto q = quotient(affine, c7);
  EXPECT_TRUE(isomorphic(q.group, cyclic(6)).has_value());
  // a non-normal subgroup of order 2
  Subgroup two;
  for (const auto& s : all_subgroups(g))
    if (s.order() == 2) {
      two = s;
      break;
    }
  EXPECT_THROW(quotient(g, two), PreconditionError);
}

TEST(Structure, AbelianMetabelianNilpotent) {
  for (std::size_t n : {1, 4, 9, 12}) {
    auto c = cyclic(n);
    EXPECT_TRUE(is_abelian(c));
    EXPECT_TRUE(is_metabelian(c));
    EXPECT_TRUE(is_nilpotent(c));
  }
  EXPECT_FALSE(is_abelian(s3()));
  EXPECT_TRUE(is_metabelian(s3()));
  auto affine = affine_group_over_prime_field(7);
  EXPECT_TRUE(is_metabelian(affine));
  EXPECT_FALSE(is_nilpotent(affine));
  EXPECT_TRUE(is_nilpotent(dihedral(4)));
  auto s4 = symmetric_group(4);
  EXPECT_FALSE(is_metabelian(s4));
  EXPECT_EQ(derived_length(s4), 3u);
  EXPECT_FALSE(is_solvable(alternating_group(5)));
}

TEST(Isomorphism, Examples) {
  auto g = dihedral(4);
  auto self = isomorphic(g, g);
  ASSERT_TRUE(self.has_value());
  EXPECT_TRUE(is_homomorphism(g, g, *self));
  EXPECT_FALSE(isomorphic(cyclic(4), klein()).has_value());
  // C2 wr C2 = (C2 x C2) : C2 with the swap action
  auto base = klein();
  Automorphism swap(4);
  for (Element x = 0; x < 4; ++x) swap[x] = (x % 2) * 2 + x / 2;
  auto wr = semidirect_product(base, cyclic(2), cyclic_action(base, 2, swap));
  auto iso = isomorphic(wr, g);
  ASSERT_TRUE(iso.has_value());
  EXPECT_TRUE(is_homomorphism(wr, g, *iso));
  EXPECT_TRUE(is_injective(*iso, g.order()));
  EXPECT_FALSE(isomorphic(dihedral(4), dicyclic(2)).has_value());
  EXPECT_THROW(isomorphic(cyclic(200), cyclic(200)), CapExceeded);
}

// Invariants over a pool of groups.
class GroupPool : public ::testing::TestWithParam<int> {
 public:
  static FiniteGroup make(int i) {
    switch (i) {
      case 0: return s3();
      case 1: return dihedral(6);
      case 2: return dicyclic(3);
      case 3: return affine_group_over_prime_field(7);
      case 4: return alternating_group(4);
      case 5: return direct_product(cyclic(2), s3());
      case 6: return symmetric_group(4);
      default: return affine_group_over_prime_field(5);
    }
  }
};

TEST_P(GroupPool, Axioms) {
  auto g = make(GetParam());
  for (Element x = 0; x < g.order(); ++x) {
    EXPECT_EQ(g.mul(x, g.inv(x)), 0u);
    for (Element y = 0; y < g.order(); ++y)
      for (Element z = 0; z < g.order(); ++z)
        ASSERT_EQ(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
  }
}

TEST_P(GroupPool, CommutatorSubgroupInEveryAbelianQuotientKernel) {
  auto g = make(GetParam());
  auto d = commutator_subgroup(g);
  for (const auto& n : normal_subgroups(g)) {
    if (!is_abelian(quotient(g, n).group)) continue;
    for (Element x : d.elements) EXPECT_TRUE(n.contains(x));
  }
}

TEST_P(GroupPool, SylowOrderIsMaximalPrimePower) {
  auto g = make(GetParam());
  for (auto p : prime_divisors(static_cast<std::uint64_t>(g.order()))) {
    auto s = sylow_subgroup(g, p);
    EXPECT_TRUE(is_subgroup(g, s));
    std::size_t rest = g.order() / s.order();
    EXPECT_EQ(g.order() % s.order(), 0u);
    EXPECT_NE(rest % p, 0u);
    std::size_t q = s.order();
    while (q % p == 0) q /= p;
    EXPECT_EQ(q, 1u);
  }
}

TEST_P(GroupPool, QuotientProjection) {
  auto g = make(GetParam());
  for (const auto& n : normal_subgroups(g)) {
    auto q = quotient(g, n);
    EXPECT_EQ(g.order(), n.order() * q.group.order());
    EXPECT_TRUE(is_homomorphism(g, q.group, q.projection));
    EXPECT_EQ(image_of(q.projection).order(), q.group.order());
    EXPECT_EQ(kernel(q.projection), n);
  }
}

TEST_P(GroupPool, IsomorphismReflexiveAndSymmetric) {
  auto g = make(GetParam());
  // relabel g randomly and test both directions
  std::mt19937 rng(static_cast<unsigned>(GetParam()));
  std::vector<Element> perm(g.order());
  std::iota(perm.begin(), perm.end(), Element{0});
  std::shuffle(perm.begin() + 1, perm.end(), rng);
  std::vector<Element> back(g.order());
  for (Element x = 0; x < g.order(); ++x) back[perm[x]] = x;
  auto h = FiniteGroup::from_product(
      g.order(), [&](Element a, Element b) { return perm[g.mul(back[a], back[b])]; }, {});
  auto gh = isomorphic(g, h);
  auto hg = isomorphic(h, g);
  ASSERT_TRUE(gh && hg);
  EXPECT_TRUE(is_homomorphism(g, h, *gh));
  EXPECT_TRUE(is_homomorphism(h, g, *hg));
  for (int j = 0; j < 8; ++j) {
    auto other = make(j);
    EXPECT_EQ(isomorphic(g, other).has_value(), isomorphic(other, g).has_value());
  }
}

INSTANTIATE_TEST_SUITE_P(Pool, GroupPool, ::testing::Range(0, 8));
