#include <groupeq/catalog.hpp>
#include <groupeq/constructions.hpp>
#include <groupeq/enumerate.hpp>
#include <groupeq/isomorphism.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace groupeq;

namespace {

const std::string kCatalog = std::string(GROUPEQ_SOURCE_DIR) + "/catalog";

// Oracle: automorphisms by checking every bijection fixing 1 (small groups only).
std::size_t count_automorphisms_by_permutations(const FiniteGroup& g) {
  std::vector<Element> perm(g.order());
  for (Element i = 0; i < g.order(); ++i) perm[i] = i;
  std::size_t count = 0;
  do {
    bool ok = true;
    for (Element x = 0; x < g.order() && ok; ++x)
      for (Element y = 0; y < g.order() && ok; ++y) ok = perm[g.mul(x, y)] == g.mul(perm[x], perm[y]);
    count += ok;
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return count;
}

}  // namespace

TEST(Automorphisms, MatchPermutationOracle) {
  for (const auto& g : {cyclic(6), cyclic(8), symmetric_group(3), dihedral(4), dicyclic(2),
                        direct_product(cyclic(2), cyclic(4))}) {
    SCOPED_TRACE(g.name());
    auto auts = all_automorphisms(g);
    EXPECT_EQ(auts.size(), count_automorphisms_by_permutations(g));
    for (const auto& a : auts) EXPECT_TRUE(is_automorphism(g, a));
  }
  EXPECT_EQ(all_automorphisms(direct_product(cyclic(2), direct_product(cyclic(2), cyclic(2)))).size(), 168u);
  EXPECT_EQ(all_automorphisms(alternating_group(4)).size(), 24u);
}

TEST(Enumerate, CountsUpToTwelve) {
  for (std::size_t n = 1; n <= 12; ++n) {
    SCOPED_TRACE(n);
    auto groups = enumerate_groups(n);
    EXPECT_EQ(groups.size(), *known_group_count(n));
    for (std::size_t i = 0; i < groups.size(); ++i) {
      EXPECT_EQ(groups[i].order(), n);
      for (std::size_t j = i + 1; j < groups.size(); ++j) EXPECT_FALSE(isomorphic(groups[i], groups[j]));
    }
  }
}

TEST(Enumerate, ContainsKnownGroups) {
  auto twelve = enumerate_groups(12);
  for (const auto& g : {alternating_group(4), dicyclic(3), dihedral(6), cyclic(12)}) {
    bool found = false;
    for (const auto& h : twelve) found |= isomorphic(g, h).has_value();
    EXPECT_TRUE(found) << g.name();
  }
}

TEST(Enumerate, CapsAndDeterminism) {
  EXPECT_THROW(enumerate_groups(13), CapExceeded);
  EXPECT_THROW(enumerate_groups(60, 100), PreconditionError);
  EXPECT_THROW(enumerate_groups(0), PreconditionError);
  auto a = enumerate_groups(16, 16, 1), b = enumerate_groups(16, 16, 4);
  ASSERT_EQ(a.size(), 14u);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name(), b[i].name());
    EXPECT_TRUE(std::equal(a[i].row(0).begin(), a[i].row(0).end(), b[i].row(0).begin()));
    for (Element x = 0; x < a[i].order(); ++x)
      for (Element y = 0; y < a[i].order(); ++y) ASSERT_EQ(a[i].mul(x, y), b[i].mul(x, y));
  }
}

TEST(PermutationRepresentation, FaithfulAndSmall) {
  for (const auto& g : {symmetric_group(4), affine_group_over_prime_field(7), dicyclic(2), cyclic(6),
                        direct_product(symmetric_group(3), cyclic(2))}) {
    SCOPED_TRACE(g.name());
    auto gens = permutation_representation(g);
    auto back = from_generators(gens);
    EXPECT_TRUE(isomorphic(back, g));
  }
  EXPECT_EQ(permutation_representation(symmetric_group(4))[0].degree(), 4u);
  EXPECT_EQ(permutation_representation(affine_group_over_prime_field(7))[0].degree(), 7u);
  EXPECT_EQ(permutation_representation(dicyclic(2))[0].degree(), 8u);  // no core-free subgroup
}

TEST(Catalog, BundledFilesValidate) {
  auto check = validate_catalog(kCatalog, 4);
  for (const auto& e : check.errors) ADD_FAILURE() << e;
  for (std::size_t n : {12, 18, 20, 24, 28, 30, 36, 40, 42, 2, 3, 4, 5, 7, 8, 9, 11, 13, 16})
    EXPECT_EQ(check.counts[n], *cited_group_count(n)) << n;
  EXPECT_EQ(check.entries.size(), 101u);
}

TEST(Catalog, AgreesWithEnumeratorUpToTwelve) {
  auto check = validate_catalog(kCatalog);
  for (std::size_t n : {2, 3, 4, 5, 7, 8, 9, 11, 12}) {
    auto groups = enumerate_groups(n);
    std::vector<FiniteGroup> files;
    for (const auto& e : check.entries)
      if (e.order == n) files.push_back(load_group_file(kCatalog + "/" + e.file));
    ASSERT_EQ(files.size(), groups.size()) << n;
    for (const auto& f : files) {
      std::size_t matches = 0;
      for (const auto& g : groups) matches += isomorphic(f, g).has_value();
      EXPECT_EQ(matches, 1u) << f.name();
    }
  }
}

TEST(Catalog, AffineSevenIsPresent) {
  auto g = load_group_file(kCatalog + "/42_05_AGL1_7.grp");
  EXPECT_TRUE(isomorphic(g, affine_group_over_prime_field(7)));
}

TEST(Catalog, DetectsDuplicatesAndBadFiles) {
  auto dir = std::filesystem::temp_directory_path() / "groupeq_catalog_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "a.grp") << write_group_table(symmetric_group(3));
  std::ofstream(dir / "b.grp") << write_group_generators("S3", 6, permutation_representation(dihedral(3)));
  std::ofstream(dir / "c.grp") << "group X order 2\ngenerators:\n(1,2,3)\n";
  auto check = validate_catalog(dir.string());
  EXPECT_EQ(check.entries.size(), 2u);
  ASSERT_EQ(check.errors.size(), 2u);  // the load failure and the isomorphic pair
  EXPECT_NE(check.errors[0].find("c.grp"), std::string::npos);
  EXPECT_NE(check.errors[1].find("isomorphic"), std::string::npos);
  std::filesystem::remove_all(dir);
}
