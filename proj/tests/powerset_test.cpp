#include <gtest/gtest.h>

#include <functional>
#include <vector>

#include "setsp/powerset.hpp"
#include "setsp/random.hpp"

using namespace setsp;

namespace {

// Decodes a mask into 1-based element indices.
std::vector<int> elements(mask_t a) {
  std::vector<int> out;
  for (int i = 0; a; ++i, a >>= 1)
    if (a & 1)
      out.push_back(i + 1);
  return out;
}

// Recursive order: subsets without x_n (ordered recursively), then the same
// list with x_n added.
std::vector<std::vector<int>> recursive_order(int n) {
  if (n == 0)
    return {{}};
  auto first = recursive_order(n - 1);
  auto out = first;
  for (auto s : first) {
    s.push_back(n);
    out.push_back(s);
  }
  return out;
}

} // namespace

TEST(Powerset, MaskOrderMatchesLexicographicOrderForThreeElements) {
  const std::vector<std::vector<int>> expected = {
      {}, {1}, {2}, {1, 2}, {3}, {1, 3}, {2, 3}, {1, 2, 3}};
  for (mask_t a = 0; a < 8; ++a)
    EXPECT_EQ(elements(a), expected[a]) << "mask " << a;
}

TEST(Powerset, MaskOrderMatchesRecursiveOrder) {
  for (int n = 0; n <= 10; ++n) {
    const auto order = recursive_order(n);
    ASSERT_EQ(order.size(), GroundSet(n).powerset_size());
    for (mask_t a = 0; a < order.size(); ++a)
      ASSERT_EQ(elements(a), order[a]) << "n=" << n << " mask " << a;
  }
}

TEST(Powerset, SubsetOps) {
  const GroundSet g(3);
  EXPECT_EQ(set_union(g, 0b001, 0b010), 0b011u);
  EXPECT_EQ(set_intersection(g, 0b011, 0b110), 0b010u);
  EXPECT_EQ(set_difference(g, 0b111, 0b010), 0b101u);
  EXPECT_EQ(complement(g, 0b001), 0b110u);
  EXPECT_EQ(cardinality(0b101), 2);
  for (mask_t a = 0; a < 8; ++a)
    EXPECT_EQ(symmetric_difference(g, a, a), 0u);
}

TEST(Powerset, SubsetOpsRejectForeignMasks) {
  const GroundSet g(3);
  EXPECT_THROW((void)set_union(g, 0b1000, 1), std::invalid_argument);
  EXPECT_THROW((void)complement(g, 0b1000), std::invalid_argument);
  EXPECT_THROW((void)symmetric_difference(g, 1, 16), std::invalid_argument);
}

TEST(Powerset, PopcountIdentity) {
  Rng rng(7);
  const GroundSet g(40);
  for (int t = 0; t < 1000; ++t) {
    const mask_t a = random_subset(rng, g), b = random_subset(rng, g);
    EXPECT_EQ(cardinality(a | b) + cardinality(a & b),
              cardinality(a) + cardinality(b));
  }
}

TEST(Powerset, GroundSetBounds) {
  EXPECT_THROW(GroundSet(-1), std::invalid_argument);
  EXPECT_THROW(GroundSet(63), std::invalid_argument);
  EXPECT_NO_THROW(GroundSet(62));
  EXPECT_THROW(SetFunction(GroundSet(31)), std::invalid_argument);
  EXPECT_THROW(SetFunction(GroundSet(2), std::vector<double>(3)),
               std::invalid_argument);
}

TEST(Powerset, SubsetsOfCardinalityAtMost) {
  const auto s = subsets_of_cardinality_at_most(GroundSet(3), 1);
  EXPECT_EQ(s, (std::vector<mask_t>{0, 1, 2, 4}));
  EXPECT_EQ(subsets_of_cardinality_at_most(GroundSet(46), 2).size(), 1082u);
  EXPECT_EQ(subsets_of_cardinality_at_most(GroundSet(3), 3),
            (std::vector<mask_t>{0, 1, 2, 4, 3, 5, 6, 7}));
  EXPECT_THROW((void)subsets_of_cardinality_at_most(GroundSet(3), 4),
               std::invalid_argument);
}

TEST(Powerset, SubsetsOfCardinalityAtMostCountsAndOrder) {
  for (int n = 0; n <= 12; ++n)
    for (int m = 0; m <= n; ++m) {
      const auto s = subsets_of_cardinality_at_most(GroundSet(n), m);
      std::uint64_t expected = 0;
      for (int i = 0; i <= m; ++i)
        expected += binomial(n, i);
      ASSERT_EQ(s.size(), expected);
      for (std::size_t i = 1; i < s.size(); ++i)
        ASSERT_TRUE(CardinalityOrder{}(s[i - 1], s[i]));
      for (const mask_t b : s)
        ASSERT_LE(cardinality(b), m);
    }
}

TEST(Powerset, ForEachSubsetVisitsAllSubsets) {
  std::vector<mask_t> seen;
  for_each_subset(0b1011, [&](mask_t s) { seen.push_back(s); });
  EXPECT_EQ(seen, (std::vector<mask_t>{0, 1, 2, 3, 8, 9, 10, 11}));
}

TEST(Powerset, DenseSparseConversionIsLosslessOnSupport) {
  Rng rng(3);
  const GroundSet g(8);
  for (int t = 0; t < 20; ++t) {
    SparseSetFunction sp(g);
    for (int k = 0; k < 30; ++k)
      sp.set(random_subset(rng, g), uniform(rng, 0.5, 2.0) * random_sign(rng));
    EXPECT_EQ(SparseSetFunction::from_dense(sp.densify()), sp);
  }
}

TEST(Powerset, ModelIds) {
  EXPECT_EQ(model_from_int(5), Model::SymmetricDifference);
  EXPECT_EQ(to_int(Model::Advance), 4);
  EXPECT_THROW((void)model_from_int(0), std::invalid_argument);
  EXPECT_THROW((void)model_from_int(6), std::invalid_argument);
}
