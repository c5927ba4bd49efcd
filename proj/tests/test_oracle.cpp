#include "stampforge/oracle.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace stampforge;

TEST(Oracle, TinyEnumerations) {
  EXPECT_EQ(oracle::admissible_bases(0), std::vector<Basis>{Basis({0})});
  EXPECT_EQ(oracle::admissible_bases(1), std::vector<Basis>{Basis({0, 1})});
  EXPECT_EQ(oracle::admissible_bases(2), (std::vector<Basis>{Basis({0, 1, 2}), Basis({0, 1, 3})}));
  const auto three = oracle::admissible_bases(3);
  EXPECT_NE(std::find(three.begin(), three.end(), Basis({0, 1, 3, 4})), three.end());
  EXPECT_NE(std::find(three.begin(), three.end(), Basis({0, 1, 2, 5})), three.end());
}

TEST(Oracle, EnumerationIsSortedUniqueAndAdmissible) {
  for (int k = 1; k <= 7; ++k) {
    const auto all = oracle::admissible_bases(k);
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
    EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
    for (const auto& b : all) {
      ASSERT_EQ(b.length(), k);
      ASSERT_GE(testing_support::set_range(b), b.max());
    }
  }
}

// Every prefix of an admissible basis is an admissible prefix.
TEST(Oracle, AdmissibilityIsHereditary) {
  for (int k = 1; k <= 8; ++k) {
    oracle::enumerate_admissible(k, [](const Basis& b) {
      for (int j = 1; j <= b.length(); ++j) {
        ASSERT_LE(b[static_cast<std::size_t>(j)], testing_support::set_range(b.prefix(j - 1)) + 1) << b.to_string();
        ASSERT_GE(testing_support::set_range(b.prefix(j)), b[static_cast<std::size_t>(j)]);
      }
    });
  }
}

TEST(Oracle, ExtremalRanges) {
  EXPECT_EQ(oracle::n2(1), 2);
  EXPECT_EQ(oracle::n2(3), 8);
  const oracle::Extremal one = oracle::n2_star(1);
  EXPECT_EQ(one.range, 2);
  EXPECT_EQ(one.bases, std::vector<Basis>{Basis({0, 1})});
  const oracle::Extremal three = oracle::n2_star(3);
  EXPECT_EQ(three.range, 8);
  EXPECT_EQ(three.bases, std::vector<Basis>{Basis({0, 1, 3, 4})});
}

TEST(Oracle, LengthTen) {
  const oracle::Report rep = oracle::report(10);
  EXPECT_EQ(rep.n2, 46);
  EXPECT_EQ(rep.n2_star, 44);
  const Basis example({0, 1, 2, 3, 7, 11, 15, 17, 20, 21, 22});
  const auto& r = rep.extremal_restricted_bases;
  EXPECT_NE(std::find(r.begin(), r.end(), example), r.end());
  EXPECT_NE(std::find(r.begin(), r.end(), mirror(example)), r.end());
  for (const auto& b : rep.extremal_bases) EXPECT_EQ(testing_support::set_range(b), 46);
}

TEST(Oracle, ReportIsConsistent) {
  for (int k = 1; k <= 8; ++k) {
    const oracle::Report rep = oracle::report(k);
    EXPECT_LE(rep.n2_star, rep.n2);
    EXPECT_EQ(rep.n2, oracle::n2(k));
    const auto star = oracle::n2_star(k);
    EXPECT_EQ(rep.n2_star, star.range);
    EXPECT_EQ(rep.extremal_restricted_bases, star.bases);
    for (const auto& b : rep.extremal_restricted_bases) {
      EXPECT_EQ(testing_support::set_range(b), rep.n2_star);
      EXPECT_EQ(2 * b.max(), rep.n2_star);
    }
    const int diff = rep.n2 - rep.n2_star;
    EXPECT_TRUE(diff == 0 || diff == 2) << k;
  }
}

TEST(Oracle, RestrictedBasesAreExactlyTheRestrictedSubset) {
  for (int k = 1; k <= 7; ++k) {
    std::vector<Basis> expected;
    for (const auto& b : oracle::admissible_bases(k)) {
      if (testing_support::set_range(b) == 2 * b.max()) expected.push_back(b);
    }
    EXPECT_EQ(oracle::restricted_bases(k), expected);
  }
}

TEST(Oracle, PrefixCounts) {
  EXPECT_EQ(oracle::count_prefixes(0), 1U);
  EXPECT_EQ(oracle::count_prefixes(1), 1U);
  EXPECT_EQ(oracle::count_prefixes(3), 5U);
  for (int j = 0; j <= 7; ++j) EXPECT_EQ(oracle::count_prefixes(j), oracle::admissible_bases(j).size());
}

TEST(Oracle, FeasibilityLimit) {
  EXPECT_THROW((void)oracle::n2(13), oracle::Refused);
  EXPECT_THROW((void)oracle::count_prefixes(15), oracle::Refused);
  oracle::Limits tight;
  tight.max_length = 3;
  EXPECT_THROW((void)oracle::count_prefixes(4, tight), oracle::Refused);
  tight.allow_slow = true;
  EXPECT_EQ(oracle::count_prefixes(4, tight), 17U);
  EXPECT_THROW((void)oracle::n2(-1), std::invalid_argument);
}
