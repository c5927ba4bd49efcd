#include "stampforge/basis.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace stampforge;
using testing_support::elems;
using testing_support::set_range;

TEST(Basis, RejectsInvalidElementLists) {
  EXPECT_THROW(Basis(std::vector<int>{}), OrderingError);
  EXPECT_THROW(Basis({1, 2, 3}), OrderingError);
  EXPECT_THROW(Basis({0, 2, 2}), OrderingError);
  EXPECT_THROW(Basis({0, 3, 1}), OrderingError);
  EXPECT_NO_THROW(Basis({0}));
}

TEST(Basis, LengthAndPrefix) {
  const Basis b({0, 1, 3, 4});
  EXPECT_EQ(b.length(), 3);
  EXPECT_EQ(b.max(), 4);
  EXPECT_EQ(b.prefix(2), Basis({0, 1, 3}));
  EXPECT_EQ(b.prefix(0), Basis({0}));
  EXPECT_THROW((void)b.prefix(4), std::out_of_range);
  EXPECT_EQ(b.to_string(), "0 1 3 4");
}

TEST(Classify, WorkedExamples) {
  const BasisClass r = classify(Basis({0, 1, 3, 4}));
  EXPECT_EQ(r.range, 8);
  EXPECT_TRUE(r.admissible);
  EXPECT_TRUE(r.restricted);

  const BasisClass a = classify(Basis({0, 1, 2, 4}));
  EXPECT_EQ(a.range, 6);
  EXPECT_TRUE(a.admissible);
  EXPECT_FALSE(a.restricted);

  const BasisClass c = classify(Basis({0, 1, 2, 5}));
  EXPECT_EQ(c.range, 7);
  EXPECT_TRUE(c.admissible);
  EXPECT_FALSE(c.restricted);

  const BasisClass gap = classify(Basis({0, 3}));
  EXPECT_EQ(gap.range, 0);
  EXPECT_FALSE(gap.admissible);
}

TEST(Classify, SingletonIsRestrictedWithRangeZero) {
  const BasisClass c = classify(Basis({0}));
  EXPECT_EQ(c.range, 0);
  EXPECT_TRUE(c.restricted);
}

TEST(Mirror, LengthTenExample) {
  const Basis a({0, 1, 2, 3, 7, 11, 15, 17, 20, 21, 22});
  const Basis m({0, 1, 2, 5, 7, 11, 15, 19, 20, 21, 22});
  EXPECT_EQ(mirror(a), m);
  EXPECT_EQ(mirror(m), a);
  EXPECT_EQ(classify(a), (BasisClass{44, true, true}));
  EXPECT_EQ(classify(m), (BasisClass{44, true, true}));
  EXPECT_FALSE(is_symmetric(a));
  EXPECT_TRUE(is_symmetric(Basis({0, 1, 3, 4})));
}

TEST(RangeProperty, MatchesSetBasedReference) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 3000; ++trial) {
    std::uniform_int_distribution<int> len(0, 14);
    std::uniform_int_distribution<int> gap(1, 9);
    const auto a = testing_support::random_basis(rng, len(rng), gap(rng));
    ASSERT_EQ(range_n2(Basis(a)), set_range(a)) << Basis(a).to_string();
  }
}

TEST(MirrorProperty, InvolutionAndRestrictedClosure) {
  std::mt19937 rng(11);
  int restricted_seen = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::uniform_int_distribution<int> len(1, 10);
    const Basis a(testing_support::random_basis(rng, len(rng), 4));
    ASSERT_EQ(mirror(mirror(a)), a);
    ASSERT_EQ(mirror(a).max(), a.max());
    const BasisClass c = classify(a);
    if (c.restricted) {
      ++restricted_seen;
      ASSERT_EQ(classify(mirror(a)), c) << a.to_string();
    }
  }
  EXPECT_GT(restricted_seen, 10);
}

TEST(CoverageSet, BasicOperations) {
  CoverageSet s(130);
  EXPECT_EQ(s.contiguous_range(), -1);
  for (int i = 0; i <= 70; ++i) s.insert(i);
  s.insert(72);
  s.insert(130);
  EXPECT_EQ(s.contiguous_range(), 70);
  EXPECT_EQ(s.count(), 73);
  EXPECT_TRUE(s.contains(130));
  EXPECT_FALSE(s.contains(131));
  EXPECT_FALSE(s.contains(-1));
  EXPECT_THROW(s.insert(131), std::out_of_range);
  EXPECT_EQ(s.members().back(), 130);
}

TEST(CoverageSet, ShiftedOrDropsBitsAboveCap) {
  CoverageSet mask(100);
  mask.insert(0);
  mask.insert(99);
  CoverageSet s(120);
  s.or_shifted(mask.words(), 21);
  EXPECT_EQ(s.members(), (std::vector<int>{21, 120}));
  s.or_shifted(mask.words(), 64);
  EXPECT_EQ(s.members(), (std::vector<int>{21, 64, 120}));
}

TEST(Sumset, MembersMatchPairSums) {
  const Basis b({0, 1, 5, 12});
  std::set<int> expected;
  for (int x : b.elements())
    for (int y : b.elements()) expected.insert(x + y);
  const auto members = sumset(b).members();
  EXPECT_EQ(std::set<int>(members.begin(), members.end()), expected);
}

TEST(IncrementalSumset, PushPopTracksRangeAndGaps) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = testing_support::random_basis(rng, 12, 15);
    IncrementalSumset inc(a.back(), 12);
    for (std::size_t i = 1; i < a.size(); ++i) {
      std::set<int> sums;
      for (int x : a)
        if (x <= a[i])
          for (int y : a)
            if (y <= a[i]) sums.insert(x + y);
      for (int t = 0; t <= 2 * a[i] + 3; t += 3) {
        bool covered = true;
        for (int s = 0; s <= t; ++s) covered = covered && sums.count(s) > 0;
        ASSERT_EQ(inc.covers_after_push(a[i], t), covered);
        int count = 0, first = -1, last = -1;
        for (int s = 0; s <= t; ++s) {
          if (sums.count(s)) continue;
          ++count;
          if (first < 0) first = s;
          last = s;
        }
        const auto g = inc.gaps_upto(t, a[i]);
        ASSERT_EQ(g.count, count);
        ASSERT_EQ(g.first, first);
        ASSERT_EQ(g.last, last);
      }
      inc.push(a[i]);
      ASSERT_EQ(inc.range(), set_range(std::vector<int>(a.begin(), a.begin() + static_cast<long>(i) + 1)));
      ASSERT_EQ(inc.last(), a[i]);
      ASSERT_TRUE(inc.has_element(a[i]));
    }
    const int full = inc.range();
    inc.pop();
    inc.push(a.back());
    EXPECT_EQ(inc.range(), full);
    while (inc.depth() > 0) inc.pop();
    EXPECT_EQ(inc.range(), 0);
  }
}

TEST(Notation, ExpandsArithmeticRuns) {
  EXPECT_EQ(elems(parse_basis("0 1 +2 7")), (std::vector<int>{0, 1, 3, 5, 7}));
  EXPECT_EQ(elems(parse_basis("0, 1, 2")), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(elems(parse_basis("0 1 ... +3 ... 10")), (std::vector<int>{0, 1, 4, 7, 10}));
  EXPECT_EQ(elems(parse_basis("0& 1& 4& $\\cdots$ & +3 & $\\cdots$& 13\\\\")), (std::vector<int>{0, 1, 4, 7, 10, 13}));
}

TEST(Notation, Errors) {
  EXPECT_THROW((void)parse_basis("+2 5"), NotationError);
  EXPECT_THROW((void)parse_basis("0 5 +2 8"), NotationError);
  EXPECT_THROW((void)parse_basis("0 1 +2"), NotationError);
  EXPECT_THROW((void)parse_basis("0 +0 3"), NotationError);
  EXPECT_THROW((void)parse_basis("0 +2 +2 4"), NotationError);
  EXPECT_THROW((void)parse_basis("0 x 3"), NotationError);
  EXPECT_THROW((void)parse_basis("0 4 2"), OrderingError);
  EXPECT_THROW((void)parse_basis("1 2"), OrderingError);
}

TEST(Notation, TableRowsAreRestrictedAndSymmetric) {
  std::ifstream in(testing_support::data_path("table2.txt"));
  ASSERT_TRUE(in);
  std::string line;
  std::vector<std::pair<int, int>> seen;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const Basis b = parse_basis(line);
    const BasisClass c = classify(b);
    EXPECT_TRUE(c.restricted) << line;
    EXPECT_TRUE(is_symmetric(b)) << line;
    EXPECT_EQ(c.range, set_range(b));
    seen.emplace_back(b.length(), c.range);
  }
  const std::vector<std::pair<int, int>> expected{{42, 588}, {43, 614}, {43, 614}, {44, 644},
                                                  {45, 674}, {46, 704}, {47, 734}};
  EXPECT_EQ(seen, expected);
}
