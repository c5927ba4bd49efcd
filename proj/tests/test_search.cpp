#include "stampforge/oracle.hpp"
#include "stampforge/search.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace stampforge;

namespace {

std::vector<Basis> oracle_restricted_with_range(int k, int n) {
  std::vector<Basis> out;
  for (const auto& b : oracle::restricted_bases(k)) {
    if (2 * b.max() == n) out.push_back(b);
  }
  return out;
}

bool contains(const std::vector<Basis>& v, const Basis& b) { return std::find(v.begin(), v.end(), b) != v.end(); }

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST(SearchConfig, DerivedIndices) {
  const SearchConfig a = SearchConfig::make(30, 316);
  EXPECT_EQ(a.j_start, 4);
  EXPECT_EQ(a.j_mid, 15);
  const SearchConfig b = SearchConfig::make(45, 674);
  EXPECT_EQ(b.j_start, 19);
  EXPECT_EQ(b.j_mid, 22);
  const SearchConfig c = SearchConfig::make(30, 316, N2Table::builtin().truncated(13));
  EXPECT_EQ(c.j_start, 15);
  EXPECT_THROW((void)SearchConfig::make(30, 315), ParameterError);
  EXPECT_THROW((void)SearchConfig::make(0, 4), ParameterError);
  EXPECT_THROW((void)SearchConfig::make(60, 1000), ParameterError);
}

TEST(SearchConfig, DefaultCap) {
  EXPECT_EQ(default_n_cap(1), 2);
  EXPECT_EQ(default_n_cap(3), 8);
  EXPECT_EQ(default_n_cap(10), 64);
  EXPECT_EQ(default_n_cap(4), 14);
}

TEST(GenerateCandidates, LengthThirtyMidpoint) {
  const SearchConfig cfg = SearchConfig::make(30, 316);
  const CandidateSet c = generate_candidates(cfg, 15);
  ASSERT_EQ(c.prefixes.size(), 16U);
  EXPECT_TRUE(std::is_sorted(c.prefixes.begin(), c.prefixes.end()));
  EXPECT_TRUE(contains(c.prefixes, Basis({0, 1, 2, 3, 5, 8, 9, 14, 16, 17, 27, 37, 47, 57, 67, 77})));
  EXPECT_EQ(c.stats.stage1_length, 4);
  EXPECT_EQ(c.stats.stage2.prefixes_generated, 16U);
  // Every restricted basis with these parameters starts with a candidate.
  const RestrictedSearchResult r = search_restricted(cfg);
  ASSERT_FALSE(r.bases.empty());
  for (const auto& b : r.bases) EXPECT_TRUE(contains(c.prefixes, b.prefix(15))) << b.to_string();
}

TEST(GenerateCandidates, UnsatisfiableRange) {
  const SearchConfig cfg = SearchConfig::make(3, 12);
  EXPECT_TRUE(generate_candidates(cfg, 1).prefixes.empty());
  EXPECT_TRUE(search_restricted(cfg).bases.empty());
  EXPECT_THROW((void)generate_candidates(cfg, 2), ParameterError);
}

TEST(GenerateCandidates, MatchesReferenceFilterOnSmallLengths) {
  for (int k = 4; k <= 10; ++k) {
    for (int n = 2 * k; n <= default_n_cap(k); n += 2) {
      const SearchConfig cfg = SearchConfig::make(k, n);
      for (int length = 0; length <= cfg.j_mid; ++length) {
        const PrefixConstraints pc = candidate_constraints(cfg, length);
        std::vector<Basis> expected;
        for (const auto& b : oracle::admissible_bases(length)) {
          if (satisfies(pc, b)) expected.push_back(b);
        }
        ASSERT_EQ(generate_candidates(cfg, length).prefixes, expected) << k << " " << n << " " << length;
      }
    }
  }
}

TEST(Join, ThreeEight) {
  const SearchConfig cfg = SearchConfig::make(3, 8);
  const RestrictedSearchResult r = join(cfg, {Basis({0, 1}), Basis({0, 2})}, {Basis({0, 1})});
  EXPECT_EQ(r.bases, std::vector<Basis>{Basis({0, 1, 3, 4})});
  EXPECT_TRUE(join(cfg, {}, {Basis({0, 1})}).bases.empty());
  EXPECT_THROW((void)join(cfg, {Basis({0, 1, 2})}, {Basis({0, 1})}), ParameterError);
}

TEST(SearchRestricted, SmallCases) {
  EXPECT_EQ(search_restricted(SearchConfig::make(2, 4)).bases, std::vector<Basis>{Basis({0, 1, 2})});
  EXPECT_EQ(search_restricted(SearchConfig::make(3, 8)).bases, std::vector<Basis>{Basis({0, 1, 3, 4})});
  EXPECT_TRUE(search_restricted(SearchConfig::make(10, 46)).bases.empty());
  const auto ten = search_restricted(SearchConfig::make(10, 44)).bases;
  EXPECT_TRUE(contains(ten, Basis({0, 1, 2, 3, 7, 11, 15, 17, 20, 21, 22})));
  EXPECT_TRUE(contains(ten, Basis({0, 1, 2, 5, 7, 11, 15, 19, 20, 21, 22})));
}

// Complete and exact for every (k, n) the oracle can cover.
TEST(SearchRestricted, EqualsOracleForAllRangesUpToNine) {
  for (int k = 1; k <= 9; ++k) {
    for (int n = 2; n <= default_n_cap(k); n += 2) {
      const auto r = search_restricted(SearchConfig::make(k, n));
      ASSERT_EQ(r.bases, oracle_restricted_with_range(k, n)) << "k=" << k << " n=" << n;
    }
  }
}

TEST(SearchRestricted, ResultsAreClosedUnderMirror) {
  for (int k = 6; k <= 12; ++k) {
    for (int n = 2 * k; n <= std::min(default_n_cap(k), 4 * k + 12); n += 2) {
      const auto r = search_restricted(SearchConfig::make(k, n));
      for (const auto& b : r.bases) {
        ASSERT_TRUE(contains(r.bases, mirror(b)));
        ASSERT_EQ(classify(b), (BasisClass{n, true, true}));
      }
    }
  }
}

TEST(SearchRestricted, LengthThirty) {
  const auto r = search_restricted(SearchConfig::make(30, 316));
  ASSERT_FALSE(r.bases.empty());
  for (const auto& b : r.bases) {
    EXPECT_EQ(classify(b), (BasisClass{316, true, true}));
    EXPECT_TRUE(contains(r.bases, mirror(b)));
  }
}

TEST(SearchRestricted, JobsAndSplitDepthDoNotChangeOutput) {
  SearchConfig cfg = SearchConfig::make(30, 316);
  cfg.split_depth = 0;
  const auto base = search_restricted(cfg);
  for (int depth : {2, 4, 9}) {
    for (int jobs : {1, 3}) {
      cfg.split_depth = depth;
      cfg.jobs = jobs;
      const auto r = search_restricted(cfg);
      ASSERT_EQ(r.bases, base.bases);
      ASSERT_EQ(r.prefix_side.stage2, base.prefix_side.stage2);
      ASSERT_EQ(r.join, base.join);
      SearchStats total = r.prefix_side.stage1;
      total += r.prefix_side.stage2;
      SearchStats base_total = base.prefix_side.stage1;
      base_total += base.prefix_side.stage2;
      ASSERT_EQ(total.nodes_visited, base_total.nodes_visited);
    }
  }
}

TEST(FindExtremal, EqualsOracleUpToNine) {
  for (int k = 1; k <= 9; ++k) {
    const ExtremalResult e = find_extremal(k);
    const oracle::Extremal o = oracle::n2_star(k);
    EXPECT_EQ(e.n_star, o.range) << k;
    EXPECT_EQ(e.result.bases, o.bases) << k;
  }
}

TEST(FindExtremal, KnownValues) {
  const ExtremalResult one = find_extremal(1);
  EXPECT_EQ(one.n_star, 2);
  EXPECT_EQ(one.result.bases, std::vector<Basis>{Basis({0, 1})});
  const ExtremalResult three = find_extremal(3);
  EXPECT_EQ(three.n_star, 8);
  EXPECT_EQ(three.result.bases, std::vector<Basis>{Basis({0, 1, 3, 4})});
  std::vector<int> steps;
  ExtremalOptions opts;
  opts.n_cap = 50;
  opts.on_step = [&](const RestrictedSearchResult& r) { steps.push_back(r.n); };
  const ExtremalResult ten = find_extremal(10, N2Table::builtin(), opts);
  EXPECT_EQ(ten.n_star, 44);
  EXPECT_EQ(steps, (std::vector<int>{50, 48, 46, 44}));
  EXPECT_EQ(ten.searches, 4);
  opts.n_cap = 51;
  EXPECT_THROW((void)find_extremal(10, N2Table::builtin(), opts), ParameterError);
}

TEST(SearchFilters, PublishedLargeBasesPass) {
  std::ifstream in(testing_support::data_path("table2.txt"));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const Basis b = parse_basis(line);
    const SearchConfig cfg = SearchConfig::make(b.length(), 2 * b.max());
    EXPECT_TRUE(passes_search_filters(cfg, b)) << b.length();
    ++rows;
  }
  EXPECT_EQ(rows, 7);
  const SearchConfig cfg = SearchConfig::make(10, 44);
  EXPECT_TRUE(passes_search_filters(cfg, Basis({0, 1, 2, 3, 7, 11, 15, 17, 20, 21, 22})));
  EXPECT_FALSE(passes_search_filters(cfg, Basis({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 22})));
}

TEST(Checkpoint, ResumeReproducesTheSameResult) {
  const std::string path = testing_support::temp_path("checkpoint.jsonl");
  SearchConfig cfg = SearchConfig::make(30, 316);
  cfg.split_depth = 4;
  const auto fresh = search_restricted(cfg);
  {
    Checkpoint cp(path);
    const auto first = search_restricted(cfg, &cp);
    EXPECT_EQ(first.bases, fresh.bases);
    EXPECT_GT(cp.size(), 1U);
  }
  // Drop the second half of the records and cut the last line short.
  auto lines = read_lines(path);
  const std::size_t keep = lines.size() / 2;
  {
    std::ofstream out(path, std::ios::trunc);
    for (std::size_t i = 0; i < keep; ++i) out << lines[i] << '\n';
    out << lines[keep].substr(0, lines[keep].size() / 2);
  }
  {
    Checkpoint cp(path);
    EXPECT_EQ(cp.size(), keep);
    const auto resumed = search_restricted(cfg, &cp);
    EXPECT_EQ(resumed.bases, fresh.bases);
    EXPECT_EQ(resumed.prefix_side.stage2, fresh.prefix_side.stage2);
  }
  std::filesystem::remove(path);
}

TEST(Checkpoint, CorruptMiddleLineIsAnError) {
  const std::string path = testing_support::temp_path("corrupt.jsonl");
  {
    std::ofstream out(path);
    out << "{not json\n{\"k\":1}\n";
  }
  EXPECT_THROW(Checkpoint cp(path), IngestionError);
  std::filesystem::remove(path);
}
