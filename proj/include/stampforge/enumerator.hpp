#pragma once

#include "stampforge/basis.hpp"
#include "stampforge/bounds.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace stampforge {

/// Predicates that define which admissible j-prefixes are generated.
///
/// A generated prefix 0 = a_0 < ... < a_j satisfies a_i <= n2(A_{i-1}) + 1
/// for every i (admissibility), a_i <= max_element, a_i >= lower_bounds[i]
/// and n2(A_i) >= range_targets[i] wherever those are known,
/// a_j >= min_last and n2(A_j) >= min_range_at_j.
///
/// `potential_pruning` only affects how much of the tree is visited, never
/// the generated set.
struct PrefixConstraints {
  int j = 0;
  int max_element = 0;
  std::vector<Bound> lower_bounds;
  std::vector<Bound> range_targets;
  Bound min_last;
  Bound min_range_at_j;
  bool potential_pruning = true;

  /// Plain admissible j-prefixes. max_element is n2(j-1) + 1 from `table`
  /// when known, else the doubling bound.
  static PrefixConstraints admissible(int j, const N2Table& table = N2Table::builtin());
};

struct SearchStats {
  std::uint64_t nodes_visited = 0;
  std::uint64_t prefixes_generated = 0;
  std::uint64_t candidates_joined = 0;

  SearchStats& operator+=(const SearchStats& o) {
    nodes_visited += o.nodes_visited;
    prefixes_generated += o.prefixes_generated;
    candidates_joined += o.candidates_joined;
    return *this;
  }
  friend bool operator==(const SearchStats&, const SearchStats&) = default;
};

enum class EnumerationMode { count, collect };

struct EnumerationResult {
  SearchStats stats;
  std::vector<Basis> prefixes;  // lexicographic; empty in count mode
};

/// Called for every generated prefix with its range.
using PrefixSink = std::function<void(std::span<const int> prefix, int range)>;

/// Upper bound on the range reachable from range r after appending m
/// admissible elements: f^m(r) with f(r) = 2(r + 1). Saturates at
/// kPotentialSaturation.
inline constexpr std::int64_t kPotentialSaturation = std::int64_t{1} << 40;
[[nodiscard]] std::int64_t potential_range(std::int64_t r, int m);

/// Depth-first enumeration of the prefixes described by `constraints`.
[[nodiscard]] EnumerationResult enumerate(const PrefixConstraints& constraints,
                                          EnumerationMode mode = EnumerationMode::collect);

/// Streaming variant; returns the stats.
SearchStats enumerate(const PrefixConstraints& constraints, const PrefixSink& sink);

/// Subtrees rooted at depth `depth` that the full enumeration descends into,
/// in lexicographic order, plus the stats of the part of the tree above them.
struct WorkSplit {
  std::vector<Basis> stems;
  SearchStats stats;
};

/// Requires 0 <= depth <= constraints.j.
[[nodiscard]] WorkSplit split_work(const PrefixConstraints& constraints, int depth);

/// Enumerates the subtree below `stem` (a stem produced by split_work).
/// Nodes at or above the stem's depth are not counted.
SearchStats enumerate_stem(const PrefixConstraints& constraints, const Basis& stem, const PrefixSink& sink);
[[nodiscard]] EnumerationResult enumerate_stem(const PrefixConstraints& constraints, const Basis& stem,
                                               EnumerationMode mode);

/// split_work at `split_depth`, then the stems on `jobs` threads. Output and
/// stats are identical to enumerate() for every depth and job count.
[[nodiscard]] EnumerationResult enumerate_parallel(const PrefixConstraints& constraints, EnumerationMode mode,
                                                   int split_depth, int jobs);

/// True iff `prefix` (of index constraints.j) is in the generated set.
/// Evaluates the predicates directly, without search.
[[nodiscard]] bool satisfies(const PrefixConstraints& constraints, const Basis& prefix);

}  // namespace stampforge
