#include "stampforge/enumerator.hpp"

#include "stampforge/parallel.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace stampforge {

namespace {

constexpr int kNoTarget = std::numeric_limits<int>::min();

int bound_or(const std::vector<Bound>& v, int i, int fallback) {
  if (i < 0 || static_cast<std::size_t>(i) >= v.size() || !v[static_cast<std::size_t>(i)]) return fallback;
  return *v[static_cast<std::size_t>(i)];
}

using Gaps = IncrementalSumset::Gaps;
using u128 = unsigned __int128;

// Coverage of [0, 127] for the children of one node, held in registers.
struct LowProbe {
  u128 cov;
  u128 mask;

  static constexpr int kBits = 128;

  [[nodiscard]] u128 after(int a) const {
    if (a >= kBits) return cov;
    u128 v = cov | (mask << a);
    if (2 * a < kBits) v |= u128{1} << (2 * a);
    return v;
  }
  [[nodiscard]] static u128 upto(int t) { return t >= kBits - 1 ? ~u128{0} : (u128{1} << (t + 1)) - 1; }
  [[nodiscard]] bool covers(int a, int t) const { return (~after(a) & upto(t)) == 0; }
  [[nodiscard]] Gaps gaps(int a, int t) const {
    const u128 holes = ~after(a) & upto(t);
    Gaps g;
    if (holes == 0) return g;
    const auto lo = static_cast<std::uint64_t>(holes);
    const auto hi = static_cast<std::uint64_t>(holes >> 64);
    g.count = std::popcount(lo) + std::popcount(hi);
    g.first = lo != 0 ? std::countr_zero(lo) : 64 + std::countr_zero(hi);
    g.last = hi != 0 ? 127 - std::countl_zero(hi) : 63 - std::countl_zero(lo);
    return g;
  }
};

// The constraints compiled into per-depth arrays, plus the DFS state.
class Walker {
 public:
  explicit Walker(const PrefixConstraints& c)
      : j_(c.j),
        cap_(c.max_element),
        potential_(c.potential_pruning),
        elem_lower_(static_cast<std::size_t>(c.j + 1), 0),
        range_need_(static_cast<std::size_t>(c.j + 1), kNoTarget),
        first_target_(static_cast<std::size_t>(c.j + 2), 0),
        sums_(std::max(c.max_element, 0), std::max(c.j, 0)) {
    if (c.j < 0) throw ParameterError("prefix index j must be non-negative");
    if (c.max_element < 0) throw ParameterError("max_element must be non-negative");
    for (int i = 0; i <= j_; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      elem_lower_[idx] = std::max(0, bound_or(c.lower_bounds, i, 0));
      range_need_[idx] = bound_or(c.range_targets, i, kNoTarget);
    }
    const auto last = static_cast<std::size_t>(j_);
    if (c.min_last) elem_lower_[last] = std::max(elem_lower_[last], *c.min_last);
    if (c.min_range_at_j) range_need_[last] = std::max(range_need_[last], *c.min_range_at_j);

    // Range needed at depth t: its own target, a_{t+1} <= n2(A_t) + 1, and
    // n2(A_{t+1}) <= 2 a_{t+1} <= 2 (n2(A_t) + 1).
    std::vector<int> need(static_cast<std::size_t>(j_ + 1), 0);
    for (int t = j_; t >= 0; --t) {
      const auto idx = static_cast<std::size_t>(t);
      need[idx] = std::max(need[idx], range_need_[idx]);
      if (t < j_) {
        need[idx] = std::max(need[idx], elem_lower_[idx + 1] - 1);
        need[idx] = std::max(need[idx], (need[idx + 1] + 1) / 2 - 1);
      }
    }
    for (int t = 0; t <= j_; ++t) {
      if (need[static_cast<std::size_t>(t)] > 0) targets_.push_back({t, need[static_cast<std::size_t>(t)]});
    }
    // Without potential pruning only the exact per-depth predicates apply.
    min_range_ = potential_ ? need : range_need_;
    for (int i = 0, p = 0; i <= j_ + 1; ++i) {
      while (p < static_cast<int>(targets_.size()) && targets_[static_cast<std::size_t>(p)].depth < i) ++p;
      first_target_[static_cast<std::size_t>(i)] = p;
    }
  }

  // Whether {0} itself passes the depth-0 predicates.
  [[nodiscard]] bool root_ok() const {
    return elem_lower_[0] <= 0 && range_need_[0] <= 0 && (!potential_ || viable());
  }

  void seed(const Basis& stem) {
    while (sums_.depth() > 0) sums_.pop();
    for (std::size_t i = 1; i < stem.size(); ++i) sums_.push(stem[i]);
  }

  template <class Emit>
  void expand(int stop, Emit& emit, bool counting) {
    const int i = sums_.depth();
    if (i == stop) {
      emit(sums_.elements(), sums_.range());
      return;
    }
    const int child = i + 1;
    const auto cidx = static_cast<std::size_t>(child);
    int lo = sums_.last() + 1;
    const int hi = std::min(sums_.range() + 1, cap_ - (j_ - child));
    if (lo > hi) return;
    if (elem_lower_[cidx] > lo) {
      const int skipped = std::min(hi, elem_lower_[cidx] - 1) - lo + 1;
      stats.nodes_visited += static_cast<std::uint64_t>(skipped);
      lo = elem_lower_[cidx];
    }
    if (lo > hi) return;
    if (child == j_ && stop == j_) {
      // Leaves: the only remaining predicate is the range target at j.
      const int need = range_need_[cidx];
      if (counting && need <= 0) {
        const auto n = static_cast<std::uint64_t>(hi - lo + 1);
        stats.nodes_visited += n;
        stats.prefixes_generated += n;
        return;
      }
      stats.nodes_visited += static_cast<std::uint64_t>(hi - lo + 1);
      auto accept = [&](int a) {
        if (counting) {
          ++stats.prefixes_generated;
        } else {
          sums_.push(a);
          emit(sums_.elements(), sums_.range());
          sums_.pop();
        }
      };
      const int gap = sums_.range() + 1;
      if (need < gap) {
        for (int a = lo; a <= hi; ++a) accept(a);
        return;
      }
      // The first uncovered integer must become a + x for some x in the
      // prefix or x = a; no other leaf can reach the target.
      // Candidates gap - x come out ascending when x runs downwards; gap / 2
      // cannot coincide with one of them because x < a.
      const auto elems = sums_.elements();
      const int half = gap % 2 == 0 ? gap / 2 : -1;
      bool half_done = half < lo || half > hi;
      const bool fast = need < LowProbe::kBits;
      const LowProbe probe{fast ? sums_.low_coverage() : 0, fast ? sums_.low_mask() : 0};
      auto covers = [&](int a) { return fast ? probe.covers(a, need) : sums_.covers_after_push(a, need); };
      for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
        const int a = gap - *it;
        if (a > hi) break;
        if (!half_done && half < a) {
          half_done = true;
          if (covers(half)) accept(half);
        }
        if (a >= lo && covers(a)) accept(a);
      }
      if (!half_done && covers(half)) accept(half);
      return;
    }
    const int child_need = min_range_[cidx];
    const int next_need = potential_ && child < j_ ? min_range_[cidx + 1] : 0;
    const int gap = sums_.range() + 1;
    const bool fast = std::max(child_need, next_need) < LowProbe::kBits;
    const LowProbe probe{fast ? sums_.low_coverage() : 0, fast ? sums_.low_mask() : 0};
    for (int a = lo; a <= hi; ++a) {
      ++stats.nodes_visited;
      if (child_need >= gap) {
        // The first gap must be closed by a + x or by 2a.
        if (gap != 2 * a && !sums_.has_element(gap - a)) continue;
        if (!(fast ? probe.covers(a, child_need) : sums_.covers_after_push(a, child_need))) continue;
      }
      if (next_need > 0) {
        const Gaps g = fast ? probe.gaps(a, next_need) : sums_.gaps_upto(next_need, a);
        if (!one_step_ok(g, next_need, a, a)) continue;
      }
      sums_.push(a);
      if (!potential_ || viable(2)) expand(stop, emit, counting);
      sums_.pop();
    }
  }

  SearchStats stats;

 private:
  struct Target {
    int depth;
    int range;
  };

  // Sound necessary conditions for reaching every target at least
  // `min_steps` elements below the current node.
  [[nodiscard]] bool viable(int min_steps = 0) const {
    const int i = sums_.depth();
    const int r = sums_.range();
    for (auto p = static_cast<std::size_t>(first_target_[static_cast<std::size_t>(i)]); p < targets_.size(); ++p) {
      const Target& t = targets_[p];
      const int m = t.depth - i;
      if (m < min_steps) continue;
      if (potential_range(r, m) < t.range) return false;
      if (m == 1 && !one_step_reachable(t.range)) return false;
      if (m > 1 && sums_.uncovered_upto(t.range) > coverable(t.range, m)) return false;
    }
    return true;
  }

  // Whether a single further element b can complete coverage of
  // [0, limit], given the gaps of the prefix whose largest element is
  // `last`, optionally with `extra` (the hypothetical last element)
  // appended. b lies above `last` and at most at the first gap, and every
  // gap g must equal b + y with y <= b, so the largest gap is at most
  // twice the first.
  [[nodiscard]] bool one_step_ok(const Gaps& gaps, int limit, int last, int extra) const {
    if (gaps.count == 0) return true;
    if (gaps.last > 2 * gaps.first) return false;
    const int b_min = std::max(last + 1, (gaps.last + 1) / 2);
    const int reach = limit - b_min;
    const auto elems = sums_.elements();
    std::int64_t usable = std::upper_bound(elems.begin(), elems.end(), reach) - elems.begin();
    if (extra >= 0 && extra <= reach) ++usable;
    return gaps.count <= usable + (2 * b_min <= limit ? 1 : 0);
  }

  [[nodiscard]] bool one_step_reachable(int limit) const {
    return one_step_ok(sums_.gaps_upto(limit), limit, sums_.last(), -1);
  }

  // Upper bound on how many integers in [0, limit] can become newly covered
  // by appending m elements b_1 < ... < b_m, using b_s >= a_last + s.
  [[nodiscard]] std::int64_t coverable(int limit, int m) const {
    const auto elems = sums_.elements();
    const int a_last = sums_.last();
    std::int64_t total = 0;
    for (int s = 1; s <= m; ++s) {
      const int reach = limit - a_last - s;
      if (reach < 0) break;
      total += std::upper_bound(elems.begin(), elems.end(), reach) - elems.begin();
      for (int r = s; r <= m && 2 * a_last + s + r <= limit; ++r) ++total;
    }
    return total;
  }

  int j_;
  int cap_;
  bool potential_;
  std::vector<int> elem_lower_;
  std::vector<int> range_need_;
  std::vector<Target> targets_;
  std::vector<int> first_target_;
  std::vector<int> min_range_;
  IncrementalSumset sums_;
};

SearchStats run(const PrefixConstraints& c, const Basis* stem, const PrefixSink* sink) {
  Walker walker(c);
  if (stem == nullptr) {
    if (!walker.root_ok()) return {};
  } else {
    if (stem->length() > c.j) throw ParameterError("stem is deeper than the target index");
    walker.seed(*stem);
  }
  auto emit = [&](std::span<const int> prefix, int range) {
    ++walker.stats.prefixes_generated;
    if (sink && *sink) (*sink)(prefix, range);
  };
  walker.expand(c.j, emit, sink == nullptr || !*sink);
  return walker.stats;
}

}  // namespace

PrefixConstraints PrefixConstraints::admissible(int j, const N2Table& table) {
  PrefixConstraints c;
  c.j = j;
  if (j >= 1) {
    const Bound upper = elementwise_upper(j, table);
    c.max_element = upper ? *upper : static_cast<int>(std::min<std::int64_t>(potential_range(0, j - 1) + 1,
                                                                              std::numeric_limits<int>::max() / 4));
  }
  return c;
}

std::int64_t potential_range(std::int64_t r, int m) {
  for (int step = 0; step < m && r < kPotentialSaturation; ++step) r = 2 * (r + 1);
  return std::min(r, kPotentialSaturation);
}

SearchStats enumerate(const PrefixConstraints& constraints, const PrefixSink& sink) {
  return run(constraints, nullptr, &sink);
}

EnumerationResult enumerate(const PrefixConstraints& constraints, EnumerationMode mode) {
  EnumerationResult result;
  if (mode == EnumerationMode::count) {
    result.stats = run(constraints, nullptr, nullptr);
    return result;
  }
  const PrefixSink sink = [&](std::span<const int> p, int) { result.prefixes.emplace_back(std::vector<int>(p.begin(), p.end())); };
  result.stats = run(constraints, nullptr, &sink);
  return result;
}

WorkSplit split_work(const PrefixConstraints& constraints, int depth) {
  if (depth < 0 || depth > constraints.j) throw ParameterError("split depth must lie in [0, j]");
  WorkSplit split;
  Walker walker(constraints);
  if (!walker.root_ok()) return split;
  auto emit = [&](std::span<const int> prefix, int) { split.stems.emplace_back(std::vector<int>(prefix.begin(), prefix.end())); };
  walker.expand(depth, emit, false);
  split.stats = walker.stats;
  return split;
}

SearchStats enumerate_stem(const PrefixConstraints& constraints, const Basis& stem, const PrefixSink& sink) {
  return run(constraints, &stem, &sink);
}

EnumerationResult enumerate_stem(const PrefixConstraints& constraints, const Basis& stem, EnumerationMode mode) {
  EnumerationResult result;
  if (mode == EnumerationMode::count) {
    result.stats = run(constraints, &stem, nullptr);
    return result;
  }
  const PrefixSink sink = [&](std::span<const int> p, int) { result.prefixes.emplace_back(std::vector<int>(p.begin(), p.end())); };
  result.stats = run(constraints, &stem, &sink);
  return result;
}

EnumerationResult enumerate_parallel(const PrefixConstraints& constraints, EnumerationMode mode, int split_depth,
                                     int jobs) {
  const WorkSplit split = split_work(constraints, std::clamp(split_depth, 0, constraints.j));
  std::vector<EnumerationResult> parts(split.stems.size());
  parallel_for(split.stems.size(), jobs,
               [&](std::size_t i) { parts[i] = enumerate_stem(constraints, split.stems[i], mode); });
  EnumerationResult merged;
  merged.stats = split.stats;
  for (auto& part : parts) {
    merged.stats += part.stats;
    merged.prefixes.insert(merged.prefixes.end(), std::make_move_iterator(part.prefixes.begin()),
                           std::make_move_iterator(part.prefixes.end()));
  }
  return merged;
}

bool satisfies(const PrefixConstraints& c, const Basis& prefix) {
  if (prefix.length() != c.j) return false;
  for (int i = 0; i <= c.j; ++i) {
    const int a = prefix[static_cast<std::size_t>(i)];
    const int r = range_n2(prefix.prefix(i));
    if (i >= 1 && a > range_n2(prefix.prefix(i - 1)) + 1) return false;
    if (a > c.max_element) return false;
    if (a < bound_or(c.lower_bounds, i, 0)) return false;
    if (r < bound_or(c.range_targets, i, kNoTarget)) return false;
  }
  if (c.min_last && prefix.max() < *c.min_last) return false;
  if (c.min_range_at_j && range_n2(prefix) < *c.min_range_at_j) return false;
  return true;
}

}  // namespace stampforge
