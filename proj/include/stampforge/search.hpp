#pragma once

#include "stampforge/basis.hpp"
#include "stampforge/bounds.hpp"
#include "stampforge/enumerator.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace stampforge {

/// Parameters of one restricted search for length k and range n.
struct SearchConfig {
  int k = 0;
  int n = 0;
  int j_start = 0;  // earliest index with a known range lower bound
  int j_mid = 0;    // floor(k / 2)
  N2Table table = N2Table::builtin();
  int split_depth = 8;
  bool potential_pruning = true;
  int jobs = 1;

  /// Fills j_start and j_mid from k and the table, then validates.
  static SearchConfig make(int k, int n, const N2Table& table = N2Table::builtin());
  /// Throws ParameterError on odd n, k < 1 or j_start > j_mid.
  void validate() const;
};

/// Work done while generating one side's candidates. Stage 1 enumerates to
/// min(j_start, length) with the range bound at j_start; stage 2 extends
/// those prefixes to `length` under every known bound.
struct CandidateStats {
  int length = 0;
  int stage1_length = 0;
  SearchStats stage1;
  SearchStats stage2;
};

struct CandidateSet {
  std::vector<Basis> prefixes;  // lexicographic
  CandidateStats stats;
};

/// Persists finished work units so that an interrupted run can resume.
///
/// The file holds one JSON object per line, keyed by (k, n, length, stem).
/// Records are appended and flushed as units finish; loading ignores a
/// truncated final line.
class Checkpoint {
 public:
  struct Record {
    int k = 0;
    int n = 0;
    int length = 0;
    Basis stem;
    SearchStats stage1;
    SearchStats stage2;
    std::vector<Basis> candidates;
  };

  explicit Checkpoint(std::string path);

  [[nodiscard]] std::optional<Record> find(int k, int n, int length, const Basis& stem) const;
  void save(const Record& record);
  [[nodiscard]] std::size_t size() const;

 private:
  using Key = std::tuple<int, int, int, std::vector<int>>;
  std::string path_;
  mutable std::mutex mutex_;
  std::map<Key, Record> records_;
};

/// Bounds a prefix of index `length` must satisfy to start a restricted basis
/// with parameters (cfg.k, cfg.n).
[[nodiscard]] PrefixConstraints candidate_constraints(const SearchConfig& cfg, int length);
/// The stage 1 subset of those bounds, up to index min(j_start, length).
[[nodiscard]] PrefixConstraints stage1_constraints(const SearchConfig& cfg, int length);

/// Every prefix of index `length` (<= j_mid) that passes candidate_constraints.
[[nodiscard]] CandidateSet generate_candidates(const SearchConfig& cfg, int length, Checkpoint* checkpoint = nullptr);

struct RestrictedSearchResult {
  int k = 0;
  int n = 0;
  std::vector<Basis> bases;  // restricted, range n, sorted, unique
  CandidateStats prefix_side;
  CandidateStats suffix_side;
  SearchStats join;  // candidates_joined counts pairs tested
};

/// Joins midpoint prefixes P with suffix seeds Q (prefixes of the mirror):
/// A = P ∪ {n/2 - q : q ∈ Q}, kept when max P < min S and 2A = [0, n].
[[nodiscard]] RestrictedSearchResult join(const SearchConfig& cfg, const std::vector<Basis>& prefixes,
                                          const std::vector<Basis>& suffix_seeds);

/// All restricted bases of length cfg.k with range cfg.n. Throws
/// std::logic_error if the result fails its restricted or mirror-closure
/// self-check.
[[nodiscard]] RestrictedSearchResult search_restricted(const SearchConfig& cfg, Checkpoint* checkpoint = nullptr);

/// Whether `basis` survives every filter of search_restricted, evaluated
/// directly on its two halves.
[[nodiscard]] bool passes_search_filters(const SearchConfig& cfg, const Basis& basis);

/// Largest even integer <= (k+1)(k+2)/2 - 1.
[[nodiscard]] int default_n_cap(int k);

struct ExtremalOptions {
  std::optional<int> n_cap;
  int split_depth = 8;
  bool potential_pruning = true;
  int jobs = 1;
  Checkpoint* checkpoint = nullptr;
  /// Called after each finished n, in descending order.
  std::function<void(const RestrictedSearchResult&)> on_step;
};

struct ExtremalResult {
  int n_star = 0;
  RestrictedSearchResult result;
  int searches = 0;
};

/// Searches n = cap, cap - 2, ... and stops at the first n with a restricted
/// basis; that n is n2*(k).
[[nodiscard]] ExtremalResult find_extremal(int k, const N2Table& table = N2Table::builtin(),
                                           const ExtremalOptions& options = {});

}  // namespace stampforge
