#pragma once

// Brute-force ground truth for small lengths.
//
// Everything here is written independently of the enumerator and the
// search: plain recursion on a_j <= n2(A_{j-1}) + 1, ranges recomputed from
// scratch with a double loop, no bound tables. It is slow on purpose.

#include "stampforge/basis.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stampforge::oracle {

/// Raised when a request exceeds the feasibility limit without an override.
class Refused : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Limits {
  int max_length = 12;
  bool allow_slow = false;
};

/// Streams every admissible basis of length k once, in lexicographic order.
void enumerate_admissible(int k, const std::function<void(const Basis&)>& sink, Limits limits = {});
[[nodiscard]] std::vector<Basis> admissible_bases(int k, Limits limits = {});

/// n2(k): the largest range over all bases of length k.
[[nodiscard]] int n2(int k, Limits limits = {});

struct Extremal {
  int range = 0;
  std::vector<Basis> bases;  // lexicographic
};

/// n2*(k) and every restricted basis of length k attaining it.
[[nodiscard]] Extremal n2_star(int k, Limits limits = {});

/// Every restricted basis of length k (any range), lexicographic.
[[nodiscard]] std::vector<Basis> restricted_bases(int k, Limits limits = {});

/// Number of admissible j-prefixes.
[[nodiscard]] std::uint64_t count_prefixes(int j, Limits limits = {});

struct Report {
  int k = 0;
  int n2 = 0;
  int n2_star = 0;
  std::vector<Basis> extremal_bases;
  std::vector<Basis> extremal_restricted_bases;
};

[[nodiscard]] Report report(int k, Limits limits = {});

/// Range computed by the naive double loop over pairs.
[[nodiscard]] int naive_range(std::span<const int> elements);

}  // namespace stampforge::oracle
