#pragma once

// Independent reference routines for tests. Nothing here calls the library's
// sumset or search code.

#include "stampforge/basis.hpp"

#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testing_support {

inline int set_range(const std::vector<int>& a) {
  std::set<int> sums;
  for (int x : a)
    for (int y : a) sums.insert(x + y);
  int n = 0;
  while (sums.count(n)) ++n;
  return n - 1;
}

inline int set_range(const stampforge::Basis& b) { return set_range({b.elements().begin(), b.elements().end()}); }

/// a_i <= n2(A_{i-1}) + 1 for every i.
inline bool is_admissible_prefix(const std::vector<int>& a) {
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i] <= a[i - 1]) return false;
    if (a[i] > set_range(std::vector<int>(a.begin(), a.begin() + static_cast<long>(i))) + 1) return false;
  }
  return !a.empty() && a[0] == 0;
}

/// Random strictly increasing list starting at 0 with at most `max_gap` between neighbours.
inline std::vector<int> random_basis(std::mt19937& rng, int k, int max_gap) {
  std::uniform_int_distribution<int> gap(1, max_gap);
  std::vector<int> a{0};
  for (int i = 0; i < k; ++i) a.push_back(a.back() + gap(rng));
  return a;
}

inline std::vector<int> elems(const stampforge::Basis& b) { return {b.elements().begin(), b.elements().end()}; }

inline std::string data_path(const std::string& name) { return std::string(STAMPFORGE_DATA_DIR) + "/" + name; }

/// A fresh path in the temp directory; any existing file is removed.
inline std::string temp_path(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("stampforge_test_" + name);
  std::filesystem::remove(p);
  return p.string();
}

}  // namespace testing_support
