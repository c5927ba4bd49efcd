#pragma once

#include "stampforge/basis.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stampforge {

/// An integer bound that may be unknown. Consumers treat an empty bound as
/// "no constraint".
using Bound = std::optional<int>;

class IngestionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Known extremal unrestricted ranges n2(j) for j = 0..j_max (OEIS A001212
/// with n2(0) = 0 prepended).
class N2Table {
 public:
  N2Table() : values_{0} {}
  /// values[0] must be 0 and values must be strictly increasing.
  explicit N2Table(std::vector<int> values);

  /// The compiled-in table, j <= 24.
  static const N2Table& builtin();

  /// Parses b-file text: "j value" per line, '#' comments, j contiguous from 1.
  static N2Table parse(std::string_view text);
  static N2Table load(const std::string& path);

  [[nodiscard]] int j_max() const { return static_cast<int>(values_.size()) - 1; }
  [[nodiscard]] Bound at(int j) const;
  [[nodiscard]] const std::vector<int>& values() const { return values_; }

  /// The first `j_max + 1` entries only.
  [[nodiscard]] N2Table truncated(int j_max) const;

  [[nodiscard]] std::string to_bfile() const;

 private:
  std::vector<int> values_;
};

/// Element-wise upper bound a_j <= n2(j-1) + 1 for admissible bases. j >= 1.
[[nodiscard]] Bound elementwise_upper(int j, const N2Table& table);

/// Element-wise lower bound a_j >= n/2 - n2(k-j-1) - 1 for restricted bases
/// of length k and range n, clamped at 0. Throws ParameterError for odd n.
[[nodiscard]] Bound elementwise_lower(int j, int k, int n, const N2Table& table);

/// Range lower bound n2(A_j) >= n/2 - n2(k-j-2) - 2. Throws for odd n.
[[nodiscard]] Bound range_lower(int j, int k, int n, const N2Table& table);

/// Smallest j with a known range_lower for length k: max(0, k - j_max - 2).
[[nodiscard]] int earliest_range_bound_index(int k, const N2Table& table);

struct BoundProfile {
  int k = 0;
  int n = 0;
  std::vector<Bound> lower;        // index j = 0..k
  std::vector<Bound> upper;        // index j = 0..k; upper[0] = 0
  std::vector<Bound> range_lower;  // index j = 0..k; unknown for j > k-2

  /// CSV with header "j,lower,upper,range_lower"; unknown cells are empty.
  [[nodiscard]] std::string to_csv() const;
};

[[nodiscard]] BoundProfile bound_profile(int k, int n, const N2Table& table);

}  // namespace stampforge
