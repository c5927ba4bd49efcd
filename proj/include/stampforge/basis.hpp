#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stampforge {

/// Raised when a list of integers does not describe a valid basis
/// (not strictly increasing, or not starting at 0).
class OrderingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when "+c" step notation cannot be expanded.
class NotationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for invalid (k, n) parameters, e.g. an odd restricted range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A basis {0 = a_0 < a_1 < ... < a_k}. Also used for j-prefixes.
///
/// Construction validates the invariants; every other operation in the
/// library assumes a valid Basis.
class Basis {
 public:
  Basis() : elements_{0} {}
  explicit Basis(std::vector<int> elements);

  /// k, the index of the largest element. A basis of length k has k+1 elements.
  [[nodiscard]] int length() const { return static_cast<int>(elements_.size()) - 1; }
  [[nodiscard]] std::size_t size() const { return elements_.size(); }
  [[nodiscard]] int max() const { return elements_.back(); }
  [[nodiscard]] int operator[](std::size_t i) const { return elements_[i]; }
  [[nodiscard]] std::span<const int> elements() const { return elements_; }

  /// The j-prefix {a_0, ..., a_j}.
  [[nodiscard]] Basis prefix(int j) const;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Basis&, const Basis&) = default;
  friend auto operator<=>(const Basis& a, const Basis& b) { return a.elements_ <=> b.elements_; }

 private:
  std::vector<int> elements_;
};

/// Membership bits over [0, cap]. For a sumset 2A, cap = 2 max(A).
class CoverageSet {
 public:
  explicit CoverageSet(int cap);

  [[nodiscard]] int cap() const { return cap_; }
  [[nodiscard]] bool contains(int s) const;
  void insert(int s);

  /// Largest n such that [0, n] is covered; -1 when 0 is absent.
  [[nodiscard]] int contiguous_range() const;
  [[nodiscard]] int count() const;
  [[nodiscard]] std::vector<int> members() const;

  /// OR in `mask` shifted left by `shift` bits, dropping anything above cap.
  void or_shifted(std::span<const std::uint64_t> mask, int shift);

  [[nodiscard]] std::span<const std::uint64_t> words() const { return words_; }

 private:
  void trim();

  int cap_;
  std::vector<std::uint64_t> words_;
};

struct BasisClass {
  int range = 0;
  bool admissible = false;
  bool restricted = false;

  friend bool operator==(const BasisClass&, const BasisClass&) = default;
};

[[nodiscard]] CoverageSet sumset(const Basis& a);
[[nodiscard]] int range_n2(const Basis& a);
[[nodiscard]] BasisClass classify(const Basis& a);
[[nodiscard]] Basis mirror(const Basis& a);
[[nodiscard]] bool is_symmetric(const Basis& a);

/// One token of Table-style notation: an explicit element or a "+c" step.
struct NotationToken {
  enum class Kind { value, step } kind;
  int number;

  static NotationToken value_of(int v) { return {Kind::value, v}; }
  static NotationToken step_of(int c) { return {Kind::step, c}; }
};

/// Expands "p +c q" runs into p, p+c, ..., q.
[[nodiscard]] Basis expand_ap_notation(std::span<const NotationToken> tokens);

/// Splits a line into notation tokens. Accepts whitespace, commas or '&'
/// as separators, ignores "..." / "$\cdots$" style ellipses and a trailing
/// "\\" row terminator.
[[nodiscard]] std::vector<NotationToken> tokenize_notation(std::string_view line);

/// tokenize_notation followed by expand_ap_notation.
[[nodiscard]] Basis parse_basis(std::string_view line);

/// Incrementally maintained sumset for depth-first search.
///
/// push(a) appends an element larger than every element present and
/// updates coverage and the contiguous-range watermark in O(cap / 64);
/// pop() restores the previous state from a per-depth snapshot.
class IncrementalSumset {
 public:
  /// Supports elements up to max_element and up to max_depth pushes past {0}.
  IncrementalSumset(int max_element, int max_depth);

  void push(int a);
  void pop();

  [[nodiscard]] int depth() const { return depth_; }
  [[nodiscard]] int range() const { return ranges_[depth_]; }
  [[nodiscard]] int last() const { return elements_[depth_]; }
  [[nodiscard]] std::span<const int> elements() const {
    return {elements_.data(), static_cast<std::size_t>(depth_ + 1)};
  }
  /// Number of integers in [0, t] not present in the current sumset.
  [[nodiscard]] int uncovered_upto(int t) const;

  /// Low 128 bits of the current sumset and element mask.
  [[nodiscard]] unsigned __int128 low_coverage() const { return low_bits(coverage(depth_), cover_words_); }
  [[nodiscard]] unsigned __int128 low_mask() const { return low_bits(mask(depth_), mask_words_); }

  /// Whether x is one of the current elements.
  [[nodiscard]] bool has_element(int x) const {
    return x >= 0 && x <= max_element_ && ((mask(depth_)[x >> 6] >> (x & 63)) & 1U);
  }

  /// Whether [0, t] would be covered after push(a), without pushing.
  [[nodiscard]] bool covers_after_push(int a, int t) const {
    if (t >= cover_bits_) return false;
    const int r = ranges_[static_cast<std::size_t>(depth_)];
    if (t <= r) return true;
    const int last_word = t >> 6;
    for (int w = (r + 1) >> 6; w <= last_word; ++w) {
      std::uint64_t v = word_after_push(w, a);
      if (w == last_word && ((t + 1) & 63) != 0) v |= ~std::uint64_t{0} << ((t + 1) & 63);
      if (~v != 0) return false;
    }
    return true;
  }

  /// Uncovered integers in [0, t]: how many, the smallest and the largest
  /// (both -1 when none).
  struct Gaps {
    int count = 0;
    int first = -1;
    int last = -1;
  };
  /// Gaps in [0, t] of the current sumset, or of the sumset after push(a)
  /// when a >= 0. Integers above 2 max_element count as gaps.
  [[nodiscard]] Gaps gaps_upto(int t, int a = -1) const {
    Gaps g;
    if (t < 0) return g;
    const int lim = t < cover_bits_ ? t : cover_bits_ - 1;
    const int last_word = lim >> 6;
    for (int w = (ranges_[static_cast<std::size_t>(depth_)] + 1) >> 6; w <= last_word; ++w) {
      std::uint64_t holes = ~(a >= 0 ? word_after_push(w, a) : coverage(depth_)[w]);
      if (w == last_word && ((lim + 1) & 63) != 0) holes &= (std::uint64_t{1} << ((lim + 1) & 63)) - 1;
      if (holes == 0) continue;
      g.count += std::popcount(holes);
      if (g.first < 0) g.first = w * 64 + std::countr_zero(holes);
      g.last = w * 64 + 63 - std::countl_zero(holes);
    }
    if (t > lim) {
      if (g.first < 0) g.first = lim + 1;
      g.count += t - lim;
      g.last = t;
    }
    return g;
  }

 private:
  [[nodiscard]] std::uint64_t* coverage(int d) { return storage_.data() + static_cast<std::size_t>(d) * stride_; }
  [[nodiscard]] const std::uint64_t* coverage(int d) const {
    return storage_.data() + static_cast<std::size_t>(d) * stride_;
  }
  [[nodiscard]] std::uint64_t* mask(int d) { return coverage(d) + cover_words_; }
  [[nodiscard]] const std::uint64_t* mask(int d) const { return coverage(d) + cover_words_; }

  static unsigned __int128 low_bits(const std::uint64_t* w, std::size_t n) {
    unsigned __int128 v = w[0];
    if (n > 1) v |= static_cast<unsigned __int128>(w[1]) << 64;
    return v;
  }

  // Bits [o, o + 64) of the current element mask; zero outside it.
  [[nodiscard]] std::uint64_t mask_bits_at(int o) const {
    const std::uint64_t* m = mask(depth_);
    if (o < 0) return o <= -64 ? 0 : mask_bits_at(0) << (-o);
    const auto q = static_cast<std::size_t>(o >> 6);
    const int r = o & 63;
    const std::uint64_t lo = q < mask_words_ ? m[q] : 0;
    if (r == 0) return lo;
    const std::uint64_t hi = q + 1 < mask_words_ ? m[q + 1] : 0;
    return (lo >> r) | (hi << (64 - r));
  }

  // Word w of the sumset after a hypothetical push(a).
  [[nodiscard]] std::uint64_t word_after_push(int w, int a) const {
    std::uint64_t v = coverage(depth_)[w] | mask_bits_at(w * 64 - a);
    const int twice = 2 * a;
    if ((twice >> 6) == w) v |= std::uint64_t{1} << (twice & 63);
    return v;
  }

  int max_element_;
  int max_depth_;
  int cover_bits_;
  std::size_t cover_words_;
  std::size_t mask_words_;
  std::size_t stride_;
  int depth_ = 0;
  std::vector<std::uint64_t> storage_;
  std::vector<int> ranges_;
  std::vector<int> elements_;
};

}  // namespace stampforge
