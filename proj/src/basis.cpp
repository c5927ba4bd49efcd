#include "stampforge/basis.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <sstream>

namespace stampforge {

namespace {

constexpr int kWordBits = 64;

std::size_t words_for_bits(int bits) { return static_cast<std::size_t>((bits + kWordBits - 1) / kWordBits); }

// dst |= src << shift, truncated to dst's word count.
void or_shifted_words(std::uint64_t* dst, std::size_t dst_words, const std::uint64_t* src, std::size_t src_words,
                      int shift) {
  const std::size_t word_shift = static_cast<std::size_t>(shift / kWordBits);
  const int bit_shift = shift % kWordBits;
  if (word_shift >= dst_words) return;
  const std::size_t n = std::min(src_words, dst_words - word_shift);
  if (bit_shift == 0) {
    for (std::size_t w = 0; w < n; ++w) dst[w + word_shift] |= src[w];
    return;
  }
  for (std::size_t w = 0; w < n; ++w) {
    dst[w + word_shift] |= src[w] << bit_shift;
    if (w + word_shift + 1 < dst_words) dst[w + word_shift + 1] |= src[w] >> (kWordBits - bit_shift);
  }
}

// Index of the first zero bit at or after `from`, or `bits` if none below it.
int first_zero_from(const std::uint64_t* words, int bits, int from) {
  if (from >= bits) return bits;
  std::size_t w = static_cast<std::size_t>(from / kWordBits);
  std::uint64_t inverted = ~words[w] & (~std::uint64_t{0} << (from % kWordBits));
  const std::size_t nwords = words_for_bits(bits);
  while (inverted == 0) {
    if (++w == nwords) return bits;
    inverted = ~words[w];
  }
  return std::min(bits, static_cast<int>(w) * kWordBits + std::countr_zero(inverted));
}

int popcount_upto(const std::uint64_t* words, int bits, int t) {
  const int last = std::min(t, bits - 1);
  if (last < 0) return 0;
  int total = 0;
  const std::size_t full = static_cast<std::size_t>((last + 1) / kWordBits);
  for (std::size_t w = 0; w < full; ++w) total += std::popcount(words[w]);
  const int rem = (last + 1) % kWordBits;
  if (rem != 0) total += std::popcount(words[full] & ((std::uint64_t{1} << rem) - 1));
  return total;
}

}  // namespace

Basis::Basis(std::vector<int> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw OrderingError("basis must contain at least the element 0");
  if (elements_.front() != 0) throw OrderingError("basis must start at 0, got " + std::to_string(elements_.front()));
  for (std::size_t i = 1; i < elements_.size(); ++i) {
    if (elements_[i] <= elements_[i - 1]) {
      throw OrderingError("basis elements must be strictly increasing: " + std::to_string(elements_[i - 1]) +
                          " then " + std::to_string(elements_[i]));
    }
  }
}

Basis Basis::prefix(int j) const {
  if (j < 0 || j > length()) throw std::out_of_range("prefix index " + std::to_string(j) + " outside basis");
  return Basis(std::vector<int>(elements_.begin(), elements_.begin() + j + 1));
}

std::string Basis::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (i) out << ' ';
    out << elements_[i];
  }
  return out.str();
}

CoverageSet::CoverageSet(int cap) : cap_(cap), words_(words_for_bits(cap + 1), 0) {
  if (cap < 0) throw std::invalid_argument("coverage cap must be non-negative");
}

bool CoverageSet::contains(int s) const {
  if (s < 0 || s > cap_) return false;
  return (words_[static_cast<std::size_t>(s / kWordBits)] >> (s % kWordBits)) & 1U;
}

void CoverageSet::insert(int s) {
  if (s < 0 || s > cap_) throw std::out_of_range("value " + std::to_string(s) + " outside coverage cap");
  words_[static_cast<std::size_t>(s / kWordBits)] |= std::uint64_t{1} << (s % kWordBits);
}

int CoverageSet::contiguous_range() const { return first_zero_from(words_.data(), cap_ + 1, 0) - 1; }

int CoverageSet::count() const { return popcount_upto(words_.data(), cap_ + 1, cap_); }

std::vector<int> CoverageSet::members() const {
  std::vector<int> out;
  for (int s = 0; s <= cap_; ++s)
    if (contains(s)) out.push_back(s);
  return out;
}

void CoverageSet::or_shifted(std::span<const std::uint64_t> mask, int shift) {
  or_shifted_words(words_.data(), words_.size(), mask.data(), mask.size(), shift);
  trim();
}

void CoverageSet::trim() {
  const int rem = (cap_ + 1) % kWordBits;
  if (rem != 0) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

CoverageSet sumset(const Basis& a) {
  CoverageSet elements(a.max());
  for (int x : a.elements()) elements.insert(x);
  CoverageSet sums(2 * a.max());
  for (int x : a.elements()) sums.or_shifted(elements.words(), x);
  return sums;
}

int range_n2(const Basis& a) { return sumset(a).contiguous_range(); }

BasisClass classify(const Basis& a) {
  BasisClass c;
  c.range = range_n2(a);
  c.admissible = c.range >= a.max();
  c.restricted = c.range == 2 * a.max();
  return c;
}

Basis mirror(const Basis& a) {
  std::vector<int> out;
  out.reserve(a.size());
  const auto e = a.elements();
  for (auto it = e.rbegin(); it != e.rend(); ++it) out.push_back(a.max() - *it);
  return Basis(std::move(out));
}

bool is_symmetric(const Basis& a) { return mirror(a) == a; }

Basis expand_ap_notation(std::span<const NotationToken> tokens) {
  using Kind = NotationToken::Kind;
  std::vector<int> out;
  int pending_step = 0;
  for (const auto& token : tokens) {
    if (token.kind == Kind::step) {
      if (out.empty()) throw NotationError("step token +" + std::to_string(token.number) + " has no left endpoint");
      if (pending_step != 0) throw NotationError("two consecutive step tokens");
      if (token.number <= 0) throw NotationError("step must be positive, got " + std::to_string(token.number));
      pending_step = token.number;
      continue;
    }
    const int q = token.number;
    if (!out.empty() && q <= out.back()) {
      throw OrderingError("elements must be strictly increasing: " + std::to_string(out.back()) + " then " +
                          std::to_string(q));
    }
    if (pending_step != 0) {
      const int p = out.back();
      if ((q - p) % pending_step != 0) {
        throw NotationError("gap " + std::to_string(p) + ".." + std::to_string(q) + " is not a multiple of step +" +
                            std::to_string(pending_step));
      }
      for (int x = p + pending_step; x < q; x += pending_step) out.push_back(x);
      pending_step = 0;
    }
    out.push_back(q);
  }
  if (pending_step != 0) throw NotationError("step token has no right endpoint");
  return Basis(std::move(out));
}

std::vector<NotationToken> tokenize_notation(std::string_view line) {
  std::vector<NotationToken> tokens;
  std::size_t i = 0;
  auto is_sep = [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '&'; };
  while (i < line.size()) {
    if (is_sep(line[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    std::string_view word = line.substr(i, j - i);
    i = j;
    if (word == "..." || word == "…" || word.find("cdots") != std::string_view::npos ||
        word.find("ldots") != std::string_view::npos) {
      continue;
    }
    // Table notation sometimes wraps tokens in math delimiters.
    while (!word.empty() && word.front() == '$') word.remove_prefix(1);
    while (!word.empty() && word.back() == '$') word.remove_suffix(1);
    while (!word.empty() && word.back() == '\\') word.remove_suffix(1);
    if (word.empty()) continue;
    const bool step = !word.empty() && word.front() == '+';
    if (step) word.remove_prefix(1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (word.empty() || ec != std::errc{} || ptr != word.data() + word.size()) {
      throw NotationError("unrecognized token '" + std::string(word) + "'");
    }
    tokens.push_back(step ? NotationToken::step_of(value) : NotationToken::value_of(value));
  }
  return tokens;
}

Basis parse_basis(std::string_view line) {
  const auto tokens = tokenize_notation(line);
  return expand_ap_notation(tokens);
}

IncrementalSumset::IncrementalSumset(int max_element, int max_depth)
    : max_element_(max_element),
      max_depth_(max_depth),
      cover_bits_(2 * max_element + 1),
      cover_words_(words_for_bits(2 * max_element + 1)),
      mask_words_(words_for_bits(max_element + 1)),
      stride_(cover_words_ + mask_words_),
      storage_(stride_ * static_cast<std::size_t>(max_depth + 1), 0),
      ranges_(static_cast<std::size_t>(max_depth + 1), 0),
      elements_(static_cast<std::size_t>(max_depth + 1), 0) {
  if (max_element < 0 || max_depth < 0) throw std::invalid_argument("IncrementalSumset: negative capacity");
  coverage(0)[0] = 1;
  mask(0)[0] = 1;
}

void IncrementalSumset::push(int a) {
  const int d = depth_ + 1;
  std::copy_n(coverage(depth_), stride_, coverage(d));
  std::uint64_t* m = mask(d);
  m[static_cast<std::size_t>(a / kWordBits)] |= std::uint64_t{1} << (a % kWordBits);
  or_shifted_words(coverage(d), cover_words_, m, mask_words_, a);
  ranges_[static_cast<std::size_t>(d)] =
      first_zero_from(coverage(d), cover_bits_, ranges_[static_cast<std::size_t>(depth_)] + 1) - 1;
  elements_[static_cast<std::size_t>(d)] = a;
  depth_ = d;
}

void IncrementalSumset::pop() { --depth_; }

int IncrementalSumset::uncovered_upto(int t) const {
  if (t < 0) return 0;
  const int covered = popcount_upto(coverage(depth_), cover_bits_, t);
  return t + 1 - covered;
}

}  // namespace stampforge
