#include "stampforge/bounds.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace stampforge {

namespace {

void require_even(int n) {
  if (n % 2 != 0) throw ParameterError("restricted range n must be even (n = 2 a_k), got " + std::to_string(n));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view word, long long& out) {
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), out);
  return ec == std::errc{} && ptr == word.data() + word.size();
}

std::string cell(const Bound& b) { return b ? std::to_string(*b) : std::string(); }

}  // namespace

N2Table::N2Table(std::vector<int> values) : values_(std::move(values)) {
  if (values_.empty() || values_.front() != 0) throw IngestionError("n2 table must start with n2(0) = 0");
  for (std::size_t j = 1; j < values_.size(); ++j) {
    if (values_[j] <= values_[j - 1]) {
      throw IngestionError("n2 table values must be strictly increasing at j = " + std::to_string(j));
    }
  }
}

const N2Table& N2Table::builtin() {
  static const N2Table table({0,  2,  4,  8,   12,  16,  20,  26,  32,  40,  46,  54, 64,
                              72, 80, 92, 104, 116, 128, 140, 152, 164, 180, 196, 212});
  return table;
}

N2Table N2Table::parse(std::string_view text) {
  std::vector<int> values{0};
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const auto where = "line " + std::to_string(line_no) + " ('" + std::string(line) + "')";
    const auto space = line.find_first_of(" \t");
    if (space == std::string_view::npos) throw IngestionError(where + ": expected 'j value'");
    long long j = 0;
    long long value = 0;
    if (!parse_int(trim(line.substr(0, space)), j) || !parse_int(trim(line.substr(space)), value)) {
      throw IngestionError(where + ": expected two integers");
    }
    if (j != static_cast<long long>(values.size())) {
      throw IngestionError(where + ": expected index " + std::to_string(values.size()) + ", indices must be contiguous from 1");
    }
    if (value <= values.back()) throw IngestionError(where + ": values must be strictly increasing");
    values.push_back(static_cast<int>(value));
  }
  return N2Table(std::move(values));
}

N2Table N2Table::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open n2 table '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

Bound N2Table::at(int j) const {
  if (j < 0 || j > j_max()) return std::nullopt;
  return values_[static_cast<std::size_t>(j)];
}

N2Table N2Table::truncated(int j_max) const {
  const auto end = static_cast<std::size_t>(std::clamp(j_max + 1, 1, static_cast<int>(values_.size())));
  return N2Table(std::vector<int>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(end)));
}

std::string N2Table::to_bfile() const {
  std::string out;
  for (std::size_t j = 1; j < values_.size(); ++j) out += std::to_string(j) + " " + std::to_string(values_[j]) + "\n";
  return out;
}

Bound elementwise_upper(int j, const N2Table& table) {
  if (j < 1) throw ParameterError("elementwise_upper needs j >= 1");
  const Bound prev = table.at(j - 1);
  if (!prev) return std::nullopt;
  return *prev + 1;
}

Bound elementwise_lower(int j, int k, int n, const N2Table& table) {
  require_even(n);
  if (j < 0 || j > k - 1) throw ParameterError("elementwise_lower needs 0 <= j <= k-1");
  const Bound tail = table.at(k - j - 1);
  if (!tail) return std::nullopt;
  return std::max(0, n / 2 - *tail - 1);
}

Bound range_lower(int j, int k, int n, const N2Table& table) {
  require_even(n);
  if (j < 0 || j > k - 2) throw ParameterError("range_lower needs 0 <= j <= k-2");
  const Bound tail = table.at(k - j - 2);
  if (!tail) return std::nullopt;
  return n / 2 - *tail - 2;
}

int earliest_range_bound_index(int k, const N2Table& table) { return std::max(0, k - table.j_max() - 2); }

BoundProfile bound_profile(int k, int n, const N2Table& table) {
  require_even(n);
  if (k < 0) throw ParameterError("length k must be non-negative");
  BoundProfile p;
  p.k = k;
  p.n = n;
  const auto size = static_cast<std::size_t>(k + 1);
  p.lower.assign(size, std::nullopt);
  p.upper.assign(size, std::nullopt);
  p.range_lower.assign(size, std::nullopt);
  p.upper[0] = 0;
  for (int j = 0; j <= k; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    if (j >= 1) p.upper[idx] = elementwise_upper(j, table);
    if (j <= k - 1) p.lower[idx] = elementwise_lower(j, k, n, table);
    if (j <= k - 2) p.range_lower[idx] = range_lower(j, k, n, table);
  }
  p.lower[static_cast<std::size_t>(k)] = n / 2;
  return p;
}

std::string BoundProfile::to_csv() const {
  std::string out = "j,lower,upper,range_lower\n";
  for (std::size_t j = 0; j < lower.size(); ++j) {
    out += std::to_string(j) + "," + cell(lower[j]) + "," + cell(upper[j]) + "," + cell(range_lower[j]) + "\n";
  }
  return out;
}

}  // namespace stampforge
