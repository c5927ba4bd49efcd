#include "stampforge/oracle.hpp"

#include <algorithm>

namespace stampforge::oracle {

namespace {

void check_limits(int k, Limits limits) {
  if (k < 0) throw std::invalid_argument("oracle length must be non-negative");
  if (k > limits.max_length && !limits.allow_slow) {
    throw Refused("oracle length " + std::to_string(k) + " exceeds the feasibility limit " +
                  std::to_string(limits.max_length) + "; pass the slow override to run it anyway");
  }
}

void extend(std::vector<int>& a, int k, const std::function<void(const std::vector<int>&)>& sink) {
  const int r = naive_range(a);
  if (static_cast<int>(a.size()) == k + 1) {
    if (r >= a.back()) sink(a);
    return;
  }
  for (int next = a.back() + 1; next <= r + 1; ++next) {
    a.push_back(next);
    extend(a, k, sink);
    a.pop_back();
  }
}

std::uint64_t count_from(std::vector<int>& a, int j) {
  const int r = naive_range(a);
  const int depth = static_cast<int>(a.size()) - 1;
  if (depth == j) return 1;
  if (depth + 1 == j) return static_cast<std::uint64_t>(r + 1 - a.back());
  std::uint64_t total = 0;
  for (int next = a.back() + 1; next <= r + 1; ++next) {
    a.push_back(next);
    total += count_from(a, j);
    a.pop_back();
  }
  return total;
}

}  // namespace

int naive_range(std::span<const int> elements) {
  const int top = elements.empty() ? 0 : elements.back();
  std::vector<char> hit(static_cast<std::size_t>(2 * top + 2), 0);
  for (int x : elements)
    for (int y : elements) hit[static_cast<std::size_t>(x + y)] = 1;
  int n = 0;
  while (hit[static_cast<std::size_t>(n)]) ++n;
  return n - 1;
}

void enumerate_admissible(int k, const std::function<void(const Basis&)>& sink, Limits limits) {
  check_limits(k, limits);
  std::vector<int> a{0};
  extend(a, k, [&](const std::vector<int>& b) { sink(Basis(b)); });
}

std::vector<Basis> admissible_bases(int k, Limits limits) {
  std::vector<Basis> out;
  enumerate_admissible(k, [&](const Basis& b) { out.push_back(b); }, limits);
  return out;
}

int n2(int k, Limits limits) {
  check_limits(k, limits);
  int best = 0;
  std::vector<int> a{0};
  extend(a, k, [&](const std::vector<int>& b) { best = std::max(best, naive_range(b)); });
  return best;
}

Extremal n2_star(int k, Limits limits) {
  check_limits(k, limits);
  Extremal best;
  std::vector<int> a{0};
  extend(a, k, [&](const std::vector<int>& b) {
    const int r = naive_range(b);
    if (r != 2 * b.back()) return;
    if (r > best.range) {
      best.range = r;
      best.bases.clear();
    }
    if (r == best.range) best.bases.emplace_back(b);
  });
  return best;
}

std::vector<Basis> restricted_bases(int k, Limits limits) {
  check_limits(k, limits);
  std::vector<Basis> out;
  std::vector<int> a{0};
  extend(a, k, [&](const std::vector<int>& b) {
    if (naive_range(b) == 2 * b.back()) out.emplace_back(b);
  });
  return out;
}

std::uint64_t count_prefixes(int j, Limits limits) {
  check_limits(j, limits);
  std::vector<int> a{0};
  return count_from(a, j);
}

Report report(int k, Limits limits) {
  check_limits(k, limits);
  Report rep;
  rep.k = k;
  std::vector<int> a{0};
  extend(a, k, [&](const std::vector<int>& b) {
    const int r = naive_range(b);
    if (r > rep.n2) {
      rep.n2 = r;
      rep.extremal_bases.clear();
    }
    if (r == rep.n2) rep.extremal_bases.emplace_back(b);
    if (r == 2 * b.back()) {
      if (r > rep.n2_star) {
        rep.n2_star = r;
        rep.extremal_restricted_bases.clear();
      }
      if (r == rep.n2_star) rep.extremal_restricted_bases.emplace_back(b);
    }
  });
  return rep;
}

}  // namespace stampforge::oracle
