#include "stampforge/search.hpp"

#include "stampforge/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace stampforge {

namespace {

using nlohmann::json;

json stats_to_json(const SearchStats& s) {
  return {{"nodes_visited", s.nodes_visited},
          {"prefixes_generated", s.prefixes_generated},
          {"candidates_joined", s.candidates_joined}};
}

SearchStats stats_from_json(const json& j) {
  SearchStats s;
  s.nodes_visited = j.value("nodes_visited", std::uint64_t{0});
  s.prefixes_generated = j.value("prefixes_generated", std::uint64_t{0});
  s.candidates_joined = j.value("candidates_joined", std::uint64_t{0});
  return s;
}

std::vector<int> to_vector(const Basis& b) { return {b.elements().begin(), b.elements().end()}; }

// Suffix seed Q turned into the upper part S = n/2 - Q, ascending.
struct Suffix {
  std::vector<int> elements;
  CoverageSet doubled;  // 2S
};

}  // namespace

SearchConfig SearchConfig::make(int k, int n, const N2Table& table) {
  SearchConfig cfg;
  cfg.k = k;
  cfg.n = n;
  cfg.table = table;
  cfg.j_start = std::max(0, k - table.j_max() - 2);
  cfg.j_mid = k / 2;
  cfg.validate();
  return cfg;
}

void SearchConfig::validate() const {
  if (k < 1) throw ParameterError("length k must be at least 1, got " + std::to_string(k));
  if (n <= 0 || n % 2 != 0) throw ParameterError("restricted range n must be positive and even, got " + std::to_string(n));
  if (j_start != std::max(0, k - table.j_max() - 2)) throw ParameterError("j_start does not match the table");
  if (j_mid != k / 2) throw ParameterError("j_mid must be floor(k/2)");
  if (j_start > j_mid) {
    throw ParameterError("n2 table too short for k=" + std::to_string(k) + ": first range bound index " +
                         std::to_string(j_start) + " lies past the midpoint " + std::to_string(j_mid));
  }
  if (split_depth < 0) throw ParameterError("split depth must be non-negative");
}

Checkpoint::Checkpoint(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  for (const auto& text : lines) {
    ++line_no;
    if (text.empty()) continue;
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
      if (line_no == lines.size()) break;  // interrupted write
      throw IngestionError(path_ + ":" + std::to_string(line_no) + ": malformed checkpoint record");
    }
    Record r;
    r.k = j.at("k").get<int>();
    r.n = j.at("n").get<int>();
    r.length = j.at("length").get<int>();
    r.stem = Basis(j.at("stem").get<std::vector<int>>());
    r.stage1 = stats_from_json(j.at("stage1"));
    r.stage2 = stats_from_json(j.at("stage2"));
    for (const auto& c : j.at("candidates")) r.candidates.emplace_back(c.get<std::vector<int>>());
    records_[{r.k, r.n, r.length, to_vector(r.stem)}] = std::move(r);
  }
}

std::optional<Checkpoint::Record> Checkpoint::find(int k, int n, int length, const Basis& stem) const {
  std::lock_guard lock(mutex_);
  auto it = records_.find({k, n, length, to_vector(stem)});
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void Checkpoint::save(const Record& r) {
  json j = {{"k", r.k},
            {"n", r.n},
            {"length", r.length},
            {"stem", to_vector(r.stem)},
            {"stage1", stats_to_json(r.stage1)},
            {"stage2", stats_to_json(r.stage2)},
            {"candidates", json::array()}};
  for (const auto& c : r.candidates) j["candidates"].push_back(to_vector(c));
  std::lock_guard lock(mutex_);
  std::ofstream out(path_, std::ios::app);
  out << j.dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("cannot write checkpoint " + path_);
  records_[{r.k, r.n, r.length, to_vector(r.stem)}] = r;
}

std::size_t Checkpoint::size() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

PrefixConstraints candidate_constraints(const SearchConfig& cfg, int length) {
  cfg.validate();
  if (length < 0 || length > cfg.j_mid) {
    throw ParameterError("candidate length " + std::to_string(length) + " outside [0, " + std::to_string(cfg.j_mid) +
                         "]");
  }
  const BoundProfile profile = bound_profile(cfg.k, cfg.n, cfg.table);
  PrefixConstraints c;
  c.j = length;
  c.max_element = cfg.n / 2;
  c.potential_pruning = cfg.potential_pruning;
  c.lower_bounds.assign(profile.lower.begin(), profile.lower.begin() + length + 1);
  c.range_targets.assign(static_cast<std::size_t>(length + 1), std::nullopt);
  for (int i = cfg.j_start; i <= length; ++i) {
    c.range_targets[static_cast<std::size_t>(i)] = profile.range_lower[static_cast<std::size_t>(i)];
  }
  return c;
}

PrefixConstraints stage1_constraints(const SearchConfig& cfg, int length) {
  PrefixConstraints c = candidate_constraints(cfg, length);
  const int s1 = std::min(cfg.j_start, length);
  const Bound target = s1 == cfg.j_start ? c.range_targets[static_cast<std::size_t>(s1)] : std::nullopt;
  c.j = s1;
  c.lower_bounds.resize(static_cast<std::size_t>(s1 + 1));
  c.range_targets.assign(static_cast<std::size_t>(s1 + 1), std::nullopt);
  c.range_targets[static_cast<std::size_t>(s1)] = target;
  return c;
}

CandidateSet generate_candidates(const SearchConfig& cfg, int length, Checkpoint* checkpoint) {
  const PrefixConstraints full = candidate_constraints(cfg, length);
  const PrefixConstraints first = stage1_constraints(cfg, length);
  const WorkSplit split = split_work(first, std::clamp(cfg.split_depth, 0, first.j));

  std::vector<Checkpoint::Record> parts(split.stems.size());
  parallel_for(split.stems.size(), cfg.jobs, [&](std::size_t i) {
    const Basis& stem = split.stems[i];
    if (checkpoint) {
      if (auto done = checkpoint->find(cfg.k, cfg.n, length, stem)) {
        parts[i] = std::move(*done);
        return;
      }
    }
    Checkpoint::Record r;
    r.k = cfg.k;
    r.n = cfg.n;
    r.length = length;
    r.stem = stem;
    const PrefixSink keep = [&](std::span<const int> p, int) {
      r.candidates.emplace_back(std::vector<int>(p.begin(), p.end()));
    };
    r.stage1 = enumerate_stem(first, stem, [&](std::span<const int> p, int) {
      r.stage2 += enumerate_stem(full, Basis(std::vector<int>(p.begin(), p.end())), keep);
    });
    if (checkpoint) checkpoint->save(r);
    parts[i] = std::move(r);
  });

  CandidateSet out;
  out.stats.length = length;
  out.stats.stage1_length = first.j;
  out.stats.stage1 = split.stats;
  for (auto& part : parts) {
    out.stats.stage1 += part.stage1;
    out.stats.stage2 += part.stage2;
    out.prefixes.insert(out.prefixes.end(), std::make_move_iterator(part.candidates.begin()),
                        std::make_move_iterator(part.candidates.end()));
  }
  return out;
}

RestrictedSearchResult join(const SearchConfig& cfg, const std::vector<Basis>& prefixes,
                            const std::vector<Basis>& suffix_seeds) {
  cfg.validate();
  RestrictedSearchResult res;
  res.k = cfg.k;
  res.n = cfg.n;
  const int half = cfg.n / 2;
  const int suffix_length = cfg.k - cfg.j_mid - 1;

  std::vector<Suffix> suffixes;
  suffixes.reserve(suffix_seeds.size());
  for (const auto& q : suffix_seeds) {
    if (q.length() != suffix_length) throw ParameterError("suffix seed has the wrong length");
    if (q.max() > half) continue;
    Suffix s{{}, CoverageSet(cfg.n)};
    for (auto it = q.elements().rbegin(); it != q.elements().rend(); ++it) s.elements.push_back(half - *it);
    for (int x : s.elements)
      for (int y : s.elements) s.doubled.insert(x + y);
    suffixes.push_back(std::move(s));
  }
  std::stable_sort(suffixes.begin(), suffixes.end(),
                   [](const Suffix& a, const Suffix& b) { return a.elements.front() < b.elements.front(); });
  std::vector<int> lows;
  lows.reserve(suffixes.size());
  for (const auto& s : suffixes) lows.push_back(s.elements.front());

  std::vector<std::vector<Basis>> found(prefixes.size());
  std::vector<std::uint64_t> pairs(prefixes.size(), 0);
  parallel_for(prefixes.size(), cfg.jobs, [&](std::size_t i) {
    const Basis& p = prefixes[i];
    if (p.length() != cfg.j_mid) throw ParameterError("prefix has the wrong length");
    if (p.max() >= half) return;
    // Admissibility of A forces max P < min S <= n2(P) + 1.
    const int reach = range_n2(p) + 1;
    CoverageSet mask(half);
    for (int x : p.elements()) mask.insert(x);
    CoverageSet base(cfg.n);
    for (int x : p.elements()) base.or_shifted(mask.words(), x);
    auto lo = std::upper_bound(lows.begin(), lows.end(), p.max());
    auto hi = std::upper_bound(lows.begin(), lows.end(), reach);
    for (auto it = lo; it < hi; ++it) {
      const Suffix& s = suffixes[static_cast<std::size_t>(it - lows.begin())];
      CoverageSet cov = base;
      cov.or_shifted(s.doubled.words(), 0);
      for (int x : s.elements) cov.or_shifted(mask.words(), x);
      ++pairs[i];
      if (cov.contiguous_range() < cfg.n) continue;
      std::vector<int> a(p.elements().begin(), p.elements().end());
      a.insert(a.end(), s.elements.begin(), s.elements.end());
      found[i].emplace_back(std::move(a));
    }
  });

  for (std::size_t i = 0; i < prefixes.size(); ++i) {
    res.join.candidates_joined += pairs[i];
    res.bases.insert(res.bases.end(), found[i].begin(), found[i].end());
  }
  std::sort(res.bases.begin(), res.bases.end());
  res.bases.erase(std::unique(res.bases.begin(), res.bases.end()), res.bases.end());
  res.join.prefixes_generated = res.bases.size();
  return res;
}

RestrictedSearchResult search_restricted(const SearchConfig& cfg, Checkpoint* checkpoint) {
  cfg.validate();
  const int q_length = cfg.k - cfg.j_mid - 1;
  CandidateSet p = generate_candidates(cfg, cfg.j_mid, checkpoint);
  CandidateSet q = q_length == cfg.j_mid ? p : generate_candidates(cfg, q_length, checkpoint);
  RestrictedSearchResult res = join(cfg, p.prefixes, q.prefixes);
  res.prefix_side = p.stats;
  res.suffix_side = q.stats;

  for (const auto& b : res.bases) {
    const BasisClass c = classify(b);
    if (!c.restricted || c.range != cfg.n || b.length() != cfg.k) {
      throw std::logic_error("search produced a basis that is not restricted with range " + std::to_string(cfg.n) +
                             ": " + b.to_string());
    }
    if (!std::binary_search(res.bases.begin(), res.bases.end(), mirror(b))) {
      throw std::logic_error("search result is not closed under mirroring: " + b.to_string());
    }
  }
  return res;
}

bool passes_search_filters(const SearchConfig& cfg, const Basis& basis) {
  cfg.validate();
  if (basis.length() != cfg.k || basis.max() * 2 != cfg.n) return false;
  const BasisClass c = classify(basis);
  if (!c.restricted) return false;
  const int q_length = cfg.k - cfg.j_mid - 1;
  return satisfies(candidate_constraints(cfg, cfg.j_mid), basis.prefix(cfg.j_mid)) &&
         satisfies(candidate_constraints(cfg, q_length), mirror(basis).prefix(q_length));
}

int default_n_cap(int k) {
  if (k < 1) throw ParameterError("length k must be at least 1");
  const long long sums = static_cast<long long>(k + 1) * (k + 2) / 2 - 1;
  return static_cast<int>(sums - sums % 2);
}

ExtremalResult find_extremal(int k, const N2Table& table, const ExtremalOptions& options) {
  const int cap = options.n_cap ? *options.n_cap : default_n_cap(k);
  if (cap <= 0 || cap % 2 != 0) throw ParameterError("n cap must be positive and even, got " + std::to_string(cap));
  ExtremalResult out;
  for (int n = cap; n >= 2; n -= 2) {
    SearchConfig cfg = SearchConfig::make(k, n, table);
    cfg.split_depth = options.split_depth;
    cfg.potential_pruning = options.potential_pruning;
    cfg.jobs = options.jobs;
    RestrictedSearchResult res = search_restricted(cfg, options.checkpoint);
    ++out.searches;
    if (options.on_step) options.on_step(res);
    if (!res.bases.empty()) {
      out.n_star = n;
      out.result = std::move(res);
      return out;
    }
  }
  throw std::logic_error("no restricted basis found for k=" + std::to_string(k) + " at or below the cap");
}

}  // namespace stampforge
