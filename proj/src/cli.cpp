#include "stampforge/cli.hpp"

#include "stampforge/basis.hpp"
#include "stampforge/bounds.hpp"
#include "stampforge/enumerator.hpp"
#include "stampforge/oracle.hpp"
#include "stampforge/search.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

namespace stampforge {

namespace {

using nlohmann::json;

struct Common {
  std::string table_path;
  bool json = false;
  int jobs = 1;
  std::uint64_t seed = 1;
  bool slow = false;
};

json to_json(const Basis& b) { return json(std::vector<int>(b.elements().begin(), b.elements().end())); }

json to_json(const Bound& b) { return b ? json(*b) : json(nullptr); }

json to_json(const SearchStats& s) {
  return {{"nodes_visited", s.nodes_visited},
          {"prefixes_generated", s.prefixes_generated},
          {"candidates_joined", s.candidates_joined}};
}

json to_json(const CandidateStats& s) {
  return {{"length", s.length},
          {"stage1_length", s.stage1_length},
          {"stage1", to_json(s.stage1)},
          {"stage2", to_json(s.stage2)}};
}

std::string bound_text(const Bound& b) { return b ? std::to_string(*b) : "-"; }

N2Table resolve_table(const Common& common) {
  std::string path = common.table_path;
  if (path.empty()) {
    if (const char* env = std::getenv("STAMPFORGE_TABLE"); env != nullptr) path = env;
  }
  return path.empty() ? N2Table::builtin() : N2Table::load(path);
}

int resolve_jobs(int jobs) {
  if (jobs < 0) throw ParameterError("--jobs must be non-negative");
  if (jobs == 0) return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  return jobs;
}

// Lines that hold a basis: blank lines and '#' comments are skipped.
std::vector<std::pair<int, std::string>> basis_lines(std::istream& in) {
  std::vector<std::pair<int, std::string>> lines;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    lines.emplace_back(number, line);
  }
  return lines;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string s;
  for (const auto& w : words) {
    if (!s.empty()) s += ' ';
    s += w;
  }
  return s;
}

void print_basis_class(std::ostream& out, const Basis& b, bool as_json) {
  const BasisClass c = classify(b);
  if (as_json) {
    out << json{{"k", b.length()},
                {"n", c.range},
                {"admissible", c.admissible},
                {"restricted", c.restricted},
                {"basis", to_json(b)}}
               .dump()
        << '\n';
    return;
  }
  out << "k=" << b.length() << " n=" << c.range << " admissible=" << (c.admissible ? "yes" : "no")
      << " restricted=" << (c.restricted ? "yes" : "no") << '\n';
}

void print_result_bases(std::ostream& out, const RestrictedSearchResult& r, bool as_json) {
  for (const auto& b : r.bases) {
    if (as_json) {
      out << json{{"k", r.k}, {"n", r.n}, {"basis", to_json(b)}, {"symmetric", is_symmetric(b)}}.dump() << '\n';
    } else {
      out << b.to_string() << (is_symmetric(b) ? "  symmetric" : "") << '\n';
    }
  }
}

void print_search_summary(std::ostream& out, const RestrictedSearchResult& r, std::optional<int> n_star, int searches,
                          bool as_json) {
  if (as_json) {
    json s = {{"k", r.k},
              {"n", r.n},
              {"bases", r.bases.size()},
              {"prefix_side", to_json(r.prefix_side)},
              {"suffix_side", to_json(r.suffix_side)},
              {"join", to_json(r.join)}};
    if (n_star) {
      s["n_star"] = *n_star;
      s["searches"] = searches;
    }
    out << json{{"summary", s}}.dump() << '\n';
    return;
  }
  out << "# k=" << r.k << " n=" << r.n << " bases=" << r.bases.size();
  if (n_star) out << " n_star=" << *n_star << " searches=" << searches;
  out << '\n';
  out << "# prefixes (index " << r.prefix_side.length << "): stage1 generated=" << r.prefix_side.stage1.prefixes_generated
      << " at index " << r.prefix_side.stage1_length << ", candidates=" << r.prefix_side.stage2.prefixes_generated
      << ", nodes=" << r.prefix_side.stage1.nodes_visited + r.prefix_side.stage2.nodes_visited << '\n';
  out << "# suffixes (index " << r.suffix_side.length << "): candidates=" << r.suffix_side.stage2.prefixes_generated
      << ", nodes=" << r.suffix_side.stage1.nodes_visited + r.suffix_side.stage2.nodes_visited << '\n';
  out << "# pairs joined=" << r.join.candidates_joined << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Search and verification tools for restricted additive bases", "stampforge"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--table", common.table_path, "n2 table as a b-file (default: built in, or $STAMPFORGE_TABLE)");
  app.add_flag("--json", common.json, "Emit JSON / JSON lines");
  app.add_option("--jobs", common.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", common.seed, "Random seed");
  app.add_flag("--slow", common.slow, "Allow oracle runs above the feasibility limit");

  // range
  std::vector<std::string> range_words;
  auto* range_cmd = app.add_subcommand("range", "Classify a basis (elements, '+c' notation, or - for stdin)");
  range_cmd->add_option("elements", range_words)->required();

  // mirror
  std::vector<std::string> mirror_words;
  auto* mirror_cmd = app.add_subcommand("mirror", "Print the mirror image a_k - A");
  mirror_cmd->add_option("elements", mirror_words)->required();

  // bounds
  int bounds_k = 0;
  int bounds_n = 0;
  bool bounds_csv = false;
  auto* bounds_cmd = app.add_subcommand("bounds", "Element-wise and range bounds for restricted bases");
  bounds_cmd->add_option("--k", bounds_k, "Length")->required();
  bounds_cmd->add_option("--n", bounds_n, "Even range")->required();
  bounds_cmd->add_flag("--csv", bounds_csv, "CSV output");

  // random-prefixes
  int random_j = 0;
  int random_count = 10;
  auto* random_cmd = app.add_subcommand("random-prefixes", "Random admissible prefixes (uniform next element)");
  random_cmd->add_option("--j", random_j, "Prefix index")->required()->check(CLI::NonNegativeNumber);
  random_cmd->add_option("--count", random_count, "How many")->check(CLI::NonNegativeNumber);

  // enumerate
  int enum_j = 0;
  std::optional<int> enum_k;
  std::optional<int> enum_n;
  std::optional<int> enum_min_last;
  std::optional<int> enum_min_range;
  std::optional<int> enum_max_element;
  bool enum_elementwise = false;
  bool enum_range_bounds = false;
  bool enum_count = false;
  bool enum_no_potential = false;
  int enum_split = 6;
  auto* enum_cmd = app.add_subcommand("enumerate", "Enumerate admissible j-prefixes under constraints");
  enum_cmd->add_option("--j", enum_j, "Prefix index")->required()->check(CLI::NonNegativeNumber);
  auto* enum_k_opt = enum_cmd->add_option("--k", enum_k, "Length of the restricted basis");
  auto* enum_n_opt = enum_cmd->add_option("--n", enum_n, "Range of the restricted basis");
  enum_k_opt->needs(enum_n_opt);
  enum_n_opt->needs(enum_k_opt);
  enum_cmd->add_option("--min-last", enum_min_last, "Require a_j >= X");
  enum_cmd->add_option("--min-range", enum_min_range, "Require n2(A_j) >= X");
  enum_cmd->add_option("--max-element", enum_max_element, "Cap every element (default n/2, else the n2 table)");
  enum_cmd->add_flag("--elementwise", enum_elementwise, "Apply element-wise lower bounds (needs --k/--n)")
      ->needs(enum_k_opt);
  enum_cmd->add_flag("--range-bounds", enum_range_bounds, "Apply range lower bounds at every index (needs --k/--n)")
      ->needs(enum_k_opt);
  enum_cmd->add_flag("--count", enum_count, "Only count");
  enum_cmd->add_flag("--no-potential", enum_no_potential, "Disable potential-range pruning");
  enum_cmd->add_option("--split-depth", enum_split, "Work-split depth for --jobs")->check(CLI::NonNegativeNumber);

  // search-restricted
  int search_k = 0;
  std::optional<int> search_n;
  std::optional<int> search_cap;
  std::string checkpoint_path;
  int search_split = 8;
  auto* search_cmd = app.add_subcommand("search-restricted", "All restricted bases for (k, n), or n2*(k)");
  search_cmd->add_option("--k", search_k, "Length")->required()->check(CLI::PositiveNumber);
  auto* search_n_opt = search_cmd->add_option("--n", search_n, "Even range to search");
  auto* search_cap_opt = search_cmd->add_option("--n-cap", search_cap, "Start of the descending search");
  search_n_opt->excludes(search_cap_opt);
  search_cmd->add_option("--checkpoint", checkpoint_path, "Resume file (JSON lines)");
  search_cmd->add_option("--split-depth", search_split, "Work-split depth")->check(CLI::NonNegativeNumber);

  // oracle
  std::optional<int> oracle_k;
  bool oracle_restricted = false;
  std::optional<int> oracle_count;
  bool oracle_bfile = false;
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force reference values");
  auto* oracle_k_opt = oracle_cmd->add_option("--k", oracle_k, "Length")->check(CLI::NonNegativeNumber);
  oracle_cmd->add_flag("--restricted", oracle_restricted, "Only n2*(k) and its extremal bases");
  auto* oracle_count_opt =
      oracle_cmd->add_option("--count-prefixes", oracle_count, "Count admissible j-prefixes")->check(CLI::NonNegativeNumber);
  oracle_cmd->add_flag("--bfile", oracle_bfile, "Print 'k value' b-file lines");
  oracle_k_opt->excludes(oracle_count_opt);

  // check
  std::string check_path;
  auto* check_cmd = app.add_subcommand("check", "Verify that every basis in a file is restricted");
  check_cmd->add_option("file", check_path, "One basis per line, '#' comments, '-' for stdin")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> argv{"stampforge"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    err << "run 'stampforge --help' for usage\n";
    return kExitUsage;
  }

  try {
    const N2Table table = resolve_table(common);
    const int jobs = resolve_jobs(common.jobs);
    const bool as_json = common.json;

    if (range_cmd->parsed()) {
      if (range_words.size() == 1 && range_words[0] == "-") {
        for (const auto& [number, line] : basis_lines(in)) {
          try {
            print_basis_class(out, parse_basis(line), as_json);
          } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("stdin line " + std::to_string(number) + ": " + e.what());
          }
        }
      } else {
        print_basis_class(out, parse_basis(join_words(range_words)), as_json);
      }
      return kExitOk;
    }

    if (mirror_cmd->parsed()) {
      const Basis b = parse_basis(join_words(mirror_words));
      const Basis m = mirror(b);
      if (as_json) {
        out << json{{"basis", to_json(b)}, {"mirror", to_json(m)}}.dump() << '\n';
      } else {
        out << m.to_string() << '\n';
      }
      return kExitOk;
    }

    if (bounds_cmd->parsed()) {
      const BoundProfile p = bound_profile(bounds_k, bounds_n, table);
      if (bounds_csv) {
        out << p.to_csv();
      } else if (as_json) {
        json rows = json::array();
        for (int j = 0; j <= p.k; ++j) {
          const auto i = static_cast<std::size_t>(j);
          rows.push_back({{"j", j},
                          {"lower", to_json(p.lower[i])},
                          {"upper", to_json(p.upper[i])},
                          {"range_lower", to_json(p.range_lower[i])}});
        }
        out << json{{"k", p.k}, {"n", p.n}, {"rows", rows}}.dump() << '\n';
      } else {
        out << std::setw(4) << "j" << std::setw(8) << "lower" << std::setw(8) << "upper" << std::setw(13)
            << "range_lower" << '\n';
        for (int j = 0; j <= p.k; ++j) {
          const auto i = static_cast<std::size_t>(j);
          out << std::setw(4) << j << std::setw(8) << bound_text(p.lower[i]) << std::setw(8)
              << bound_text(p.upper[i]) << std::setw(13) << bound_text(p.range_lower[i]) << '\n';
        }
      }
      return kExitOk;
    }

    if (random_cmd->parsed()) {
      std::mt19937_64 rng(common.seed);
      for (int c = 0; c < random_count; ++c) {
        std::vector<int> a{0};
        int r = 0;
        for (int i = 1; i <= random_j; ++i) {
          std::uniform_int_distribution<int> next(a.back() + 1, r + 1);
          a.push_back(next(rng));
          r = range_n2(Basis(a));
        }
        const Basis b(a);
        if (as_json) {
          out << json{{"prefix", to_json(b)}, {"range", r}}.dump() << '\n';
        } else {
          out << b.to_string() << '\n';
        }
      }
      return kExitOk;
    }

    if (enum_cmd->parsed()) {
      PrefixConstraints c;
      if (enum_k) {
        SearchConfig cfg = SearchConfig::make(*enum_k, *enum_n, table);
        if (enum_j > cfg.j_mid && (enum_elementwise || enum_range_bounds)) {
          throw ParameterError("--j must not exceed floor(k/2) when bounds are applied");
        }
        cfg.potential_pruning = !enum_no_potential;
        c.j = enum_j;
        c.max_element = *enum_n / 2;
        const BoundProfile p = bound_profile(*enum_k, *enum_n, table);
        if (enum_elementwise) c.lower_bounds.assign(p.lower.begin(), p.lower.begin() + enum_j + 1);
        if (enum_range_bounds) c.range_targets = candidate_constraints(cfg, enum_j).range_targets;
      } else {
        c = PrefixConstraints::admissible(enum_j, table);
      }
      if (enum_max_element) c.max_element = *enum_max_element;
      c.min_last = enum_min_last;
      c.min_range_at_j = enum_min_range;
      c.potential_pruning = !enum_no_potential;
      const auto mode = enum_count ? EnumerationMode::count : EnumerationMode::collect;
      const EnumerationResult r = enumerate_parallel(c, mode, enum_split, jobs);
      for (const auto& b : r.prefixes) {
        if (as_json) {
          out << json{{"prefix", to_json(b)}, {"range", range_n2(b)}}.dump() << '\n';
        } else {
          out << b.to_string() << '\n';
        }
      }
      if (as_json) {
        out << json{{"nodes_visited", r.stats.nodes_visited}, {"prefixes_generated", r.stats.prefixes_generated}}
                   .dump()
            << '\n';
      } else {
        out << "# nodes_visited=" << r.stats.nodes_visited << " prefixes_generated=" << r.stats.prefixes_generated
            << '\n';
      }
      return kExitOk;
    }

    if (search_cmd->parsed()) {
      std::unique_ptr<Checkpoint> checkpoint;
      if (!checkpoint_path.empty()) checkpoint = std::make_unique<Checkpoint>(checkpoint_path);
      if (search_n) {
        SearchConfig cfg = SearchConfig::make(search_k, *search_n, table);
        cfg.jobs = jobs;
        cfg.split_depth = search_split;
        const RestrictedSearchResult r = search_restricted(cfg, checkpoint.get());
        print_result_bases(out, r, as_json);
        print_search_summary(out, r, std::nullopt, 1, as_json);
        return kExitOk;
      }
      ExtremalOptions options;
      options.n_cap = search_cap;
      options.jobs = jobs;
      options.split_depth = search_split;
      options.checkpoint = checkpoint.get();
      options.on_step = [&](const RestrictedSearchResult& r) {
        err << "n=" << r.n << " bases=" << r.bases.size() << '\n';
      };
      const ExtremalResult e = find_extremal(search_k, table, options);
      print_result_bases(out, e.result, as_json);
      print_search_summary(out, e.result, e.n_star, e.searches, as_json);
      return kExitOk;
    }

    if (oracle_cmd->parsed()) {
      oracle::Limits limits;
      limits.allow_slow = common.slow;
      if (oracle_count) {
        const std::uint64_t count = oracle::count_prefixes(*oracle_count, limits);
        if (oracle_bfile) {
          out << *oracle_count << ' ' << count << '\n';
        } else if (as_json) {
          out << json{{"j", *oracle_count}, {"prefixes", count}}.dump() << '\n';
        } else {
          out << "j=" << *oracle_count << " admissible prefixes=" << count << '\n';
        }
        return kExitOk;
      }
      if (!oracle_k) throw ParameterError("oracle needs --k or --count-prefixes");
      const int k = *oracle_k;
      if (oracle_restricted) {
        const oracle::Extremal e = oracle::n2_star(k, limits);
        if (oracle_bfile) {
          out << k << ' ' << e.range << '\n';
        } else if (as_json) {
          json bases = json::array();
          for (const auto& b : e.bases) bases.push_back(to_json(b));
          out << json{{"k", k}, {"n2_star", e.range}, {"extremal_restricted_bases", bases}}.dump() << '\n';
        } else {
          out << "k=" << k << " n2*=" << e.range << '\n';
          for (const auto& b : e.bases) out << b.to_string() << '\n';
        }
        return kExitOk;
      }
      const oracle::Report rep = oracle::report(k, limits);
      if (oracle_bfile) {
        out << k << ' ' << rep.n2 << '\n';
      } else if (as_json) {
        json all = json::array();
        json restricted = json::array();
        for (const auto& b : rep.extremal_bases) all.push_back(to_json(b));
        for (const auto& b : rep.extremal_restricted_bases) restricted.push_back(to_json(b));
        out << json{{"k", k},
                    {"n2", rep.n2},
                    {"n2_star", rep.n2_star},
                    {"extremal_bases", all},
                    {"extremal_restricted_bases", restricted}}
                   .dump()
            << '\n';
      } else {
        out << "k=" << k << " n2=" << rep.n2 << " n2*=" << rep.n2_star << '\n';
        for (const auto& b : rep.extremal_bases) out << "extremal: " << b.to_string() << '\n';
        for (const auto& b : rep.extremal_restricted_bases) out << "extremal restricted: " << b.to_string() << '\n';
      }
      return kExitOk;
    }

    if (check_cmd->parsed()) {
      std::ifstream file;
      std::istream* source = &in;
      if (check_path != "-") {
        file.open(check_path);
        if (!file) throw IngestionError("cannot open " + check_path);
        source = &file;
      }
      int failures = 0;
      for (const auto& [number, line] : basis_lines(*source)) {
        try {
          const Basis b = parse_basis(line);
          const BasisClass c = classify(b);
          const bool sym = is_symmetric(b);
          if (!c.restricted) ++failures;
          if (as_json) {
            out << json{{"line", number},
                        {"k", b.length()},
                        {"n", c.range},
                        {"restricted", c.restricted},
                        {"symmetric", sym}}
                       .dump()
                << '\n';
          } else {
            out << "line " << number << ": k=" << b.length() << ' ' << (c.restricted ? "restricted" : "NOT restricted")
                << ", n=" << c.range << ", " << (sym ? "symmetric" : "not symmetric") << '\n';
          }
        } catch (const std::invalid_argument& e) {
          ++failures;
          err << check_path << ":" << number << ": " << e.what() << '\n';
        }
      }
      if (failures > 0) {
        err << "error: " << failures << " line(s) are not restricted bases\n";
        return kExitFailure;
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace stampforge
