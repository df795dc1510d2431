// kbound: command-line front end for recurrence bound certification.
//
// Exit status: 0 certified, 2 refuted, 3 unknown, 1 usage or input errors.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kb/analyzer.hpp"
#include "kb/poset_sweep.hpp"
#include "kb/spec_io.hpp"

namespace {

using namespace kb;

constexpr int kCertified = 0;
constexpr int kError = 1;
constexpr int kRefuted = 2;
constexpr int kUnknown = 3;

int exit_code(Status s) {
  switch (s) {
    case Status::Certified: return kCertified;
    case Status::Refuted: return kRefuted;
    case Status::Unknown: return kUnknown;
  }
  return kError;
}

struct Options {
  std::string spec;
  std::string lower;
  std::string upper;
  std::uint64_t prefix = 128;
  std::size_t max_iters = 256;
  unsigned precision = 128;
  std::string tail_floor = "1";
  std::uint64_t seed = 1;
  std::string table_out;
  std::string grid_c;
  std::string grid_n0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

mpq_class positive_rational(const std::string& text, const char* what) {
  ExtendedNonNeg v = ExtendedNonNeg::parse(text);
  if (v.is_infinite() || v.is_zero()) throw std::invalid_argument(std::string(what) + " must be positive and finite");
  return v.value();
}

/// "--grid-c 1/2,1,2" and "--grid-n0 1..16" or "1,2,4".
SearchGrid make_grid(const Options& o) {
  SearchGrid g = SearchGrid::standard();
  if (!o.grid_c.empty()) {
    g.c.clear();
    for (const auto& item : split(o.grid_c, ',')) g.c.push_back(positive_rational(item, "grid constant"));
  }
  if (!o.grid_n0.empty()) {
    g.n0.clear();
    for (const auto& item : split(o.grid_n0, ',')) {
      auto dots = item.find("..");
      if (dots == std::string::npos) {
        g.n0.push_back(std::stoull(item));
        continue;
      }
      std::uint64_t lo = std::stoull(item.substr(0, dots)), hi = std::stoull(item.substr(dots + 2));
      for (std::uint64_t n = lo; n <= hi; ++n) g.n0.push_back(n);
    }
    for (auto n : g.n0) {
      if (n == 0) throw std::invalid_argument("grid thresholds must be positive");
    }
  }
  if (g.c.empty() || g.n0.empty()) throw std::invalid_argument("search grids must be nonempty");
  return g;
}

void check_config(const Options& o) {
  if (o.prefix == 0) throw std::invalid_argument("--prefix must be positive");
  if (o.max_iters == 0) throw std::invalid_argument("--max-iters must be positive");
  if (o.precision == 0) throw std::invalid_argument("--precision must be positive");
  positive_rational(o.tail_floor, "--tail-floor");
}

ComplexityFunction candidate(const rec::Recurrence& r, const std::string& text, const Options& o) {
  return rec::anchor(r, ComplexityFunction::from_expr(Expr::parse(text), o.precision));
}

void write_table(const std::string& path, const std::string& table) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << table;
}

int cmd_analyze(const Options& o) {
  check_config(o);
  auto r = rec::load_spec(o.spec);
  if (o.upper.empty()) throw std::invalid_argument("--upper is required");
  analysis::CertifyConfig cfg;
  cfg.N = o.prefix;
  cfg.max_iters = o.max_iters;
  cfg.grid = make_grid(o);
  cfg.seed = o.seed;

  auto f = candidate(r, o.upper, o);
  std::cout << "seed: " << o.seed << "\n";
  analysis::BoundCertificate c;
  if (o.lower.empty()) {
    if (!std::holds_alternative<rec::Probabilistic>(r.family())) {
      throw std::invalid_argument("--lower is required outside the probabilistic family");
    }
    std::cout << "lower candidate defaults to g_h\n";
    c = analysis::audit_theorem_R(r, f, cfg);
  } else {
    c = analysis::certify_bounds(r, candidate(r, o.lower, o), f, cfg);
  }
  std::cout << analysis::render_text(c);
  write_table(o.table_out, analysis::render_table(c));
  return exit_code(c.verdict);
}

int cmd_iterate(const Options& o, const std::string& from) {
  check_config(o);
  auto r = rec::load_spec(o.spec);
  auto x0 = from.empty() ? rec::bottom_element(r) : candidate(r, from, o);
  analysis::IterateOptions opts;
  opts.max_iters = o.max_iters;
  try {
    auto it = analysis::kleene_iterate(r, x0, o.prefix, opts);
    std::cout << analysis::render_text(it);
    write_table(o.table_out, analysis::render_table(it, x0.tabulate(o.prefix)));
    auto oracle = rec::oracle_solve(r, o.prefix);
    bool agree = it.limit_prefix == rec::Table<Interval>(oracle.begin(), oracle.end());
    std::cout << "oracle agreement: " << (agree ? "yes" : "no") << "\n";
    if (it.increasing == Tri::Unknown) return kUnknown;
    return agree ? kCertified : kRefuted;
  } catch (const analysis::NotIncreasing& e) {
    std::cout << "refuted: " << e.what() << "\n";
    return kRefuted;
  } catch (const analysis::MaxItersExceeded& e) {
    std::cout << "unknown: " << e.what() << "\n";
    return kUnknown;
  }
}

int cmd_check_order(const Options& o, const std::string& lhs, const std::string& rhs) {
  check_config(o);
  auto f = ComplexityFunction::from_expr(Expr::parse(lhs), o.precision);
  auto g = ComplexityFunction::from_expr(Expr::parse(rhs), o.precision);
  if (!o.spec.empty()) {
    auto r = rec::load_spec(o.spec);
    f = rec::anchor(r, f);
    g = rec::anchor(r, g);
  }
  auto v = leq_prefix(f, g, o.prefix);
  std::cout << lhs << " <= " << rhs << " on [1," << v.checked_to << "]: " << to_string(v.status);
  if (v.n) std::cout << " at n=" << *v.n << " (" << v.lhs->str() << " vs " << v.rhs->str() << ")";
  std::cout << "\n";
  return exit_code(v.status);
}

int cmd_contraction(const Options& o, std::size_t pairs) {
  check_config(o);
  auto r = rec::load_spec(o.spec);
  if (!r.contraction_constant()) throw std::invalid_argument("the probabilistic family has no contraction constant");
  r.prepare(2 * o.prefix);
  auto sample = rec::sample_pairs(r, pairs, o.prefix, o.seed);
  auto rep = rec::contraction_check(r, sample, o.prefix, positive_rational(o.tail_floor, "--tail-floor"));
  std::cout << "seed: " << o.seed << "\n";
  std::cout << "recurrence: " << r.describe() << "\n";
  std::cout << "constant: " << rep.constant.get_str() << "\n";
  std::cout << "pairs: " << rep.pairs << ", prefix N=" << o.prefix << "\n";
  std::cout << "worst ratio: ";
  if (rep.worst_ratio) {
    std::cout << std::fixed << std::setprecision(6) << rep.worst_ratio->get_d() << " (exact " << rep.worst_ratio->get_str()
              << ")\n";
  } else {
    std::cout << "n/a\n";
  }
  std::cout << "violations: " << rep.violations;
  if (rep.first_violation) std::cout << " (first at pair " << *rep.first_violation << ")";
  std::cout << "\n";
  return rep.violations == 0 ? kCertified : kRefuted;
}

int cmd_poset_lab(std::size_t max_size, std::uint64_t random_cases, std::size_t min_random, std::size_t max_random,
                  std::uint64_t seed) {
  if (max_size > 4) throw std::invalid_argument("exhaustive sweeps go up to 4 elements");
  if (min_random == 0 || min_random > max_random || max_random > 7) {
    throw std::invalid_argument("random sizes must satisfy 1 <= min <= max <= 7");
  }
  std::cout << "seed: " << seed << "\n";
  std::uint64_t bad = 0;
  for (std::size_t n = 1; n <= max_size; ++n) {
    auto s = poset::sweep_exhaustive_parallel(n);
    bad += s.violations();
    std::cout << "size " << n << ": " << s.violations() << " inconsistencies over " << s.posets << "x" << [n] {
      std::uint64_t m = 1;
      for (std::size_t k = 0; k < n; ++k) m *= n;
      return m;
    }() << " cases (monotone " << s.monotone_cases << ", continuous " << s.continuous_cases << ", with fixed point "
              << s.fixed_point_cases << ")\n";
  }
  if (random_cases > 0) {
    auto s = poset::sweep_random_parallel(random_cases, min_random, max_random, seed);
    bad += s.violations();
    std::cout << "random sizes " << min_random << "-" << max_random << ": " << s.violations()
              << " inconsistencies over " << s.cases << " cases\n";
  }
  std::cout << "total: " << bad << " inconsistencies\n";
  return bad == 0 ? kCertified : kRefuted;
}

int cmd_oracle(const Options& o) {
  check_config(o);
  auto r = rec::load_spec(o.spec);
  auto t = rec::oracle_solve(r, o.prefix);
  std::ostringstream os;
  os << "n,T(n)\n";
  for (std::uint64_t n = 1; n <= o.prefix; ++n) os << n << "," << t[n].fraction_str() << "\n";
  if (o.table_out.empty()) {
    std::cout << os.str();
  } else {
    write_table(o.table_out, os.str());
    std::cout << r.describe() << ": " << o.prefix << " rows written to " << o.table_out << "\n";
  }
  return kCertified;
}

void add_common(CLI::App* cmd, Options& o, bool needs_spec) {
  auto* spec = cmd->add_option("--spec", o.spec, "recurrence spec (JSON)");
  if (needs_spec) spec->required();
  cmd->add_option("--prefix", o.prefix, "checked prefix N")->capture_default_str();
  cmd->add_option("--max-iters", o.max_iters, "Kleene iteration budget")->capture_default_str();
  cmd->add_option("--precision", o.precision, "fractional bits for log2/pow enclosures")->capture_default_str();
  cmd->add_option("--tail-floor", o.tail_floor, "declared lower bound of g beyond N")->capture_default_str();
  cmd->add_option("--seed", o.seed, "seed for sampled checks")->capture_default_str();
  cmd->add_option("--table-out", o.table_out, "write the per-n value table here");
  cmd->add_option("--grid-c", o.grid_c, "comma-separated constants c");
  cmd->add_option("--grid-n0", o.grid_n0, "thresholds, e.g. 1..16 or 1,2,4");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kbound: certified asymptotic bounds for recurrences via Kleene iteration"};
  app.require_subcommand(1);
  Options o;

  auto* analyze = app.add_subcommand("analyze", "certify g <= limit <= f and limit in Omega(g) and O(f)");
  add_common(analyze, o, true);
  analyze->add_option("--lower", o.lower, "lower candidate expression in n");
  analyze->add_option("--upper", o.upper, "upper candidate expression in n");

  std::string from;
  auto* iterate = app.add_subcommand("iterate", "Kleene orbit from the bottom element or --from");
  add_common(iterate, o, true);
  iterate->add_option("--from", from, "starting function (default: anchored h)");

  std::string lhs, rhs;
  auto* order = app.add_subcommand("check-order", "pointwise lhs <= rhs on [1, N]");
  add_common(order, o, false);
  order->add_option("--lhs", lhs)->required();
  order->add_option("--rhs", rhs)->required();

  std::size_t pairs = 100;
  auto* contraction = app.add_subcommand("contraction", "sampled contraction check of the functional");
  add_common(contraction, o, true);
  contraction->add_option("--pairs", pairs)->capture_default_str();

  std::size_t max_size = 4, min_random = 5, max_random = 7;
  std::uint64_t random_cases = 10000;
  auto* lab = app.add_subcommand("poset-lab", "exhaustive and random sweeps of the finite Kleene checks");
  lab->add_option("--max-size", max_size, "exhaustive sweep up to this size")->capture_default_str();
  lab->add_option("--random", random_cases, "number of random cases")->capture_default_str();
  lab->add_option("--min-random-size", min_random)->capture_default_str();
  lab->add_option("--max-random-size", max_random)->capture_default_str();
  lab->add_option("--seed", o.seed)->capture_default_str();

  auto* oracle = app.add_subcommand("oracle", "exact table of T(1..N)");
  add_common(oracle, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*analyze) return cmd_analyze(o);
    if (*iterate) return cmd_iterate(o, from);
    if (*order) return cmd_check_order(o, lhs, rhs);
    if (*contraction) return cmd_contraction(o, pairs);
    if (*lab) return cmd_poset_lab(max_size, random_cases, min_random, max_random, o.seed);
    if (*oracle) return cmd_oracle(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
