#include "kb/analyzer.hpp"

#include <random>
#include <sstream>

namespace kb::analysis {

namespace {

const Recurrence& prepared(const Recurrence& r, std::uint64_t N, std::optional<Recurrence>& holder) {
  if (r.prepared_to() >= N) return r;
  holder.emplace(r);
  holder->prepare(N);
  return *holder;
}

}  // namespace

template <class V>
IterationReport<V> kleene_iterate(const Recurrence& r0, Table<V> x0, const IterateOptions& opts) {
  if (x0.size() < 2) throw std::invalid_argument("prefix must be at least 1");
  if (opts.max_iters == 0) throw std::invalid_argument("max_iters must be at least 1");
  const std::uint64_t N = x0.size() - 1;
  std::optional<Recurrence> holder;
  const Recurrence& r = prepared(r0, N, holder);

  IterationReport<V> rep;
  rep.N = N;
  Table<V> x = std::move(x0);
  std::uint64_t unchanged_before = 0;
  std::uint64_t last_changed = 1;
  for (std::size_t m = 0; m < opts.max_iters; ++m) {
    if (opts.keep_snapshots) rep.iterates.push_back(x);
    Table<V> y = opts.parallel ? rec::phi_step_parallel(r, x, unchanged_before) : rec::phi_step_serial(r, x);
    StepSummary s{m, 0, 0};
    for (std::uint64_t n = 1; n <= N; ++n) {
      if (x[n] == y[n]) continue;
      if (s.first_changed == 0) s.first_changed = n;
      ++s.changed;
      Tri t;
      if constexpr (std::is_same_v<V, Interval>) {
        t = certainly_leq(x[n], y[n]);
      } else {
        t = x[n] <= y[n] ? Tri::True : Tri::False;
      }
      if (t == Tri::False) throw NotIncreasing(m, n);
      if (t == Tri::Unknown) {
        rep.increasing = Tri::Unknown;
        if (!rep.undecided) rep.undecided = {m, n};
      }
    }
    rep.steps.push_back(s);
    if (s.first_changed == 0) {
      rep.stabilized_at = m;
      rep.limit_prefix = std::move(x);
      return rep;
    }
    last_changed = s.first_changed;
    unchanged_before = s.first_changed;
    x = std::move(y);
  }
  throw MaxItersExceeded(opts.max_iters, last_changed);
}

template IterationReport<ExtendedNonNeg> kleene_iterate(const Recurrence&, Table<ExtendedNonNeg>,
                                                        const IterateOptions&);
template IterationReport<Interval> kleene_iterate(const Recurrence&, Table<Interval>, const IterateOptions&);

IterationReport<Interval> kleene_iterate(const Recurrence& r, const ComplexityFunction& x0, std::uint64_t N,
                                         const IterateOptions& opts) {
  return kleene_iterate<Interval>(r, x0.tabulate(N), opts);
}

namespace {

HypothesisVerdict from_order(std::string name, const OrderVerdict& v) {
  HypothesisVerdict h;
  h.name = std::move(name);
  h.status = v.status;
  h.n = v.n;
  h.lhs = v.lhs;
  h.rhs = v.rhs;
  h.evidence = "pointwise on [1," + std::to_string(v.checked_to) + "]";
  return h;
}

HypothesisVerdict anchoring(const std::string& name, const Recurrence& r, const Table<Interval>& t) {
  HypothesisVerdict h;
  h.name = name;
  h.evidence = "base values and off-grid values on [1," + std::to_string(t.size() - 1) + "]";
  for (std::uint64_t n = 1; n < t.size(); ++n) {
    if (!r.is_anchor(n)) continue;
    Interval want(r.anchor_value(n));
    if (!(t[n] == want)) {
      h.status = Status::Refuted;
      h.n = n;
      h.lhs = t[n];
      h.rhs = want;
      return h;
    }
  }
  return h;
}

/// Structural evidence (nonnegative coefficients) plus sampled pairs a ≤ b.
HypothesisVerdict monotone_audit(const Recurrence& r, std::uint64_t N, const CertifyConfig& cfg) {
  HypothesisVerdict h;
  h.name = "Phi monotone";
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<long> bump(0, 16);
  for (std::size_t s = 0; s < cfg.monotone_samples; ++s) {
    Table<Interval> a = rec::random_member(r, N, rng).tabulate(N);
    Table<Interval> b = a;
    for (std::uint64_t n = 1; n <= N; ++n) {
      if (!r.is_anchor(n)) b[n] += Interval(mpq_class(bump(rng), 4));
    }
    auto v = leq_prefix(rec::phi_step_serial(r, a), rec::phi_step_serial(r, b));
    if (v.status != Status::Certified) {
      h.status = v.status;
      h.n = v.n;
      h.lhs = v.lhs;
      h.rhs = v.rhs;
      h.evidence = "sampled pair " + std::to_string(s) + " with a <= b";
      return h;
    }
  }
  h.evidence = "structural: nonnegative coefficients and weights; sampled: " + std::to_string(cfg.monotone_samples) +
               " seeded pairs a <= b (seed " + std::to_string(cfg.seed) + ")";
  return h;
}

}  // namespace

BoundCertificate certify_bounds(const Recurrence& r0, const ComplexityFunction& g, const ComplexityFunction& f,
                                const CertifyConfig& cfg) {
  if (cfg.N == 0) throw std::invalid_argument("prefix must be at least 1");
  std::optional<Recurrence> holder;
  const Recurrence& r = prepared(r0, cfg.N, holder);
  const std::uint64_t N = cfg.N;

  BoundCertificate c;
  c.recurrence = r.describe();
  c.lower_name = g.name();
  c.upper_name = f.name();
  c.N = N;
  c.continuity =
      "structural: Phi reads only smaller arguments with nonnegative coefficients, so it preserves suprema of "
      "increasing sequences; checked: Phi(limit) = limit on the prefix";

  c.g_values = g.tabulate(N);
  c.f_values = f.tabulate(N);
  Table<Interval> phi_g = rec::phi_step_parallel(r, c.g_values);
  Table<Interval> phi_f = rec::phi_step_parallel(r, c.f_values);

  c.audit.push_back(anchoring("g anchored", r, c.g_values));
  c.audit.push_back(anchoring("f anchored", r, c.f_values));
  c.audit.push_back(monotone_audit(r, N, cfg));
  c.audit.push_back(from_order("g <= Phi(g)", leq_prefix(c.g_values, phi_g)));
  c.audit.push_back(from_order("Phi(f) <= f", leq_prefix(phi_f, c.f_values)));
  c.audit.push_back(from_order("g <= f", leq_prefix(c.g_values, c.f_values)));

  auto oracle = rec::oracle_solve(r, N);
  c.oracle.assign(oracle.begin(), oracle.end());

  bool unknown = false;
  for (const auto& h : c.audit) {
    if (h.status == Status::Refuted && !c.refuted) c.refuted = h;
    if (h.status == Status::Unknown) unknown = true;
  }
  if (c.refuted) {
    c.verdict = Status::Refuted;
    return c;
  }
  if (unknown) {
    c.verdict = Status::Unknown;
    c.note = "a hypothesis is undecided at the current precision";
    return c;
  }

  try {
    c.iteration = kleene_iterate<Interval>(r, c.g_values, IterateOptions{cfg.max_iters, false, true});
  } catch (const MaxItersExceeded& e) {
    c.verdict = Status::Unknown;
    c.note = e.what();
    return c;
  }
  const Table<Interval>& limit = c.iteration->limit_prefix;
  c.oracle_agreement = limit == c.oracle;
  c.fixed_point_verified = rec::phi_step_serial(r, limit) == limit;

  c.sandwich = Tri::True;
  for (std::uint64_t n = 1; n <= N; ++n) {
    for (Tri t : {certainly_leq(c.g_values[n], limit[n]), certainly_leq(limit[n], c.f_values[n])}) {
      if (t == Tri::False) c.sandwich = Tri::False;
      if (t == Tri::Unknown && c.sandwich == Tri::True) c.sandwich = Tri::Unknown;
    }
  }

  Domain domain = [&r](std::uint64_t n) { return r.in_domain(n); };
  c.lower = in_Omega(limit, c.g_values, cfg.grid, domain);
  c.upper = in_O(limit, c.f_values, cfg.grid, domain);
  c.certificates_rescanned = verify_certificate(*c.lower, limit, c.g_values, domain) &&
                             verify_certificate(*c.upper, limit, c.f_values, domain);

  if (!c.oracle_agreement || !c.fixed_point_verified || c.sandwich == Tri::False || !c.certificates_rescanned) {
    c.verdict = Status::Refuted;
    c.note = "post-check failed: engine inconsistency";
  } else if (c.lower->status == Status::Certified && c.upper->status == Status::Certified &&
             c.sandwich == Tri::True) {
    c.verdict = Status::Certified;
  } else if (c.lower->status == Status::Refuted || c.upper->status == Status::Refuted) {
    c.verdict = Status::Refuted;
    c.note = "no grid constant certifies a bound";
  } else {
    c.verdict = Status::Unknown;
  }
  return c;
}

BoundCertificate audit_theorem_R(const Recurrence& r, const ComplexityFunction& f, const CertifyConfig& cfg) {
  if (!std::holds_alternative<rec::Probabilistic>(r.family())) {
    throw std::invalid_argument("audit_theorem_R expects the probabilistic family");
  }
  return certify_bounds(r, rec::bottom_element(r), f, cfg);
}

namespace {

std::string cert_line(const AsymptoticCertificate& a) {
  std::ostringstream os;
  os << to_string(a.kind) << ": " << to_string(a.status);
  if (a.status == Status::Certified) {
    os << " c=" << a.c.get_str() << " n0=" << a.n0 << " checked_to=" << a.checked_to;
  } else if (a.witness) {
    os << " witness n=" << *a.witness;
  }
  os << " grid " << a.grid;
  return os.str();
}

}  // namespace

std::string render_text(const BoundCertificate& c) {
  std::ostringstream os;
  os << "recurrence: " << c.recurrence << "\n";
  os << "lower candidate g: " << c.lower_name << "\n";
  os << "upper candidate f: " << c.upper_name << "\n";
  os << "prefix N: " << c.N << "\n";
  os << "hypotheses:\n";
  for (const auto& h : c.audit) {
    os << "  " << h.name << ": " << to_string(h.status);
    if (h.status != Status::Certified && h.n) {
      os << " at n=" << *h.n << " (" << h.lhs->str() << " vs " << h.rhs->str() << ")";
    }
    os << " [" << h.evidence << "]\n";
  }
  os << "orbital continuity at g: " << c.continuity << "\n";
  if (c.iteration) {
    os << "iteration: stabilized at m=" << c.iteration->stabilized_at << ", increasing "
       << to_string(c.iteration->increasing) << "\n";
    os << "oracle agreement: " << (c.oracle_agreement ? "yes" : "no") << "\n";
    os << "fixed point on prefix: " << (c.fixed_point_verified ? "yes" : "no") << "\n";
    os << "sandwich g <= limit <= f: " << to_string(c.sandwich) << "\n";
  }
  if (c.lower) os << "lower bound " << cert_line(*c.lower) << "\n";
  if (c.upper) os << "upper bound " << cert_line(*c.upper) << "\n";
  if (c.lower && c.upper) os << "rescan: " << (c.certificates_rescanned ? "passed" : "FAILED") << "\n";
  os << "verdict: " << to_string(c.verdict);
  if (c.refuted) os << " (" << c.refuted->name << " at n=" << (c.refuted->n ? std::to_string(*c.refuted->n) : "?") << ")";
  if (!c.note.empty()) os << " - " << c.note;
  os << "\n";
  return os.str();
}

std::string render_table(const BoundCertificate& c) {
  std::ostringstream os;
  os << "n,g(n),limit(n),f(n),oracle(n)\n";
  for (std::uint64_t n = 1; n <= c.N; ++n) {
    os << n << "," << c.g_values[n].fraction_str() << ",";
    os << (c.iteration ? c.iteration->limit_prefix[n].fraction_str() : "") << ",";
    os << c.f_values[n].fraction_str() << "," << c.oracle[n].fraction_str() << "\n";
  }
  return os.str();
}

std::string render_text(const IterationReport<Interval>& it) {
  std::ostringstream os;
  if (it.stabilized_at == 0) {
    os << "stabilized at iteration 0: x0 is a fixed point on [1," << it.N << "]\n";
    return os.str();
  }
  os << "prefix N: " << it.N << "\n";
  os << "stabilized at iteration " << it.stabilized_at << "\n";
  os << "increasing: " << to_string(it.increasing);
  if (it.undecided) os << " (first open comparison m=" << it.undecided->first << " n=" << it.undecided->second << ")";
  os << "\n";
  for (const auto& s : it.steps) {
    if (s.first_changed == 0) continue;
    os << "  step " << s.iteration << ": " << s.changed << " points changed, first n=" << s.first_changed << "\n";
  }
  return os.str();
}

std::string render_table(const IterationReport<Interval>& it, const Table<Interval>& x0) {
  std::ostringstream os;
  os << "n,x0(n),limit(n)\n";
  for (std::uint64_t n = 1; n <= it.N; ++n) {
    os << n << "," << x0[n].fraction_str() << "," << it.limit_prefix[n].fraction_str() << "\n";
  }
  return os.str();
}

}  // namespace kb::analysis
