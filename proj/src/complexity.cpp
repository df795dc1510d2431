#include "kb/complexity.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace kb {

struct ComplexityFunction::State {
  std::string name;
  Evaluator eval;
  GrowthWitness witness;
  std::mutex mu;
  std::unordered_map<std::uint64_t, Interval> memo;
};

std::string describe(const GrowthWitness& w) {
  if (const auto* e = std::get_if<ExponentialWitness>(&w)) {
    return "f(n) <= 2^n for n >= " + std::to_string(e->from);
  }
  if (const auto* s = std::get_if<StructuralWitness>(&w)) return "no pointwise bound (" + s->reason + ")";
  const auto& b = std::get<BoundedWitness>(w);
  return "f(n) <= " + b.bound.get_str() + " for n >= " + std::to_string(b.from);
}

ComplexityFunction::ComplexityFunction(std::string name, Evaluator eval, GrowthWitness witness)
    : state_(std::make_shared<State>()) {
  state_->name = std::move(name);
  state_->eval = std::move(eval);
  state_->witness = std::move(witness);
}

ComplexityFunction ComplexityFunction::from_expr(const Expr& e, unsigned precision_bits,
                                                 GrowthWitness witness, ExprWarnings* warnings) {
  return ComplexityFunction(
      e.text(), [e, precision_bits, warnings](std::uint64_t n) { return e.eval(EvalEnv{n, 0, precision_bits, warnings}); },
      std::move(witness));
}

ComplexityFunction ComplexityFunction::constant(ExtendedNonNeg v) {
  GrowthWitness w = ExponentialWitness{};
  if (!v.is_infinite()) w = BoundedWitness{v.value(), 1};
  return ComplexityFunction(v.str(), [v](std::uint64_t) { return Interval(v); }, w);
}

ComplexityFunction ComplexityFunction::from_table(std::string name, std::vector<Interval> values,
                                                  Interval beyond, GrowthWitness witness) {
  auto table = std::make_shared<const std::vector<Interval>>(std::move(values));
  return ComplexityFunction(
      std::move(name),
      [table, beyond](std::uint64_t n) { return n < table->size() ? (*table)[n] : beyond; },
      std::move(witness));
}

namespace {

void check_witness(const GrowthWitness& w, std::uint64_t n, const Interval& v) {
  if (const auto* e = std::get_if<ExponentialWitness>(&w)) {
    if (n < e->from || v.lo().is_infinite()) return;
    if (v.lo().value() > pow2(static_cast<long>(n))) {
      throw WitnessViolated(n, "growth witness f(n) <= 2^n violated at n=" + std::to_string(n));
    }
    return;
  }
  if (std::holds_alternative<StructuralWitness>(w)) return;
  const auto& b = std::get<BoundedWitness>(w);
  if (n >= b.from && v.lo() > ExtendedNonNeg(b.bound)) {
    throw WitnessViolated(n, "growth witness f(n) <= " + b.bound.get_str() + " violated at n=" + std::to_string(n));
  }
}

}  // namespace

Interval ComplexityFunction::operator()(std::uint64_t n) const {
  if (n == 0) throw DomainError("complexity functions are defined on positive integers");
  {
    std::lock_guard<std::mutex> lock(state_->mu);
    auto it = state_->memo.find(n);
    if (it != state_->memo.end()) return it->second;
  }
  Interval v = state_->eval(n);
  check_witness(state_->witness, n, v);
  std::lock_guard<std::mutex> lock(state_->mu);
  return state_->memo.emplace(n, std::move(v)).first->second;
}

std::vector<Interval> ComplexityFunction::tabulate(std::uint64_t N) const {
  std::vector<Interval> t(N + 1);
  for (std::uint64_t n = 1; n <= N; ++n) t[n] = (*this)(n);
  return t;
}

const std::string& ComplexityFunction::name() const { return state_->name; }
const GrowthWitness& ComplexityFunction::witness() const { return state_->witness; }

namespace {

ExtendedNonNeg reciprocal_at(const ExtendedNonNeg& v, std::uint64_t n) {
  if (v.is_zero()) throw ZeroValueReciprocal(n);
  return v.reciprocal();
}

/// 2^n · [lo, hi] of max(1/g(n) − 1/f(n), 0).
std::pair<mpq_class, mpq_class> term(const Interval& f, const Interval& g, std::uint64_t n) {
  ExtendedNonNeg lo = monus(reciprocal_at(g.hi(), n), reciprocal_at(f.lo(), n));
  ExtendedNonNeg hi = monus(reciprocal_at(g.lo(), n), reciprocal_at(f.hi(), n));
  return {lo.value(), hi.value()};
}

}  // namespace

Interval d_C_prefix(const std::vector<Interval>& f, const std::vector<Interval>& g) {
  if (f.size() != g.size() || f.size() < 2) throw std::invalid_argument("tables must cover [1, N]");
  mpq_class lo = 0;
  mpq_class hi = 0;
  for (std::uint64_t n = 1; n < f.size(); ++n) {
    auto [tl, th] = term(f[n], g[n], n);
    if (sgn(tl) == 0 && sgn(th) == 0) continue;
    mpq_class w = pow2(-static_cast<long>(n));
    lo += w * tl;
    hi += w * th;
  }
  return Interval(ExtendedNonNeg(lo), ExtendedNonNeg(hi));
}

Interval d_C_prefix(const ComplexityFunction& f, const ComplexityFunction& g, std::uint64_t N) {
  if (N == 0) throw std::invalid_argument("truncation depth must be at least 1");
  return d_C_prefix(f.tabulate(N), g.tabulate(N));
}

Interval d_C(const ComplexityFunction& f, const ComplexityFunction& g, std::uint64_t N,
             const mpq_class& tail_floor) {
  if (sgn(tail_floor) <= 0) throw std::invalid_argument("tail_floor must be positive");
  Interval partial = d_C_prefix(f, g, N);
  for (std::uint64_t n = N / 2 + 1; n <= N; ++n) {
    if (g(n).lo() < ExtendedNonNeg(tail_floor)) {
      throw TailFloorViolated(n, "g(" + std::to_string(n) + ") is below the declared tail floor " +
                                     tail_floor.get_str());
    }
  }
  mpq_class tail = pow2(-static_cast<long>(N)) / tail_floor;
  return Interval(partial.lo(), partial.hi() + ExtendedNonNeg(tail));
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Certified: return "certified";
    case Status::Refuted: return "refuted";
    case Status::Unknown: return "unknown";
  }
  return "?";
}

OrderVerdict leq_prefix(const std::vector<Interval>& f, const std::vector<Interval>& g) {
  if (f.size() != g.size() || f.size() < 2) throw std::invalid_argument("tables must cover [1, N]");
  OrderVerdict v;
  v.checked_to = f.size() - 1;
  std::optional<std::uint64_t> undecided;
  for (std::uint64_t n = 1; n < f.size(); ++n) {
    Tri t = certainly_leq(f[n], g[n]);
    if (t == Tri::False) {
      v.status = Status::Refuted;
      v.n = n;
      v.lhs = f[n];
      v.rhs = g[n];
      return v;
    }
    if (t == Tri::Unknown && !undecided) undecided = n;
  }
  if (undecided) {
    v.status = Status::Unknown;
    v.n = undecided;
    v.lhs = f[*undecided];
    v.rhs = g[*undecided];
  }
  return v;
}

OrderVerdict leq_prefix(const ComplexityFunction& f, const ComplexityFunction& g, std::uint64_t N) {
  if (N == 0) throw std::invalid_argument("prefix must be at least 1");
  return leq_prefix(f.tabulate(N), g.tabulate(N));
}

SearchGrid SearchGrid::standard() {
  SearchGrid g;
  for (long e = -4; e <= 8; ++e) g.c.push_back(pow2(e));
  for (std::uint64_t n0 = 1; n0 <= 16; ++n0) g.n0.push_back(n0);
  return g;
}

std::string SearchGrid::describe() const {
  std::ostringstream os;
  os << "c in {";
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i].get_str();
  os << "}, n0 in {";
  for (std::size_t i = 0; i < n0.size(); ++i) os << (i ? "," : "") << n0[i];
  os << "}";
  return os.str();
}

Domain powers_of(std::uint64_t b) {
  return [b](std::uint64_t n) {
    if (n < b) return false;
    while (n % b == 0) n /= b;
    return n == 1;
  };
}

const char* to_string(AsymptoticCertificate::Kind k) {
  return k == AsymptoticCertificate::Kind::O ? "O" : "Omega";
}

namespace {

using Kind = AsymptoticCertificate::Kind;

Tri inequality_at(Kind kind, const mpq_class& c, const Interval& f, const Interval& g) {
  return kind == Kind::O ? certainly_leq(f, scale(c, g)) : certainly_leq(scale(c, g), f);
}

/// Ratio evidence: f.lo / g.hi for O, g.lo / f.hi for Ω.
ExtendedNonNeg ratio(Kind kind, const Interval& f, const Interval& g) {
  const ExtendedNonNeg& num = kind == Kind::O ? f.lo() : g.lo();
  const ExtendedNonNeg& den = kind == Kind::O ? g.hi() : f.hi();
  if (num.is_zero()) return ExtendedNonNeg(0);
  if (num.is_infinite()) return den.is_infinite() ? ExtendedNonNeg(1) : ExtendedNonNeg::infinity();
  if (den.is_infinite()) return ExtendedNonNeg(0);
  if (den.is_zero()) return ExtendedNonNeg::infinity();
  return ExtendedNonNeg(num.value() / den.value());
}

AsymptoticCertificate search(Kind kind, const std::vector<Interval>& f, const std::vector<Interval>& g,
                             const SearchGrid& grid, const Domain& domain) {
  if (grid.c.empty() || grid.n0.empty()) throw std::invalid_argument("EmptySearchGrid");
  if (f.size() != g.size() || f.size() < 2) throw std::invalid_argument("tables must cover [1, N]");
  for (const auto& c : grid.c) {
    if (sgn(c) <= 0) throw std::invalid_argument("grid constants must be positive");
  }
  const std::uint64_t N = f.size() - 1;
  AsymptoticCertificate cert;
  cert.kind = kind;
  cert.checked_to = N;
  cert.grid = grid.describe();

  std::vector<std::uint64_t> points;
  for (std::uint64_t n = 1; n <= N; ++n) {
    if (!domain || domain(n)) points.push_back(n);
  }

  // Normalized thresholds: index into `points` of the first point ≥ n0.
  std::vector<std::uint64_t> n0s(grid.n0);
  std::sort(n0s.begin(), n0s.end());
  std::vector<std::size_t> starts;
  for (auto n0 : n0s) {
    auto it = std::lower_bound(points.begin(), points.end(), n0);
    if (it == points.end()) continue;
    auto idx = static_cast<std::size_t>(it - points.begin());
    if (starts.empty() || starts.back() != idx) starts.push_back(idx);
  }

  std::vector<mpq_class> cs(grid.c);
  std::sort(cs.begin(), cs.end());
  if (kind == Kind::Omega) std::reverse(cs.begin(), cs.end());

  const std::size_t P = points.size();
  // For each c: suffix "has a refutation" and "first undecided point".
  std::vector<std::vector<bool>> refuted_from(cs.size(), std::vector<bool>(P + 1, false));
  std::vector<std::vector<std::size_t>> undecided_from(cs.size(), std::vector<std::size_t>(P + 1, P));
  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    for (std::size_t k = P; k-- > 0;) {
      std::uint64_t n = points[k];
      Tri t = inequality_at(kind, cs[ci], f[n], g[n]);
      refuted_from[ci][k] = refuted_from[ci][k + 1] || t == Tri::False;
      undecided_from[ci][k] = t == Tri::Unknown ? k : undecided_from[ci][k + 1];
    }
  }

  std::optional<std::uint64_t> first_unknown;
  for (std::size_t s : starts) {
    for (std::size_t ci = 0; ci < cs.size(); ++ci) {
      if (refuted_from[ci][s]) continue;
      if (undecided_from[ci][s] < P) {
        if (!first_unknown) first_unknown = points[undecided_from[ci][s]];
        continue;
      }
      cert.status = Status::Certified;
      cert.c = cs[ci];
      cert.n0 = points[s];
      return cert;
    }
  }
  if (first_unknown) {
    cert.status = Status::Unknown;
    cert.witness = first_unknown;
    return cert;
  }
  cert.status = Status::Refuted;
  std::optional<ExtendedNonNeg> best;
  const std::uint64_t from = n0s.front();
  for (auto n : points) {
    if (n < from) continue;
    ExtendedNonNeg r = ratio(kind, f[n], g[n]);
    if (!best || r > *best) {
      best = r;
      cert.witness = n;
    }
  }
  return cert;
}

}  // namespace

AsymptoticCertificate in_O(const std::vector<Interval>& f, const std::vector<Interval>& g, const SearchGrid& grid,
                           const Domain& domain) {
  return search(Kind::O, f, g, grid, domain);
}

AsymptoticCertificate in_Omega(const std::vector<Interval>& f, const std::vector<Interval>& g,
                               const SearchGrid& grid, const Domain& domain) {
  return search(Kind::Omega, f, g, grid, domain);
}

AsymptoticCertificate in_O(const ComplexityFunction& f, const ComplexityFunction& g, const SearchGrid& grid,
                           std::uint64_t N, const Domain& domain) {
  return in_O(f.tabulate(N), g.tabulate(N), grid, domain);
}

AsymptoticCertificate in_Omega(const ComplexityFunction& f, const ComplexityFunction& g,
                               const SearchGrid& grid, std::uint64_t N, const Domain& domain) {
  return in_Omega(f.tabulate(N), g.tabulate(N), grid, domain);
}

bool verify_certificate(const AsymptoticCertificate& cert, const std::vector<Interval>& f,
                        const std::vector<Interval>& g, const Domain& domain) {
  if (cert.status != Status::Certified) return true;
  if (cert.checked_to >= f.size() || cert.checked_to >= g.size()) return false;
  for (std::uint64_t n = cert.n0; n <= cert.checked_to; ++n) {
    if (domain && !domain(n)) continue;
    Interval cg = scale(cert.c, g[n]);
    bool ok = cert.kind == Kind::O ? f[n].hi() <= cg.lo() : cg.hi() <= f[n].lo();
    if (!ok) return false;
  }
  return true;
}

SeriesWeight series_weight(const ComplexityFunction& f, std::uint64_t N) {
  if (N == 0) throw std::invalid_argument("truncation depth must be at least 1");
  SeriesWeight w;
  Interval sum(0);
  for (std::uint64_t n = 1; n <= N; ++n) {
    sum += scale(pow2(-static_cast<long>(n)), f(n));
  }
  w.partial = sum;
  if (const auto* b = std::get_if<BoundedWitness>(&f.witness()); b && b->from <= N + 1) {
    w.tail_bound = b->bound * pow2(-static_cast<long>(N));
  } else {
    w.upper_unbounded = true;
  }
  return w;
}

}  // namespace kb
