#include "kb/recurrence.hpp"

#include <algorithm>
#include <exception>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kb::rec {

WeightSumExceeded::WeightSumExceeded(std::uint64_t n, mpq_class sum, mpq_class K)
    : DomainError("weight sum " + sum.get_str() + " exceeds K=" + K.get_str() + " at n=" + std::to_string(n)),
      n_(n),
      sum_(std::move(sum)) {}

Driver Driver::from_expr(const Expr& e) {
  if (e.uses_i()) throw InvalidSpec("driver h may only use n");
  return {e.text(), [e](std::uint64_t n) { return eval_exact(e, n); }};
}

WeightFn WeightFn::from_expr(const Expr& e) {
  return {e.text(), [e](std::uint64_t i, std::uint64_t n) { return eval_exact(e, n, i); }, e.uses_i()};
}

namespace {

std::string join(const std::vector<mpq_class>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s;
}

bool is_power(std::uint64_t n, std::uint64_t b) {
  if (n < b) return false;
  while (n % b == 0) n /= b;
  return n == 1;
}

void validate(const Family& f) {
  if (const auto* dc = std::get_if<DivideAndConquer>(&f)) {
    if (sgn(dc->c) <= 0) throw InvalidSpec("divide and conquer: c must be positive");
    if (dc->a < 2 || dc->b < 2) throw InvalidSpec("divide and conquer: a and b must exceed 1");
    if (!dc->h.fn) throw InvalidSpec("divide and conquer: missing h");
    return;
  }
  if (const auto* lin = std::get_if<Linear>(&f)) {
    if (lin->base.empty()) throw InvalidSpec("linear: k must be positive");
    if (lin->coeffs.size() != lin->base.size()) throw InvalidSpec("linear: base and coeffs lengths differ");
    for (const auto& c : lin->base) {
      if (sgn(c) <= 0) throw InvalidSpec("linear: base values must be positive");
    }
    for (const auto& a : lin->coeffs) {
      if (a < 1) throw InvalidSpec("linear: coefficients must be at least 1");
    }
    if (!lin->h.fn) throw InvalidSpec("linear: missing h");
    return;
  }
  const auto& p = std::get<Probabilistic>(f);
  if (p.k < 2) throw InvalidSpec("probabilistic: k must be at least 2");
  if (p.base.size() != p.k - 1) throw InvalidSpec("probabilistic: expected k-1 base values");
  for (const auto& c : p.base) {
    if (sgn(c) < 0) throw InvalidSpec("probabilistic: base values must be nonnegative");
  }
  if (sgn(p.K) <= 0) throw InvalidSpec("probabilistic: K must be positive");
  if (!p.h.fn || !p.weights.fn) throw InvalidSpec("probabilistic: missing h or weights");
}

}  // namespace

Recurrence::Recurrence(Family family) : family_(std::move(family)) { validate(family_); }

std::string Recurrence::tag() const {
  if (std::holds_alternative<DivideAndConquer>(family_)) return "dc";
  if (std::holds_alternative<Linear>(family_)) return "linear";
  return "prob";
}

std::string Recurrence::describe() const {
  std::ostringstream os;
  if (const auto* dc = std::get_if<DivideAndConquer>(&family_)) {
    os << "dc a=" << dc->a << " b=" << dc->b << " c=" << dc->c.get_str() << " h=" << dc->h.text;
  } else if (const auto* lin = std::get_if<Linear>(&family_)) {
    os << "linear k=" << lin->k() << " base=[" << join(lin->base) << "] coeffs=[" << join(lin->coeffs)
       << "] h=" << lin->h.text;
  } else {
    const auto& p = std::get<Probabilistic>(family_);
    os << "prob k=" << p.k << " base=[" << join(p.base) << "] K=" << p.K.get_str() << " weights=" << p.weights.text
       << " h=" << p.h.text;
  }
  return os.str();
}

void Recurrence::prepare(std::uint64_t N) {
  if (N <= prepared_) return;
  const Driver* h = nullptr;
  std::visit([&](const auto& fam) { h = &fam.h; }, family_);
  h_cache_.resize(N + 1);
  for (std::uint64_t n = std::max<std::uint64_t>(prepared_ + 1, 1); n <= N; ++n) {
    if (is_anchor(n)) continue;
    h_cache_[n] = (*h)(n);
    if (sgn(h_cache_[n]) < 0) throw DomainError("h(" + std::to_string(n) + ") is negative");
  }
  if (const auto* p = std::get_if<Probabilistic>(&family_)) {
    weight_sum_cache_.resize(N + 1);
    if (p->weights.depends_on_i) {
      weight_offset_.resize(N + 2);
      for (std::uint64_t n = prepared_ + 1; n <= N; ++n) {
        weight_offset_[n] = weight_cache_.size();
        if (n < p->k) continue;
        mpq_class sum = 0;
        for (std::uint64_t i = 1; i < n; ++i) {
          mpq_class v = p->weights.fn(i, n);
          if (sgn(v) < 0) throw DomainError("negative weight at i=" + std::to_string(i) + " n=" + std::to_string(n));
          sum += v;
          weight_cache_.push_back(std::move(v));
        }
        if (sum > p->K) throw WeightSumExceeded(n, sum, p->K);
        weight_sum_cache_[n] = sum;
      }
      weight_offset_[N + 1] = weight_cache_.size();
    } else {
      weight_cache_.resize(N + 1);
      for (std::uint64_t n = prepared_ + 1; n <= N; ++n) {
        if (n < p->k) continue;
        mpq_class v = p->weights.fn(0, n);
        if (sgn(v) < 0) throw DomainError("negative weight at n=" + std::to_string(n));
        mpq_class sum = v * static_cast<unsigned long>(n - 1);
        if (sum > p->K) throw WeightSumExceeded(n, sum, p->K);
        weight_cache_[n] = v;
        weight_sum_cache_[n] = sum;
      }
    }
  }
  prepared_ = N;
}

mpq_class Recurrence::h(std::uint64_t n) const {
  if (n <= prepared_ && !is_anchor(n)) return h_cache_[n];
  mpq_class v;
  std::visit([&](const auto& fam) { v = fam.h(n); }, family_);
  if (sgn(v) < 0) throw DomainError("h(" + std::to_string(n) + ") is negative");
  return v;
}

bool Recurrence::weights_depend_on_i() const {
  const auto* p = std::get_if<Probabilistic>(&family_);
  return p && p->weights.depends_on_i;
}

mpq_class Recurrence::weight(std::uint64_t i, std::uint64_t n) const {
  const auto* p = std::get_if<Probabilistic>(&family_);
  if (!p) throw std::logic_error("weights exist only for the probabilistic family");
  if (n <= prepared_ && n >= p->k) {
    if (p->weights.depends_on_i) return weight_cache_[weight_offset_[n] + (i - 1)];
    return weight_cache_[n];
  }
  mpq_class v = p->weights.fn(i, n);
  if (sgn(v) < 0) throw DomainError("negative weight at i=" + std::to_string(i) + " n=" + std::to_string(n));
  return v;
}

mpq_class Recurrence::weight_sum(std::uint64_t n) const {
  const auto* p = std::get_if<Probabilistic>(&family_);
  if (!p) throw std::logic_error("weights exist only for the probabilistic family");
  if (n < p->k) return 0;
  if (n <= prepared_) return weight_sum_cache_[n];
  mpq_class sum = 0;
  for (std::uint64_t i = 1; i < n; ++i) sum += weight(i, n);
  if (sum > p->K) throw WeightSumExceeded(n, sum, p->K);
  return sum;
}

bool Recurrence::is_anchor(std::uint64_t n) const {
  if (const auto* dc = std::get_if<DivideAndConquer>(&family_)) return n == 1 || !is_power(n, dc->b);
  if (const auto* lin = std::get_if<Linear>(&family_)) return n <= lin->k();
  return n < std::get<Probabilistic>(family_).k;
}

ExtendedNonNeg Recurrence::anchor_value(std::uint64_t n) const {
  if (const auto* dc = std::get_if<DivideAndConquer>(&family_)) {
    return n == 1 ? ExtendedNonNeg(dc->c) : ExtendedNonNeg::infinity();
  }
  if (const auto* lin = std::get_if<Linear>(&family_)) return lin->base.at(n - 1);
  return std::get<Probabilistic>(family_).base.at(n - 1);
}

bool Recurrence::in_domain(std::uint64_t n) const {
  if (const auto* dc = std::get_if<DivideAndConquer>(&family_)) return n == 1 || is_power(n, dc->b);
  return n >= 1;
}

std::optional<mpq_class> Recurrence::contraction_constant() const {
  if (std::holds_alternative<DivideAndConquer>(family_)) return mpq_class(1, 2);
  if (const auto* lin = std::get_if<Linear>(&family_)) {
    mpq_class worst = 0;
    for (const auto& a : lin->coeffs) worst = std::max(worst, mpq_class(1 / a));
    const long k = static_cast<long>(lin->k());
    return worst * (1 - pow2(-k));
  }
  return std::nullopt;
}

ComplexityFunction apply(const Recurrence& r, const ComplexityFunction& f) {
  auto shared = std::make_shared<const Recurrence>(r);
  return ComplexityFunction(
      "Phi(" + f.name() + ")",
      [shared, f](std::uint64_t n) { return shared->point_value<Interval>(n, [&f](std::uint64_t i) { return f(i); }); },
      StructuralWitness{"image under the functional of " + r.tag()});
}

template <class V>
Table<V> phi_step_serial(const Recurrence& r, const Table<V>& x) {
  Table<V> out(x.size());
  for (std::uint64_t n = 1; n < x.size(); ++n) {
    out[n] = r.point_value<V>(n, [&x](std::uint64_t i) -> const V& { return x[i]; });
  }
  return out;
}

template <class V>
Table<V> phi_step_parallel(const Recurrence& r, const Table<V>& x, std::uint64_t unchanged_before) {
  const std::uint64_t N = x.size() - 1;
  Table<V> out(x.size());
  const std::uint64_t keep = std::min(unchanged_before, N);
  for (std::uint64_t n = 1; n <= keep; ++n) out[n] = x[n];

  const bool prefix_path = std::holds_alternative<Probabilistic>(r.family()) && !r.weights_depend_on_i();
  Table<V> prefix;
  if (prefix_path) {
    prefix.resize(x.size());
    prefix[0] = from_exact<V>(ExtendedNonNeg(0));
    for (std::uint64_t n = 1; n <= N; ++n) {
      prefix[n] = prefix[n - 1];
      prefix[n] += x[n];
    }
  }

  std::exception_ptr error;
  const auto first = static_cast<std::int64_t>(keep + 1);
  const auto last = static_cast<std::int64_t>(N);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t sn = first; sn <= last; ++sn) {
    const auto n = static_cast<std::uint64_t>(sn);
    try {
      if (prefix_path && !r.is_anchor(n)) {
        V v = scale(r.weight(0, n), prefix[n - 1]);
        v += from_exact<V>(ExtendedNonNeg(r.h(n)));
        out[n] = std::move(v);
      } else {
        out[n] = r.point_value<V>(n, [&x](std::uint64_t i) -> const V& { return x[i]; });
      }
    } catch (...) {
#pragma omp critical(kb_phi_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

template Table<ExtendedNonNeg> phi_step_serial(const Recurrence&, const Table<ExtendedNonNeg>&);
template Table<Interval> phi_step_serial(const Recurrence&, const Table<Interval>&);
template Table<ExtendedNonNeg> phi_step_parallel(const Recurrence&, const Table<ExtendedNonNeg>&, std::uint64_t);
template Table<Interval> phi_step_parallel(const Recurrence&, const Table<Interval>&, std::uint64_t);

std::vector<ExtendedNonNeg> oracle_solve(const Recurrence& r, std::uint64_t N) {
  if (N == 0) throw std::invalid_argument("N must be at least 1");
  std::vector<ExtendedNonNeg> T(N + 1, ExtendedNonNeg::infinity());
  T[0] = ExtendedNonNeg(0);
  if (const auto* dc = std::get_if<DivideAndConquer>(&r.family())) {
    std::vector<mpq_class> S{dc->c};
    T[1] = ExtendedNonNeg(dc->c);
    for (std::uint64_t p = dc->b; p <= N; p *= dc->b) {
      mpq_class next = mpq_class(static_cast<unsigned long>(dc->a)) * S.back() + dc->h(p);
      T[p] = ExtendedNonNeg(next);
      S.push_back(std::move(next));
      if (p > N / dc->b) break;
    }
    return T;
  }
  std::vector<mpq_class> v(N + 1);
  if (const auto* lin = std::get_if<Linear>(&r.family())) {
    for (std::uint64_t n = 1; n <= N; ++n) {
      if (n <= lin->k()) {
        v[n] = lin->base[n - 1];
      } else {
        v[n] = lin->h(n);
        for (std::size_t i = 1; i <= lin->k(); ++i) v[n] += lin->coeffs[i - 1] * v[n - i];
      }
      T[n] = ExtendedNonNeg(v[n]);
    }
    return T;
  }
  const auto& p = std::get<Probabilistic>(r.family());
  for (std::uint64_t n = 1; n <= N; ++n) {
    if (n < p.k) {
      v[n] = p.base[n - 1];
    } else {
      v[n] = p.h(n);
      mpq_class sum = 0;
      for (std::uint64_t i = 1; i < n; ++i) {
        mpq_class w = p.weights.fn(i, n);
        sum += w;
        v[n] += w * v[i];
      }
      if (sum > p.K) throw WeightSumExceeded(n, sum, p.K);
    }
    T[n] = ExtendedNonNeg(v[n]);
  }
  return T;
}

namespace {

std::uint64_t checked_power(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t k = 0; k < e; ++k) {
    if (r > UINT64_MAX / b) throw std::overflow_error("index b^(m-1) overflows");
    r *= b;
  }
  return r;
}

}  // namespace

std::uint64_t LinearTransform::to_dc_index(std::uint64_t m) const {
  if (m == 0) throw std::invalid_argument("linear indices start at 1");
  return checked_power(b, m - 1);
}

std::optional<std::uint64_t> LinearTransform::to_linear_index(std::uint64_t n) const {
  std::uint64_t m = 1;
  while (n > 1) {
    if (n % b != 0) return std::nullopt;
    n /= b;
    ++m;
  }
  if (n == 0) return std::nullopt;
  return m;
}

LinearTransform dc_to_linear(const DivideAndConquer& dc) {
  Driver r;
  r.text = "(" + dc.h.text + ")[n -> " + std::to_string(dc.b) + "^(m-1)]";
  r.fn = [h = dc.h, b = dc.b](std::uint64_t m) { return h(checked_power(b, m - 1)); };
  Linear lin{{dc.c}, {mpq_class(static_cast<unsigned long>(dc.a))}, std::move(r)};
  return {Recurrence(std::move(lin)), dc.b};
}

ComplexityFunction bottom_element(const Recurrence& r) {
  auto shared = std::make_shared<const Recurrence>(r);
  return ComplexityFunction("g_h", [shared](std::uint64_t n) {
    if (shared->is_anchor(n)) return Interval(shared->anchor_value(n));
    return Interval(ExtendedNonNeg(shared->h(n)));
  });
}

ComplexityFunction anchor(const Recurrence& r, const ComplexityFunction& f) {
  auto shared = std::make_shared<const Recurrence>(r);
  return ComplexityFunction(
      f.name(),
      [shared, f](std::uint64_t n) { return shared->is_anchor(n) ? Interval(shared->anchor_value(n)) : f(n); },
      f.witness());
}

ComplexityFunction random_member(const Recurrence& r, std::uint64_t N, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> den_exp(0, 3);
  std::vector<Interval> values(N + 1);
  for (std::uint64_t n = 1; n <= N; ++n) {
    long den = 1L << den_exp(rng);
    std::uniform_int_distribution<long> num(den, 64 * den);
    values[n] = Interval(mpq_class(num(rng), den));
  }
  auto table = ComplexityFunction::from_table("random", std::move(values), Interval(1), ExponentialWitness{6});
  return anchor(r, table);
}

std::vector<std::pair<ComplexityFunction, ComplexityFunction>> sample_pairs(const Recurrence& r, std::size_t count,
                                                                            std::uint64_t N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<ComplexityFunction, ComplexityFunction>> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    auto f = random_member(r, N, rng);
    auto g = random_member(r, N, rng);
    out.emplace_back(std::move(f), std::move(g));
  }
  return out;
}

ContractionReport contraction_check(const Recurrence& r,
                                    const std::vector<std::pair<ComplexityFunction, ComplexityFunction>>& pairs,
                                    std::uint64_t N, const mpq_class& tail_floor) {
  auto c = r.contraction_constant();
  if (!c) throw std::invalid_argument("no contraction constant is known for the probabilistic family");
  ContractionReport rep;
  rep.constant = *c;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [f, g] = pairs[k];
    Interval rhs = d_C(f, g, N, tail_floor);
    Interval lhs = d_C(apply(r, f), apply(r, g), N, tail_floor);
    ++rep.pairs;
    ExtendedNonNeg slack = lhs.width() + rhs.width();
    if (lhs.hi() > scale(*c, rhs.hi()) + slack) {
      ++rep.violations;
      if (!rep.first_violation) rep.first_violation = k;
    }
    if (!rhs.lo().is_zero()) {
      mpq_class q = lhs.lo().value() / rhs.lo().value();
      if (!rep.worst_ratio || q > *rep.worst_ratio) rep.worst_ratio = q;
    }
  }
  return rep;
}

}  // namespace kb::rec
