#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "kb/expr.hpp"
#include "kb/numeric.hpp"

namespace kb {

class ZeroValueReciprocal : public DomainError {
 public:
  explicit ZeroValueReciprocal(std::uint64_t n)
      : DomainError("reciprocal of a zero value at n=" + std::to_string(n)), n_(n) {}
  std::uint64_t n() const { return n_; }

 private:
  std::uint64_t n_;
};

class WitnessViolated : public DomainError {
 public:
  WitnessViolated(std::uint64_t n, const std::string& what) : DomainError(what), n_(n) {}
  std::uint64_t n() const { return n_; }

 private:
  std::uint64_t n_;
};

/// f(n) ≤ 2^n for every n ≥ from (checked on finite values only).
struct ExponentialWitness {
  std::uint64_t from = 64;
};
/// f(n) ≤ bound for every n ≥ from.
struct BoundedWitness {
  mpq_class bound;
  std::uint64_t from = 1;
};
/// No pointwise bound is declared; membership in the space rests on how the
/// function was built (e.g. the image of a functional that maps the space
/// into itself).
struct StructuralWitness {
  std::string reason;
};
using GrowthWitness = std::variant<ExponentialWitness, BoundedWitness, StructuralWitness>;

std::string describe(const GrowthWitness& w);

/// Total map from positive integers to enclosures of extended nonnegative
/// values. Copies share one memo table, guarded by a mutex; the evaluator is
/// called outside the lock, so evaluators may evaluate other functions.
class ComplexityFunction {
 public:
  using Evaluator = std::function<Interval(std::uint64_t)>;

  ComplexityFunction(std::string name, Evaluator eval, GrowthWitness witness = ExponentialWitness{});

  static ComplexityFunction from_expr(const Expr& e, unsigned precision_bits = 128,
                                      GrowthWitness witness = ExponentialWitness{},
                                      ExprWarnings* warnings = nullptr);
  static ComplexityFunction constant(ExtendedNonNeg v);
  /// values[n] for 1 ≤ n < values.size() (index 0 is ignored), `beyond` after.
  static ComplexityFunction from_table(std::string name, std::vector<Interval> values, Interval beyond,
                                       GrowthWitness witness = ExponentialWitness{});

  /// Memoized; throws WitnessViolated when the declared growth witness is
  /// certainly violated at n. n must be positive.
  Interval operator()(std::uint64_t n) const;

  /// Values on [1, N], index 0 left as 0.
  std::vector<Interval> tabulate(std::uint64_t N) const;

  const std::string& name() const;
  const GrowthWitness& witness() const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

/// d_C(f, g) = Σ 2^-n max(1/g(n) − 1/f(n), 0), truncated after N terms.
/// The upper end adds 2^-N / tail_floor, valid whenever g(n) ≥ tail_floor
/// for n > N. The declared floor is checked on g over (N/2, N].
Interval d_C(const ComplexityFunction& f, const ComplexityFunction& g, std::uint64_t N,
             const mpq_class& tail_floor = 1);

/// The exact partial sum Σ_{n ≤ N} of the same series, i.e. d_C of the
/// restrictions to [1, N]. A degenerate interval.
Interval d_C_prefix(const ComplexityFunction& f, const ComplexityFunction& g, std::uint64_t N);
/// Same, on tables indexed 1..N.
Interval d_C_prefix(const std::vector<Interval>& f, const std::vector<Interval>& g);

class TailFloorViolated : public DomainError {
 public:
  TailFloorViolated(std::uint64_t n, const std::string& what) : DomainError(what), n_(n) {}
  std::uint64_t n() const { return n_; }

 private:
  std::uint64_t n_;
};

enum class Status { Certified, Refuted, Unknown };
const char* to_string(Status s);

/// Pointwise comparison f(n) ≤ g(n) on [1, N], ∞ as top. A refutation
/// anywhere on the prefix takes precedence over an undecided point.
struct OrderVerdict {
  Status status = Status::Certified;
  std::uint64_t checked_to = 0;
  std::optional<std::uint64_t> n;  ///< refutation point, or first undecided point
  std::optional<Interval> lhs;
  std::optional<Interval> rhs;
};

OrderVerdict leq_prefix(const ComplexityFunction& f, const ComplexityFunction& g, std::uint64_t N);
OrderVerdict leq_prefix(const std::vector<Interval>& f, const std::vector<Interval>& g);

struct SearchGrid {
  std::vector<mpq_class> c;
  std::vector<std::uint64_t> n0;

  /// c ∈ {2^-4, …, 2^8}, n0 ∈ {1, …, 16}.
  static SearchGrid standard();
  std::string describe() const;
};

/// Restricts the inequality scan to the points where the predicate holds.
using Domain = std::function<bool(std::uint64_t)>;

/// {b^k : k ≥ 1}.
Domain powers_of(std::uint64_t b);

struct AsymptoticCertificate {
  enum class Kind { O, Omega };
  Kind kind = Kind::O;
  Status status = Status::Refuted;
  mpq_class c;
  std::uint64_t n0 = 0;
  std::uint64_t checked_to = 0;
  std::optional<std::uint64_t> witness;  ///< refuted: n with the largest ratio; unknown: first undecided n
  std::string grid;
};

const char* to_string(AsymptoticCertificate::Kind k);

/// Smallest (n0, c) on the grid, lexicographically, with f(n) ≤ c·g(n) on
/// [n0, N] ∩ domain. n0 is reported as the first domain point ≥ n0.
AsymptoticCertificate in_O(const ComplexityFunction& f, const ComplexityFunction& g, const SearchGrid& grid,
                           std::uint64_t N, const Domain& domain = {});
AsymptoticCertificate in_O(const std::vector<Interval>& f, const std::vector<Interval>& g,
                           const SearchGrid& grid, const Domain& domain = {});
/// Smallest n0, then largest c, with c·g(n) ≤ f(n) on [n0, N] ∩ domain.
AsymptoticCertificate in_Omega(const ComplexityFunction& f, const ComplexityFunction& g,
                               const SearchGrid& grid, std::uint64_t N, const Domain& domain = {});
AsymptoticCertificate in_Omega(const std::vector<Interval>& f, const std::vector<Interval>& g,
                               const SearchGrid& grid, const Domain& domain = {});

/// Rescans a Certified certificate's inequality on [n0, checked_to] with a
/// plain loop. True for non-certified certificates.
bool verify_certificate(const AsymptoticCertificate& cert, const std::vector<Interval>& f,
                        const std::vector<Interval>& g, const Domain& domain = {});

struct SeriesWeight {
  Interval partial;  ///< Σ_{n ≤ N} 2^-n f(n)
  std::optional<mpq_class> tail_bound;
  bool upper_unbounded = false;  ///< the witness alone does not bound the tail
};

SeriesWeight series_weight(const ComplexityFunction& f, std::uint64_t N);

}  // namespace kb
