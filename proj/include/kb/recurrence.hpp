#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "kb/complexity.hpp"
#include "kb/expr.hpp"
#include "kb/numeric.hpp"

namespace kb::rec {

class InvalidSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class WeightSumExceeded : public DomainError {
 public:
  WeightSumExceeded(std::uint64_t n, mpq_class sum, mpq_class K);
  std::uint64_t n() const { return n_; }
  const mpq_class& sum() const { return sum_; }

 private:
  std::uint64_t n_;
  mpq_class sum_;
};

/// Exact driver function n ↦ h(n).
struct Driver {
  std::string text;
  std::function<mpq_class(std::uint64_t)> fn;

  static Driver from_expr(const Expr& e);
  mpq_class operator()(std::uint64_t n) const { return fn(n); }
};

/// Exact weights (i, n) ↦ v_i(n).
struct WeightFn {
  std::string text;
  std::function<mpq_class(std::uint64_t, std::uint64_t)> fn;
  bool depends_on_i = true;

  static WeightFn from_expr(const Expr& e);
};

/// T(1) = c, T(n) = a·T(n/b) + h(n) on {b^k : k ≥ 1}.
struct DivideAndConquer {
  mpq_class c;
  std::uint64_t a = 2;
  std::uint64_t b = 2;
  Driver h;
};

/// T(i) = c_i for i ≤ k, T(n) = Σ a_i T(n−i) + h(n) after.
struct Linear {
  std::vector<mpq_class> base;
  std::vector<mpq_class> coeffs;
  Driver h;
  std::size_t k() const { return base.size(); }
};

/// T(n) = c_n for n < k, T(n) = Σ_{i<n} v_i(n) T(i) + h(n) from k on.
struct Probabilistic {
  std::size_t k = 2;
  std::vector<mpq_class> base;  ///< c_1 … c_{k−1}
  WeightFn weights;
  mpq_class K;
  Driver h;
};

using Family = std::variant<DivideAndConquer, Linear, Probabilistic>;

/// A validated recurrence with exact caches of h and the weights. Caches are
/// filled by prepare() and only read afterwards, so a prepared Recurrence
/// can be shared by parallel kernels.
class Recurrence {
 public:
  explicit Recurrence(Family family);

  const Family& family() const { return family_; }
  std::string tag() const;
  std::string describe() const;

  /// Fills caches on [1, N] and checks the weight-sum bound eagerly.
  void prepare(std::uint64_t N);
  std::uint64_t prepared_to() const { return prepared_; }

  mpq_class h(std::uint64_t n) const;
  mpq_class weight(std::uint64_t i, std::uint64_t n) const;
  bool weights_depend_on_i() const;
  /// Σ_{i<n} v_i(n); throws WeightSumExceeded above K.
  mpq_class weight_sum(std::uint64_t n) const;

  /// Points whose value is fixed by the family regardless of the argument:
  /// base cases, and off-grid points for divide and conquer.
  bool is_anchor(std::uint64_t n) const;
  /// The anchored value at such a point.
  ExtendedNonNeg anchor_value(std::uint64_t n) const;
  /// Points where the recurrence is solved (excludes D&C off-grid points).
  bool in_domain(std::uint64_t n) const;

  /// Contraction constant: 1/2 for D&C, (max 1/a_i)(2^k − 1)/2^k for linear.
  std::optional<mpq_class> contraction_constant() const;

  /// Φ(f)(n), reading f only below n.
  template <class V, class Get>
  V point_value(std::uint64_t n, Get&& f) const;

 private:
  Family family_;
  std::uint64_t prepared_ = 0;
  std::vector<mpq_class> h_cache_;
  std::vector<mpq_class> weight_sum_cache_;
  /// i-independent weights: v(n); otherwise flattened rows v_1(n)…v_{n−1}(n).
  std::vector<mpq_class> weight_cache_;
  std::vector<std::size_t> weight_offset_;
};

template <class V>
V from_exact(const ExtendedNonNeg& v) {
  if constexpr (std::is_same_v<V, Interval>) {
    return Interval(v);
  } else {
    return v;
  }
}

template <class V, class Get>
V Recurrence::point_value(std::uint64_t n, Get&& f) const {
  if (is_anchor(n)) return from_exact<V>(anchor_value(n));
  if (const auto* dc = std::get_if<DivideAndConquer>(&family_)) {
    V v = scale(mpq_class(static_cast<unsigned long>(dc->a)), f(n / dc->b));
    v += from_exact<V>(ExtendedNonNeg(h(n)));
    return v;
  }
  if (const auto* lin = std::get_if<Linear>(&family_)) {
    V v = from_exact<V>(ExtendedNonNeg(h(n)));
    for (std::size_t i = 1; i <= lin->k(); ++i) v += scale(lin->coeffs[i - 1], f(n - i));
    return v;
  }
  V v = from_exact<V>(ExtendedNonNeg(h(n)));
  for (std::uint64_t i = 1; i < n; ++i) v += scale(weight(i, n), f(i));
  return v;
}

/// Values on [1, N] at index n; index 0 is unused.
template <class V>
using Table = std::vector<V>;

/// Φ applied lazily to a complexity function.
ComplexityFunction apply(const Recurrence& r, const ComplexityFunction& f);

/// Reference kernel: recomputes every point of Φ(x) on [1, N].
template <class V>
Table<V> phi_step_serial(const Recurrence& r, const Table<V>& x);

/// OpenMP kernel for one Kleene step x ↦ Φ(x). When x = Φ(prev) and
/// prev and x agree below `unchanged_before`, points n ≤ unchanged_before
/// are copied from x (each Φ(x)(n) reads only points below n). Pass 0 to
/// recompute everything. i-independent weights use prefix sums.
template <class V>
Table<V> phi_step_parallel(const Recurrence& r, const Table<V>& x, std::uint64_t unchanged_before = 0);

/// Independent forward dynamic program for T(1..N); index 0 unused. D&C
/// values are ∞ off {1} ∪ {b^k}.
std::vector<ExtendedNonNeg> oracle_solve(const Recurrence& r, std::uint64_t N);

struct LinearTransform {
  Recurrence linear;
  std::uint64_t b;
  /// m ↦ b^{m−1}
  std::uint64_t to_dc_index(std::uint64_t m) const;
  /// b^{m−1} ↦ m, absent off the grid.
  std::optional<std::uint64_t> to_linear_index(std::uint64_t n) const;
};

/// S(m) = T(b^{m−1}): S(1) = c, S(m) = a·S(m−1) + h(b^{m−1}).
LinearTransform dc_to_linear(const DivideAndConquer& dc);

/// Anchored bottom candidate: h(n) off the anchors, anchor values on them.
/// For the probabilistic family this is g_h.
ComplexityFunction bottom_element(const Recurrence& r);

/// Replaces a candidate's values on the anchor points by the family's
/// anchor values.
ComplexityFunction anchor(const Recurrence& r, const ComplexityFunction& f);

/// Seeded random member of the family's anchored domain, with free values
/// in [1, 64] on [1, N] and 1 beyond (so that tail floor 1 is valid).
ComplexityFunction random_member(const Recurrence& r, std::uint64_t N, std::mt19937_64& rng);

struct ContractionReport {
  mpq_class constant;
  std::size_t pairs = 0;
  std::size_t violations = 0;
  /// Largest lower(d(Φf,Φg)) / lower(d(f,g)) over pairs with lower(d(f,g)) > 0.
  std::optional<mpq_class> worst_ratio;
  std::optional<std::size_t> first_violation;  ///< pair index
};

/// upper(d_C(Φf, Φg)) ≤ c·upper(d_C(f, g)) + slack, slack being both
/// intervals' widths combined, for each pair.
ContractionReport contraction_check(const Recurrence& r,
                                    const std::vector<std::pair<ComplexityFunction, ComplexityFunction>>& pairs,
                                    std::uint64_t N, const mpq_class& tail_floor = 1);

/// `count` seeded pairs of random_member.
std::vector<std::pair<ComplexityFunction, ComplexityFunction>> sample_pairs(const Recurrence& r, std::size_t count,
                                                                            std::uint64_t N, std::uint64_t seed);

}  // namespace kb::rec
