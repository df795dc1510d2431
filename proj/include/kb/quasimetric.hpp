#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kb/numeric.hpp"

namespace kb::qm {

/// Interval-valued distance; exact distances are degenerate intervals.
template <class Point>
using Distance = std::function<Interval(const Point&, const Point&)>;

template <class Point>
Distance<Point> conjugate(Distance<Point> d) {
  return [d = std::move(d)](const Point& x, const Point& y) { return d(y, x); };
}

template <class Point>
Distance<Point> symmetrize(Distance<Point> d) {
  return [d = std::move(d)](const Point& x, const Point& y) { return max(d(x, y), d(y, x)); };
}

/// x ⪯_d y iff d(x, y) = 0: True when the upper end is 0, False when the
/// lower end is positive.
inline Tri zero_verdict(const Interval& v) {
  if (v.hi().is_zero()) return Tri::True;
  if (!v.lo().is_zero()) return Tri::False;
  return Tri::Unknown;
}

template <class Point>
Tri specialization_leq(const Distance<Point>& d, const Point& x, const Point& y) {
  return zero_verdict(d(x, y));
}

class AxiomViolation : public std::runtime_error {
 public:
  enum class Axiom { Separation, Triangle };
  AxiomViolation(Axiom axiom, std::vector<std::size_t> witness, const std::string& what)
      : std::runtime_error(what), axiom_(axiom), witness_(std::move(witness)) {}
  Axiom axiom() const { return axiom_; }
  const std::vector<std::size_t>& witness() const { return witness_; }

 private:
  Axiom axiom_;
  std::vector<std::size_t> witness_;
};

struct AxiomReport {
  std::size_t pairs_checked = 0;
  std::size_t triples_checked = 0;
};

/// Checks d(x,x) = 0, that distinct points are not at distance 0 both ways,
/// and lower(d(x,z)) ≤ upper(d(x,y)) + upper(d(y,z)). Sample points are
/// assumed pairwise distinct. Throws AxiomViolation naming sample indices.
template <class Point>
AxiomReport check_axioms_on_sample(const Distance<Point>& d, const std::vector<Point>& sample) {
  const std::size_t m = sample.size();
  std::vector<std::vector<Interval>> D(m, std::vector<Interval>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) D[i][j] = d(sample[i], sample[j]);
  }
  AxiomReport r;
  for (std::size_t i = 0; i < m; ++i) {
    if (!D[i][i].lo().is_zero()) {
      throw AxiomViolation(AxiomViolation::Axiom::Separation, {i, i}, "d(x,x) is not 0");
    }
    for (std::size_t j = 0; j < m; ++j) {
      ++r.pairs_checked;
      if (i != j && zero_verdict(D[i][j]) == Tri::True && zero_verdict(D[j][i]) == Tri::True) {
        throw AxiomViolation(AxiomViolation::Axiom::Separation, {i, j},
                             "distinct points at distance 0 in both directions");
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        ++r.triples_checked;
        if (D[i][k].lo() > D[i][j].hi() + D[j][k].hi()) {
          throw AxiomViolation(AxiomViolation::Axiom::Triangle, {i, j, k}, "triangle inequality fails");
        }
      }
    }
  }
  return r;
}

class PreconditionFailed : public std::runtime_error {
 public:
  PreconditionFailed(const std::string& what, std::size_t index) : std::runtime_error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Which convergence of the prefix towards x is asserted: under d^s, or
/// d(x, x_n) → 0 (the τ(d) variant).
enum class Convergence { Symmetric, Forward };

struct LeastReport {
  bool upper_bound = false;             ///< x_n ⪯_d x for every prefix point
  bool below_candidate_bounds = false;  ///< x ⪯_d u for every candidate upper bound u
  bool converged = false;               ///< last distance within tolerance
  std::size_t candidate_bounds = 0;
  Interval last_distance;
  /// Holds only on the computed prefix; the statement concerns the full sequence.
  bool prefix_certified() const { return upper_bound && below_candidate_bounds && converged; }
};

/// Supremum check for an increasing sequence prefix. Throws
/// PreconditionFailed if the prefix is not certified increasing.
template <class Point>
LeastReport lemma_least_check(const Distance<Point>& d, const std::vector<Point>& sequence, const Point& x,
                              const std::vector<Point>& candidates, const mpq_class& tolerance,
                              Convergence mode = Convergence::Symmetric) {
  if (sequence.empty()) throw PreconditionFailed("empty sequence", 0);
  for (std::size_t k = 0; k + 1 < sequence.size(); ++k) {
    if (specialization_leq(d, sequence[k], sequence[k + 1]) != Tri::True) {
      throw PreconditionFailed("sequence is not increasing at index " + std::to_string(k), k);
    }
  }
  LeastReport r;
  r.upper_bound = true;
  for (const auto& p : sequence) r.upper_bound = r.upper_bound && specialization_leq(d, p, x) == Tri::True;
  r.below_candidate_bounds = true;
  for (const auto& u : candidates) {
    bool bounds = true;
    for (const auto& p : sequence) bounds = bounds && specialization_leq(d, p, u) == Tri::True;
    if (!bounds) continue;
    ++r.candidate_bounds;
    r.below_candidate_bounds = r.below_candidate_bounds && specialization_leq(d, x, u) == Tri::True;
  }
  r.last_distance = mode == Convergence::Symmetric ? max(d(sequence.back(), x), d(x, sequence.back()))
                                                    : d(x, sequence.back());
  r.converged = r.last_distance.hi() <= ExtendedNonNeg(tolerance);
  return r;
}

class ContractionViolated : public std::runtime_error {
 public:
  ContractionViolated(std::size_t i, std::size_t j, const std::string& what)
      : std::runtime_error(what), pair_{i, j} {}
  std::pair<std::size_t, std::size_t> pair() const { return pair_; }

 private:
  std::pair<std::size_t, std::size_t> pair_;
};

class ConclusionViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ContractionReport {
  std::size_t pairs_checked = 0;
  std::optional<ExtendedNonNeg> worst_ratio;  ///< max lower(d(fx,fy)) / lower(d(x,y)) over lower(d(x,y)) > 0
  std::size_t monotonicity_premises = 0;
  std::size_t pre_post_premises = 0;
  std::size_t undecided = 0;
};

/// Checks d(f(x), f(y)) ≤ c·d(x, y) on all ordered sample pairs (violated
/// when the lower end exceeds c times the upper end), then the two
/// consequences: monotonicity for ⪯_d, and v ⪯_d w whenever v ⪯_d f(v)
/// and f(w) ⪯_d w.
template <class Point>
ContractionReport contractive_map_properties(const Distance<Point>& d, const std::function<Point(const Point&)>& f,
                                             const std::vector<Point>& sample, const mpq_class& c) {
  if (sgn(c) < 0 || c >= 1) throw std::invalid_argument("contraction constant must lie in [0, 1)");
  const std::size_t m = sample.size();
  std::vector<Point> image;
  image.reserve(m);
  for (const auto& x : sample) image.push_back(f(x));

  ContractionReport r;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      ++r.pairs_checked;
      Interval before = d(sample[i], sample[j]);
      Interval after = d(image[i], image[j]);
      if (after.lo() > scale(c, before.hi())) {
        throw ContractionViolated(i, j, "d(f(x),f(y)) exceeds c*d(x,y) for sample pair (" + std::to_string(i) +
                                            "," + std::to_string(j) + ")");
      }
      if (!before.lo().is_zero() && !before.lo().is_infinite() && !after.lo().is_infinite()) {
        ExtendedNonNeg q(after.lo().value() / before.lo().value());
        if (!r.worst_ratio || q > *r.worst_ratio) r.worst_ratio = q;
      }
      Tri premise = zero_verdict(before);
      if (premise == Tri::True) {
        ++r.monotonicity_premises;
        Tri concl = zero_verdict(after);
        if (concl == Tri::False) throw ConclusionViolated("f is not monotone for the specialization order");
        if (concl == Tri::Unknown) ++r.undecided;
      }
    }
  }
  for (std::size_t v = 0; v < m; ++v) {
    if (zero_verdict(d(sample[v], image[v])) != Tri::True) continue;
    for (std::size_t w = 0; w < m; ++w) {
      if (zero_verdict(d(image[w], sample[w])) != Tri::True) continue;
      ++r.pre_post_premises;
      Tri concl = zero_verdict(d(sample[v], sample[w]));
      if (concl == Tri::False) throw ConclusionViolated("a pre-fixed point is not below a post-fixed point");
      if (concl == Tri::Unknown) ++r.undecided;
    }
  }
  return r;
}

}  // namespace kb::qm
