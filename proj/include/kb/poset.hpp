#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kb::poset {

/// Subset of a carrier of at most 64 elements, bit i = element i.
using Mask = std::uint64_t;
using Index = std::size_t;

inline constexpr std::size_t kMaxCarrier = 64;

inline Mask bit(Index i) { return Mask{1} << i; }
inline bool contains(Mask m, Index i) { return (m >> i) & 1U; }

class PosetAxiomError : public std::runtime_error {
 public:
  enum class Kind { NotReflexive, NotAntisymmetric, NotTransitive };
  PosetAxiomError(Kind kind, std::vector<Index> witness, const std::string& what)
      : std::runtime_error(what), kind_(kind), witness_(std::move(witness)) {}
  Kind kind() const { return kind_; }
  const std::vector<Index>& witness() const { return witness_; }

 private:
  Kind kind_;
  std::vector<Index> witness_;
};

/// Finite partially ordered set stored as per-element up-set bitmasks.
class FinitePoset {
 public:
  /// Validates reflexivity, antisymmetry and transitivity (in that order)
  /// and throws PosetAxiomError with the first witness found.
  static FinitePoset validate(std::vector<std::string> carrier,
                              const std::vector<std::vector<bool>>& leq);
  /// Same, from up-set masks: bit y of up[x] set iff x ⪯ y.
  static FinitePoset validate(std::vector<std::string> carrier, std::vector<Mask> up);

  std::size_t size() const { return up_.size(); }
  bool leq(Index x, Index y) const { return contains(up_[x], y); }
  Mask up(Index x) const { return up_[x]; }
  Mask down(Index x) const { return down_[x]; }
  Mask all() const { return size() == 64 ? ~Mask{0} : bit(size()) - 1; }
  const std::string& name(Index x) const { return names_[x]; }
  std::optional<Index> index_of(const std::string& name) const;

 private:
  FinitePoset() = default;
  std::vector<std::string> names_;
  std::vector<Mask> up_;
  std::vector<Mask> down_;
};

/// Total self-map on a carrier given by its image table.
struct SelfMap {
  std::vector<Index> image;

  Index operator()(Index x) const { return image[x]; }
  std::size_t size() const { return image.size(); }
  static SelfMap identity(std::size_t n);
};

struct OrbitReport {
  std::vector<Index> points;  ///< f^0(x0), f^1(x0), ... up to the first repeat
  std::size_t entered_cycle_at = 0;
  std::size_t cycle_length = 1;
  bool is_increasing = false;
  std::optional<Index> supremum;

  Mask point_set() const;
  /// Set of f^{n+1}(x0), n ≥ 0.
  Mask shifted_set() const;
};

struct PairWitness {
  Index x;
  Index y;
};

struct MonotonicityResult {
  bool holds = true;
  std::optional<PairWitness> witness;  ///< x ⪯ y with f(x) ⋠ f(y)
};

struct ChainCompleteness {
  bool holds = true;
  std::size_t chains_checked = 0;
  std::optional<Mask> witness;
};

/// Verdicts of the three statements of the orbital fixed point
/// characterization, both existentially and per candidate x*.
struct TheoremReport {
  bool fixed_point_exists = false;          ///< (1)
  bool increasing_orbit_route = false;      ///< (2)
  bool post_fixed_orbit_route = false;      ///< (3)
  Mask fixed_points = 0;
  Mask route2_limits = 0;  ///< x* reachable through (2)
  Mask route3_limits = 0;  ///< x* reachable through (3)
  bool consistent = true;
  std::optional<Index> witness;  ///< x* on which the statements disagree
};

class CounterexampleFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HypothesisUnmet : public std::runtime_error {
 public:
  HypothesisUnmet(std::string hypothesis, std::vector<Index> witness, const std::string& what)
      : std::runtime_error(what), hypothesis_(std::move(hypothesis)), witness_(std::move(witness)) {}
  const std::string& hypothesis() const { return hypothesis_; }
  const std::vector<Index>& witness() const { return witness_; }

 private:
  std::string hypothesis_;
  std::vector<Index> witness_;
};

struct LeastFixedPoint {
  Index point;
  bool minimum_of_fixed_points_above = false;  ///< x* ⪯ y for all y ∈ Fix(f) ∩ ↑x0
  bool below_post_fixed_points = false;        ///< x* ⪯ y0 whenever x0 ⪯ y0, f(y0) ⪯ y0
};

std::optional<Index> supremum(const FinitePoset& p, Mask subset);
/// Every nonempty chain of the poset.
std::vector<Mask> chains(const FinitePoset& p);
ChainCompleteness is_chain_complete(const FinitePoset& p);
MonotonicityResult is_monotone(const FinitePoset& p, const SelfMap& f);
OrbitReport orbit(const FinitePoset& p, const SelfMap& f, Index x0);
bool is_orbitally_continuous_at(const FinitePoset& p, const SelfMap& f, Index x0);
bool is_orbitally_continuous_at(const FinitePoset& p, const SelfMap& f, const OrbitReport& orbit);
bool is_order_continuous(const FinitePoset& p, const SelfMap& f);
/// Same, reusing a precomputed chain list.
bool is_order_continuous(const FinitePoset& p, const SelfMap& f, const std::vector<Mask>& chains);
Mask fixed_points(const SelfMap& f);

/// Evaluates the three equivalent statements by exhaustive search.
TheoremReport evaluate_kleene_equivalence(const FinitePoset& p, const SelfMap& f);
/// As above; throws CounterexampleFound if the statements disagree.
TheoremReport check_kleene_equivalence(const FinitePoset& p, const SelfMap& f);

LeastFixedPoint least_fixed_point_above(const FinitePoset& p, const SelfMap& f, Index x0);

/// All labeled posets on n elements (n ≤ 5), in a fixed deterministic order.
std::vector<FinitePoset> enumerate_labeled_posets(std::size_t n);
/// Random relation, reflexive-transitive closure, rejection on antisymmetry.
FinitePoset random_poset(std::size_t n, std::mt19937_64& rng);
SelfMap random_self_map(std::size_t n, std::mt19937_64& rng);
/// The i-th of the n^n self-maps in lexicographic order of images.
SelfMap self_map_by_index(std::size_t n, std::uint64_t index);

std::vector<std::string> default_names(std::size_t n);

}  // namespace kb::poset
